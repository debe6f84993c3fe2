"""Geometric phase, concurrence and entropy of two qubits in bosonic and spin baths."""

from .boson import BosonBathSpec, PrefactorConvention, Spectral, boson_factors
from .core import (
    Branch,
    DegeneracyError,
    DensityMatrix4,
    GeneralInitialState,
    PairPhaseError,
    ParameterDomainError,
    PreconditionError,
    StateIntegrityError,
    SystemParams,
    UnsupportedRegimeError,
    WernerSpec,
)
from .entanglement import concurrence_closed, concurrence_wootters, linear_entropy
from .evolution import CLOSED, ClosedEnv, Trajectory, density_stack, trajectory
from .geophase import (
    GeoPhaseResult,
    Method,
    PerturbativeKind,
    kinematic_phase,
    perturbative_phase,
    reduced_phase,
    reduced_phase_boson_mu,
    reduced_phase_boson_theta,
    reduced_phase_spin,
)
from .spinbath import SpinBathSpec, p_factor, q_factor

__version__ = "0.1.0"
