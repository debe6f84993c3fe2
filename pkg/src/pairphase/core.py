"""Shared domain types for the two-qubit system.

Basis order is fixed everywhere as (|00>, |01>, |10>, |11>). Units use
hbar = 1, so frequencies and energies share the same scale.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
NORM_TOL = 1e-12
_GAUGE_TIE_TOL = 1e-12


class PairPhaseError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(PairPhaseError, ValueError):
    """A parameter lies outside its physical or mathematical domain."""


class StateIntegrityError(PairPhaseError, ValueError):
    """A matrix does not satisfy the density-matrix invariants."""


class PreconditionError(PairPhaseError, ValueError):
    """An operation was called outside its supported setting."""


class UnsupportedRegimeError(PairPhaseError, ValueError):
    """A closed-form expression is not valid for the requested parameters."""


class DegeneracyError(PairPhaseError, RuntimeError):
    """Eigenvalues of a tracked branch stay degenerate over a finite interval."""


class Branch(enum.Enum):
    """Which entangled component seeds the Werner mixture.

    THETA is sqrt(1-p)|00> + sqrt(p)|11>, MU is sqrt(1-p)|01> + sqrt(p)|10>.
    """

    THETA = "theta"
    MU = "mu"


@dataclass(frozen=True)
class SystemParams:
    """Qubit frequencies and the zz coupling between the qubits."""

    omega1: float
    omega2: float = 0.0
    gamma_qq: float = 0.0

    def __post_init__(self):
        if not self.omega1 > 0:
            raise ParameterDomainError(f"omega1 must be > 0, got {self.omega1}")
        if not self.omega2 >= 0:
            raise ParameterDomainError(f"omega2 must be >= 0, got {self.omega2}")

    def cycle_frequency(self, branch: Branch) -> float:
        """Frequency of the rotating coherence for ``branch``.

        THETA rotates at omega1 + omega2, MU at omega1 - omega2 (signed).
        """
        if branch is Branch.THETA:
            return self.omega1 + self.omega2
        omega = self.omega1 - self.omega2
        if omega == 0:
            raise PreconditionError("MU branch needs omega1 != omega2 to define a cycle")
        return omega

    def period(self, branch: Branch) -> float:
        return 2 * np.pi / abs(self.cycle_frequency(branch))


@dataclass(frozen=True)
class GeneralInitialState:
    """Pure two-qubit state alpha|00> + beta|01> + zeta|10> + delta|11>."""

    alpha: complex
    beta: complex
    zeta: complex
    delta: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "zeta", "delta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ParameterDomainError(f"amplitudes are not normalised: sum |c|^2 = {norm!r}")

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.zeta, self.delta], dtype=complex)

    def projector(self) -> np.ndarray:
        a = self.amplitudes
        return np.outer(a, a.conj())


@dataclass(frozen=True)
class WernerSpec:
    """Werner-type mixture (1-r)/4 I + r|phi><phi| with |phi> chosen by ``branch``."""

    r: float
    p: float
    branch: Branch = Branch.THETA

    def __post_init__(self):
        if isinstance(self.branch, str):
            object.__setattr__(self, "branch", Branch(self.branch))
        if not 0 < self.r <= 1:
            raise ParameterDomainError(f"r must lie in (0, 1], got {self.r}")
        if not 0 <= self.p <= 1:
            raise ParameterDomainError(f"p must lie in [0, 1], got {self.p}")

    def pure_component(self) -> GeneralInitialState:
        a, b = np.sqrt(1 - self.p), np.sqrt(self.p)
        if self.branch is Branch.THETA:
            return GeneralInitialState(a, 0, 0, b)
        return GeneralInitialState(0, a, b, 0)


def check_density_entries(entries: np.ndarray) -> None:
    """Raise StateIntegrityError unless ``entries`` (shape (..., 4, 4)) are valid states."""
    entries = np.asarray(entries)
    if entries.shape[-2:] != (4, 4):
        raise StateIntegrityError(f"expected 4x4 matrices, got shape {entries.shape}")
    herm = np.max(np.abs(entries - np.swapaxes(entries, -1, -2).conj()), initial=0.0)
    if herm > HERMITIAN_TOL:
        raise StateIntegrityError(f"matrix is not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(entries, axis1=-2, axis2=-1)
    tr_err = np.max(np.abs(tr - 1.0), initial=0.0)
    if tr_err > TRACE_TOL:
        raise StateIntegrityError(f"trace differs from 1 by {tr_err:.3e}")
    lo = np.min(np.linalg.eigvalsh(entries))
    if lo < -POSITIVITY_TOL:
        raise StateIntegrityError(f"matrix has negative eigenvalue {lo:.3e}")


@dataclass(frozen=True, eq=False)
class DensityMatrix4:
    """Validated, read-only 4x4 density matrix."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        check_density_entries(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __getitem__(self, idx):
        return self.entries[idx]

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.entries))

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


@dataclass(frozen=True, eq=False)
class EigenSystem4:
    """Eigenvalues (descending) with matching gauge-fixed eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive.

    Ties (within 1e-12) go to the lowest basis index. Works on stacks of
    shape (..., 4, k).
    """
    mags = np.abs(vectors)
    top = mags.max(axis=-2, keepdims=True)
    idx = np.argmax(mags >= top - _GAUGE_TIE_TOL, axis=-2)
    pivot = np.take_along_axis(vectors, idx[..., None, :], axis=-2)
    phase = pivot / np.where(np.abs(pivot) > 0, np.abs(pivot), 1.0)
    return vectors * phase.conj()


def eigh_descending(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched Hermitian eigendecomposition, eigenvalues sorted descending, gauge fixed."""
    evals, evecs = np.linalg.eigh(stack)
    evals = evals[..., ::-1]
    evecs = evecs[..., ::-1]
    return evals, fix_gauge(evecs)


def eigensystem(rho) -> EigenSystem4:
    """Full eigendecomposition of a density matrix."""
    entries = np.asarray(rho, dtype=complex)
    if not isinstance(rho, DensityMatrix4):
        check_density_entries(entries)
    evals, evecs = eigh_descending(entries)
    evals = evals.copy()
    evecs = evecs.copy()
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return EigenSystem4(evals, evecs)


def werner_matrix(spec: WernerSpec) -> np.ndarray:
    phi = spec.pure_component().amplitudes
    return (1 - spec.r) / 4 * np.eye(4, dtype=complex) + spec.r * np.outer(phi, phi.conj())


def werner_density(spec: WernerSpec) -> DensityMatrix4:
    """Initial Werner-type state for ``spec``."""
    return DensityMatrix4(werner_matrix(spec))
