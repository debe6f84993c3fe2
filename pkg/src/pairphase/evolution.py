"""Exact reduced density matrix of the qubit pair, sampled in time.

Both bath models couple through sigma_z only, so populations never change
and every coherence picks up a free rotation times a bath factor. Nothing
here integrates a master equation; states are evaluated in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .boson import BosonBathSpec, boson_factors
from .core import (
    Branch,
    DensityMatrix4,
    GeneralInitialState,
    ParameterDomainError,
    PreconditionError,
    SystemParams,
    UnsupportedRegimeError,
    WernerSpec,
    check_density_entries,
)
from .spinbath import SpinBathSpec, p_factor, q_factor


@dataclass(frozen=True)
class ClosedEnv:
    """No environment: unitary evolution under the system Hamiltonian."""


CLOSED = ClosedEnv()

EnvironmentSpec = Union[BosonBathSpec, SpinBathSpec, ClosedEnv]
InitialState = Union[WernerSpec, GeneralInitialState]


def _times(t) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ParameterDomainError("time must be >= 0")
    return arr


def _hermitian_fill(upper: dict, diag, n_t: int) -> np.ndarray:
    rho = np.zeros((n_t, 4, 4), dtype=complex)
    rho[:, range(4), range(4)] = diag
    for (i, j), val in upper.items():
        rho[:, i, j] = val
        rho[:, j, i] = np.conj(val)
    return rho


def _general_stack(psi0: GeneralInitialState, params: SystemParams, times, damp, lamb12):
    """Fill the general pure-dephasing matrix.

    ``damp`` maps each upper-triangle position to its real damping factor,
    ``lamb12`` is the complex dissipation phase factor.
    """
    a = psi0.amplitudes
    w1, w2, g = params.omega1, params.omega2, params.gamma_qq
    freq = {
        (0, 1): 2 * g + w2,
        (0, 2): 2 * g + w1,
        (0, 3): w1 + w2,
        (1, 2): w1 - w2,
        (1, 3): w1 - 2 * g,
        (2, 3): w2 - 2 * g,
    }
    phase = {(0, 1): lamb12, (0, 2): lamb12, (1, 3): np.conj(lamb12), (2, 3): np.conj(lamb12)}
    upper = {}
    for (i, j), w in freq.items():
        upper[(i, j)] = (
            a[i] * np.conj(a[j]) * np.exp(-1j * w * times) * damp[(i, j)] * phase.get((i, j), 1.0)
        )
    return _hermitian_fill(upper, np.abs(a) ** 2, times.size)


def boson_general_stack(psi0: GeneralInitialState, params: SystemParams, bath: BosonBathSpec, t):
    times = _times(t)
    f = boson_factors(bath, times)
    damp = {
        (0, 1): f.gamma2,
        (0, 2): f.gamma1,
        (0, 3): f.gamma1 * f.gamma2 * f.gamma12**2,
        (1, 2): f.gamma1 * f.gamma2 * f.gamma12_tilde_sq,
        (1, 3): f.gamma1,
        (2, 3): f.gamma2,
    }
    return _general_stack(psi0, params, times, damp, np.exp(1j * f.lambda12_phase))


def closed_general_stack(psi0: GeneralInitialState, params: SystemParams, t):
    times = _times(t)
    ones = np.ones_like(times)
    damp = {k: ones for k in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]}
    return _general_stack(psi0, params, times, damp, ones)


def rho_boson_general(psi0, params, bath, t) -> DensityMatrix4:
    """Reduced state at time ``t`` for a pure initial state in a bosonic bath."""
    return DensityMatrix4(boson_general_stack(psi0, params, bath, t)[0])


def _werner_stack(spec: WernerSpec, params: SystemParams, times, coherence_factor):
    r, p = spec.r, spec.p
    noise = (1 - r) / 4
    amp = r * np.sqrt(p * (1 - p))
    if spec.branch is Branch.THETA:
        diag = [noise + r * (1 - p), noise, noise, noise + r * p]
        pos, omega = (0, 3), params.omega1 + params.omega2
    else:
        diag = [noise, noise + r * (1 - p), noise + r * p, noise]
        pos, omega = (1, 2), params.omega1 - params.omega2
    upper = {pos: amp * np.exp(-1j * omega * times) * coherence_factor}
    return _hermitian_fill(upper, diag, times.size)


def boson_werner_stack(spec: WernerSpec, params: SystemParams, bath: BosonBathSpec, t):
    times = _times(t)
    f = boson_factors(bath, times)
    damp = f.theta_damping if spec.branch is Branch.THETA else f.mu_damping
    return _werner_stack(spec, params, times, damp)


def spin_werner_stack(spec: WernerSpec, params: SystemParams, bath: SpinBathSpec, t):
    times = _times(t)
    factor = q_factor if spec.branch is Branch.THETA else p_factor
    return _werner_stack(spec, params, times, factor(bath, times))


def closed_werner_stack(spec: WernerSpec, params: SystemParams, t):
    times = _times(t)
    return _werner_stack(spec, params, times, np.ones_like(times))


def rho_boson_werner(spec, params, bath, t) -> DensityMatrix4:
    """Werner-type initial state in a bosonic bath."""
    return DensityMatrix4(boson_werner_stack(spec, params, bath, t)[0])


def rho_spin_werner(spec, params, bath, t) -> DensityMatrix4:
    """Werner-type initial state in a spin bath (Q on THETA, P on MU)."""
    return DensityMatrix4(spin_werner_stack(spec, params, bath, t)[0])


def density_stack(initial: InitialState, params: SystemParams, env: EnvironmentSpec, t) -> np.ndarray:
    """Raw (T, 4, 4) array of states for any supported initial state and environment."""
    if isinstance(initial, WernerSpec):
        if isinstance(env, BosonBathSpec):
            return boson_werner_stack(initial, params, env, t)
        if isinstance(env, SpinBathSpec):
            return spin_werner_stack(initial, params, env, t)
        if isinstance(env, ClosedEnv):
            return closed_werner_stack(initial, params, t)
    elif isinstance(initial, GeneralInitialState):
        if isinstance(env, BosonBathSpec):
            return boson_general_stack(initial, params, env, t)
        if isinstance(env, ClosedEnv):
            return closed_general_stack(initial, params, t)
        if isinstance(env, SpinBathSpec):
            raise UnsupportedRegimeError(
                "spin baths are only available for Werner-type initial states"
            )
    raise PreconditionError(f"unsupported combination {type(initial).__name__}/{type(env).__name__}")


def density_at(initial: InitialState, params: SystemParams, env: EnvironmentSpec, t) -> DensityMatrix4:
    return DensityMatrix4(density_stack(initial, params, env, t)[0])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Closed-form states sampled on a strictly increasing grid starting at 0."""

    times: np.ndarray
    states: np.ndarray
    params: SystemParams
    env: EnvironmentSpec
    initial: InitialState

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        states = np.array(self.states, dtype=complex)
        if times.ndim != 1 or times.size < 2:
            raise PreconditionError("a trajectory needs at least two samples")
        if times[0] != 0:
            raise PreconditionError("trajectories start at t = 0")
        if np.any(np.diff(times) <= 0):
            raise PreconditionError("sample times must be strictly increasing")
        if states.shape != (times.size, 4, 4):
            raise PreconditionError(f"states have shape {states.shape}, expected ({times.size}, 4, 4)")
        check_density_entries(states)
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return self.times.size

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def state(self, i: int) -> DensityMatrix4:
        return DensityMatrix4(self.states[i])

    def sample(self, t) -> np.ndarray:
        """Evaluate the same closed form at arbitrary extra times."""
        return density_stack(self.initial, self.params, self.env, t)


def trajectory(initial, params, env, t_end: float, steps: int) -> Trajectory:
    """Sample ``steps`` uniformly spaced states on [0, t_end]."""
    if steps < 2:
        raise PreconditionError("steps must be >= 2")
    if not t_end > 0:
        raise PreconditionError("t_end must be > 0")
    times = np.linspace(0.0, t_end, steps)
    return Trajectory(times, density_stack(initial, params, env, times), params, env, initial)
