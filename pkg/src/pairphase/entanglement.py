"""Concurrence and entropy of the qubit pair along a trajectory."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boson import boson_factors
from .core import (
    Branch,
    ParameterDomainError,
    SystemParams,
    UnsupportedRegimeError,
    WernerSpec,
    check_density_entries,
)
from .evolution import ClosedEnv
from .spinbath import SpinBathSpec, p_factor, q_factor

_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))
# eigenvalues of rho below this are roundoff; sqrt would amplify them to ~1e-8
_EIG_CLAMP = 1e-14


def _stack(rho) -> tuple[np.ndarray, bool]:
    arr = np.asarray(rho, dtype=complex)
    single = arr.ndim == 2
    arr = arr[None] if single else arr
    check_density_entries(arr)
    return arr, single


def concurrence_wootters(rho):
    """Wootters concurrence of one state or a (T, 4, 4) stack.

    Computed as the singular values of ``W^T (sy x sy) W`` with
    ``W = V sqrt(eps)``, which are the square roots of the eigenvalues of
    ``rho rho~`` without forming the non-Hermitian product.
    """
    arr, single = _stack(rho)
    evals, evecs = np.linalg.eigh(arr)
    evals = np.where(evals < _EIG_CLAMP, 0.0, evals)
    w = evecs * np.sqrt(evals)[..., None, :]
    tau = np.swapaxes(w, -1, -2) @ _SIGMA_YY @ w
    sv = np.linalg.svd(tau, compute_uv=False)  # descending
    c = np.maximum(0.0, sv[..., 0] - sv[..., 1] - sv[..., 2] - sv[..., 3])
    return float(c[0]) if single else c


def concurrence_pure_dephased(p: float, damping):
    """``2 |D| sqrt(p(1-p))`` for an r = 1 Werner-type state with coherence damping D."""
    if not 0 <= p <= 1:
        raise ParameterDomainError(f"p must lie in [0, 1], got {p}")
    out = 2 * np.abs(np.asarray(damping, dtype=float)) * np.sqrt(p * (1 - p))
    return float(out) if out.ndim == 0 else out


def concurrence_closed(branch, env, spec: WernerSpec, params: SystemParams, t):
    """Closed-form concurrence of an r = 1 Werner-type state.

    Bosonic baths use ``2 D sqrt(p(1-p))`` with D the damping of the
    rotating coherence, which for equal couplings on the MU branch is 1.
    Spin baths use :func:`concurrence_signed` with Q (THETA) or P (MU).
    """
    branch = Branch(branch)
    if spec.r != 1:
        raise UnsupportedRegimeError("closed-form concurrence needs r = 1")
    t = np.asarray(t, dtype=float)
    if isinstance(env, SpinBathSpec):
        factor = q_factor if branch is Branch.THETA else p_factor
        return concurrence_signed(spec.p, factor(env, t))
    if isinstance(env, ClosedEnv):
        return concurrence_pure_dephased(spec.p, np.ones_like(t))
    f = boson_factors(env, t)
    damp = f.theta_damping if branch is Branch.THETA else f.mu_damping
    return concurrence_pure_dephased(spec.p, damp)


def concurrence_signed(p: float, q):
    """``sqrt(p(1-p)) (|Q+1| - |Q-1|)``, which is negative whenever Q < 0.

    Kept as written; for |Q| <= 1 it equals ``2 Q sqrt(p(1-p))``.
    """
    q = np.asarray(q, dtype=float)
    out = np.sqrt(p * (1 - p)) * (np.abs(q + 1) - np.abs(q - 1))
    return float(out) if out.ndim == 0 else out


def concurrence_decoupled_literal(p: float) -> float:
    """``sqrt(1-p + 2 sqrt(p(1-p)^3)) - sqrt(1-p - 2 sqrt(p(1-p)^3))``.

    Agrees with ``2 sqrt(p(1-p))`` only for p <= 1/2; above that it gives
    ``2(1-p)``.
    """
    if not 0 <= p <= 1:
        raise ParameterDomainError(f"p must lie in [0, 1], got {p}")
    k = 2 * np.sqrt(p * (1 - p) ** 3)
    return float(np.sqrt(1 - p + k) - np.sqrt(max(1 - p - k, 0.0)))


def von_neumann_entropy(rho):
    """``-Tr rho log2 rho`` in bits, for one state or a stack."""
    arr, single = _stack(rho)
    evals = np.clip(np.linalg.eigvalsh(arr), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(evals > 0, -evals * np.log2(np.where(evals > 0, evals, 1.0)), 0.0)
    s = np.sum(terms, axis=-1)
    return float(s[0]) if single else s


# older name for the same quantity; this is not 1 - Tr rho^2
linear_entropy = von_neumann_entropy


def phase_concurrence_ratio(p: float) -> float:
    """Unitary phase over initial concurrence, ``pi sqrt((1-p)/p)``."""
    if not 0 < p <= 1:
        raise ParameterDomainError(f"p must lie in (0, 1], got {p}")
    return float(np.pi * np.sqrt((1 - p) / p))


@dataclass(frozen=True)
class EntanglementSample:
    t: float
    concurrence: float
    entropy: float


def entanglement_series(traj) -> list[EntanglementSample]:
    """Concurrence and entropy at every sample of a trajectory."""
    c = concurrence_wootters(traj.states)
    s = von_neumann_entropy(traj.states)
    return [EntanglementSample(float(t), float(ci), float(si)) for t, ci, si in zip(traj.times, c, s)]
