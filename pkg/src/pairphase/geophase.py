"""Mixed-state kinematic geometric phase and its environmental correction.

Three routes are provided:

* :func:`kinematic_phase` works on any sampled trajectory. It tracks the
  eigenbranches of rho(t) by eigenvector continuity and parallel transports
  them with a discrete Pancharatnam chain.
* ``reduced_phase_*`` integrate the scalar integrand that remains for r = 1
  Werner-type states, where only one eigenbranch carries weight.
* :func:`perturbative_phase` evaluates the leading-order series in the
  bath coupling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .boson import BosonBathSpec, Spectral, boson_factors
from .core import (
    Branch,
    DegeneracyError,
    GeneralInitialState,
    ParameterDomainError,
    PreconditionError,
    SystemParams,
    WernerSpec,
    eigh_descending,
)
from .evolution import CLOSED, ClosedEnv, Trajectory, density_stack
from .spinbath import SpinBathSpec, p_factor, q_factor

EPS_FLOOR = 1e-12
MIN_POINTS_PER_CYCLE = 500
# relative eigenvalue gap below which two branches count as degenerate
DEGENERACY_GAP = 1e-8
QUAD_EPSABS = 1e-10
_WINDING_TOL = 1e-9
_MAX_SHIFTS = 6


class Method(enum.Enum):
    GENERAL_KINEMATIC = "GeneralKinematic"
    REDUCED_INTEGRAND = "ReducedIntegrand"
    PERTURBATIVE = "Perturbative"


def wrap_phase(x):
    """Map angles to (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    y = np.where(y == -np.pi, np.pi, y)
    return float(y) if np.ndim(y) == 0 else y


def lift_to(angle: float, reference: float) -> float:
    """The representative of ``angle`` mod 2 pi closest to ``reference``."""
    return reference + wrap_phase(angle - reference)


@dataclass(frozen=True)
class GeoPhaseResult:
    """Total phase, its unitary counterpart and the correction between them.

    ``delta_phi`` is ``phi_total - phi_unitary`` reduced to (-pi, pi].
    """

    phi_total: float
    phi_unitary: float
    delta_phi: float
    winding: int
    method: Method

    @classmethod
    def build(cls, phi_total, phi_unitary, winding, method) -> "GeoPhaseResult":
        return cls(
            float(phi_total),
            float(phi_unitary),
            wrap_phase(phi_total - phi_unitary),
            int(winding),
            method,
        )


def _check_winding(n) -> int:
    if int(n) != n or n < 1:
        raise PreconditionError(f"winding must be a positive integer, got {n!r}")
    return int(n)


def _default_omega(initial, params: SystemParams) -> float:
    if isinstance(initial, WernerSpec):
        return params.cycle_frequency(initial.branch)
    raise PreconditionError("general initial states need an explicit cycle frequency omega")


def cycle_count(t_end: float, omega: float) -> int:
    """Number of full cycles in ``t_end``; raises unless it is a whole number."""
    cycles = t_end * abs(omega) / (2 * np.pi)
    n = round(cycles)
    if n < 1 or abs(cycles - n) > _WINDING_TOL * max(1, n):
        raise PreconditionError(
            f"trajectory covers {cycles:.12g} cycles; t_end must be n * 2 pi / |omega|"
        )
    return n


# ---------------------------------------------------------------- unitary phase


def unitary_phase(initial, params: SystemParams, winding: int = 1, omega=None, steps_per_cycle=2001):
    """Phase accumulated over ``winding`` cycles without an environment.

    Werner-type states have a closed form. A general pure state is handled by
    running the kinematic routine on its closed-system trajectory.
    """
    n = _check_winding(winding)
    if isinstance(initial, WernerSpec):
        w = params.cycle_frequency(initial.branch) if omega is None else omega
        s = math.copysign(1.0, w)
        base = s * 2 * np.pi * n * (1 - initial.p)
        if initial.r == 1:
            return base
        r, p = initial.r, initial.p
        total = (
            (1 + 3 * r) / 4 * np.exp(1j * base)
            + (1 - r) / 4 * np.exp(1j * s * 2 * np.pi * n * p)
            + (1 - r) / 2
        )
        return lift_to(float(np.angle(total)), base)
    if omega is None:
        raise PreconditionError("general initial states need an explicit cycle frequency omega")
    t_end = n * 2 * np.pi / abs(omega)
    times = np.linspace(0.0, t_end, n * (steps_per_cycle - 1) + 1)
    twin = Trajectory(times, density_stack(initial, params, CLOSED, times), params, CLOSED, initial)
    return _kinematic_arg(twin)


# ------------------------------------------------------------- kinematic phase


@dataclass
class _Group:
    """A set of eigenbranches transported together (size > 1 only when degenerate)."""

    basis0: np.ndarray  # (4, k) orthonormal columns at t = 0
    eps0: np.ndarray  # (k,)
    cols: list  # per sample: indices of the eigenvector columns followed


def _gap_ok(evals: np.ndarray, chosen, scale: float) -> bool:
    others = [i for i in range(evals.size) if i not in chosen]
    if not others:
        return True
    d = np.abs(evals[list(chosen)][:, None] - evals[others][None, :])
    return bool(d.min() > DEGENERACY_GAP * scale)


def _clusters(evals: np.ndarray, scale: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, evals.size):
        if abs(evals[i - 1] - evals[i]) <= DEGENERACY_GAP * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _initial_groups(evals, evecs) -> list[_Group]:
    """Split t = 0 clusters using the eigenvectors one step later."""
    scale = max(1.0, float(np.abs(evals[0]).max()))
    groups = []
    for cluster in _clusters(evals[0], scale):
        eps = float(np.mean(evals[0][cluster]))
        if eps < EPS_FLOOR:
            continue
        sub0 = evecs[0][:, cluster]
        if len(cluster) == 1:
            groups.append(_Group(sub0, np.array([evals[0][cluster[0]]]), [cluster]))
            continue
        # pick the sample-1 columns spanning this subspace and split them by eigenvalue
        weight = np.sum(np.abs(sub0.conj().T @ evecs[1]) ** 2, axis=0)
        picked = sorted(np.argsort(weight)[::-1][: len(cluster)])
        for part in _clusters(evals[1][picked], scale):
            cols1 = [picked[i] for i in part]
            proj = sub0 @ (sub0.conj().T @ evecs[1][:, cols1])
            q, _ = np.linalg.qr(proj)
            groups.append(_Group(q, np.full(len(cols1), eps), [cluster]))
    if not groups:
        raise PreconditionError("no eigenbranch carries weight at t = 0")
    return groups


def _polar_unitary(o: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition, batched over leading axes."""
    u, _, vh = np.linalg.svd(o)
    return u @ vh


def _resample(traj: Trajectory, j: int, attempt: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigensystem at a time nudged away from sample ``j`` towards its neighbours."""
    t = traj.times
    h = (t[min(j + 1, t.size - 1)] - t[max(j - 1, 0)]) / 2
    frac = 0.25 / 2**attempt
    sign = -1 if attempt % 2 else 1
    tj = min(max(t[j] + sign * frac * h, 0.0), t[-1])
    ev, vv = eigh_descending(traj.sample([tj]))
    return ev[0], vv[0]


def _fast_track(groups, evals, evecs) -> bool:
    """Common case: every weighted branch keeps its column index along the grid."""
    if any(g.basis0.shape[1] != 1 for g in groups):
        return False
    scale = max(1.0, float(np.abs(evals).max()))
    overlap = np.abs(np.einsum("tij,tik->tjk", evecs[:-1].conj(), evecs[1:])) ** 2
    best = np.argmax(overlap, axis=2)
    cols = []
    for g in groups:
        c = int(np.argmax(np.abs(g.basis0[:, 0].conj() @ evecs[1]) ** 2))
        if np.any(best[1:, c] != c):
            return False
        others = [i for i in range(4) if i != c]
        gap = np.abs(evals[1:-1, c][:, None] - evals[1:-1, others]).min(initial=np.inf)
        if gap <= DEGENERACY_GAP * scale:
            return False
        cols.append(c)
    for g, c in zip(groups, cols):
        g.cols = g.cols + [[c]] * (evals.shape[0] - 1)
    return True


def _track(traj: Trajectory, evals, evecs):
    """Follow each weighted group through the grid by subspace overlap."""
    groups = _initial_groups(evals, evecs)
    if _fast_track(groups, evals, evecs):
        return groups, evals, evecs
    scale = max(1.0, float(np.abs(evals).max()))
    evecs = evecs.copy()
    current = [g.basis0 for g in groups]
    for j in range(1, evals.shape[0]):
        chosen_all = []
        for w in current:
            weight = np.sum(np.abs(w.conj().T @ evecs[j]) ** 2, axis=0)
            chosen_all.append(sorted(np.argsort(weight)[::-1][: w.shape[1]]))
        ok = all(_gap_ok(evals[j], c, scale) for c in chosen_all)
        attempt = 0
        while not ok and j < evals.shape[0] - 1 and attempt < _MAX_SHIFTS:
            # a branch crossing sits on this sample; swap in a nearby time
            ev, vv = _resample(traj, j, attempt)
            evals[j], evecs[j] = ev, vv
            chosen_all = []
            for w in current:
                weight = np.sum(np.abs(w.conj().T @ vv) ** 2, axis=0)
                chosen_all.append(sorted(np.argsort(weight)[::-1][: w.shape[1]]))
            ok = all(_gap_ok(ev, c, scale) for c in chosen_all)
            attempt += 1
        if not ok and j < evals.shape[0] - 1:
            raise DegeneracyError(f"tracked eigenvalues stay degenerate near t = {traj.times[j]:.6g}")
        for idx, (g, c) in enumerate(zip(groups, chosen_all)):
            g.cols.append(c)
            current[idx] = evecs[j][:, c]
    return groups, evals, evecs


def _chain_sum(groups, evals, evecs, stride: int) -> complex:
    """Weighted sum of <Psi_k(0)|Psi_k(tau)> with parallel-transport phases removed."""
    last = evals.shape[0] - 1
    idx = np.arange(0, last + 1, stride)
    total = 0j
    for g in groups:
        # basis along the coarse grid; the first entry is the resolved t = 0 basis
        frames = [g.basis0] + [evecs[j][:, g.cols[j]] for j in idx[1:]]
        v = np.stack(frames)
        o = np.swapaxes(v[:-1].conj(), -1, -2) @ v[1:]
        if o.shape[-1] == 1:
            shift = np.exp(-1j * np.sum(np.angle(o[:, 0, 0])))
            end_frame = v[-1] * shift
        else:
            # W_N = V_N U_{N-1}^+ ... U_0^+ with U_j the polar factor of V_j^+ V_{j+1}
            x = np.eye(o.shape[-1], dtype=complex)
            for u in _polar_unitary(o):
                x = u.conj().T @ x
            end_frame = v[-1] @ x
        weights = np.sqrt(np.clip(g.eps0 * evals[last][g.cols[last]], 0.0, None))
        overlap = np.diagonal(g.basis0.conj().T @ end_frame)
        total += complex(np.sum(weights * overlap))
    return total


def _kinematic_arg(traj: Trajectory) -> float:
    evals, evecs = eigh_descending(np.array(traj.states))
    groups, evals, evecs = _track(traj, evals.copy(), evecs)
    fine = np.angle(_chain_sum(groups, evals, evecs, 1))
    if (evals.shape[0] - 1) % 2:
        return float(fine)
    # the chain error is O(h^2); one Richardson step removes the leading term
    coarse = np.angle(_chain_sum(groups, evals, evecs, 2))
    return float(fine + wrap_phase(fine - coarse) / 3)


def kinematic_phase(traj: Trajectory, omega=None, reference=None) -> GeoPhaseResult:
    """Geometric phase of a sampled trajectory from the mixed-state kinematic formula.

    Parameters
    ----------
    traj
        Uniform or non-uniform samples covering a whole number of cycles.
    omega
        Cycle frequency. Defaults to the branch frequency for Werner-type
        states; required for general initial states.
    reference
        Value to lift the result towards, e.g. a reduced-integrand phase.
        Defaults to the unitary phase.

    Raises
    ------
    PreconditionError
        If the trajectory is not cyclic or has fewer than 500 samples per cycle.
    DegeneracyError
        If a weighted branch cannot be separated from another one.
    """
    w = _default_omega(traj.initial, traj.params) if omega is None else float(omega)
    n = cycle_count(traj.t_end, w)
    if (len(traj) - 1) / n < MIN_POINTS_PER_CYCLE:
        raise PreconditionError(
            f"{(len(traj) - 1) / n:.0f} samples per cycle; at least {MIN_POINTS_PER_CYCLE} needed"
        )
    phi_u = unitary_phase(traj.initial, traj.params, n, omega=w)
    raw = _kinematic_arg(traj)
    total = lift_to(raw, phi_u if reference is None else reference)
    return GeoPhaseResult.build(total, phi_u, n, Method.GENERAL_KINEMATIC)


# ------------------------------------------------------------- reduced integrand


def _occupation(p: float, d2):
    """|<top|Psi_+>|^2 for the 2x2 block [[1-p, c], [c*, p]] with |c|^2 = p(1-p) d2."""
    d2 = np.asarray(d2, dtype=float)
    if p == 0.5:
        return np.full_like(d2, 0.5)
    q = p * (1 - p)
    root = np.sqrt(1 + 4 * q * (d2 - 1))
    if p < 0.5:
        # rationalised so the d2 -> 0 limit stays finite
        return 1 / (1 + 4 * q * d2 / (root - (2 * p - 1)) ** 2)
    return q * d2 / (q * d2 + 0.25 * (root + 2 * p - 1) ** 2)


def _integrate(func, t_end: float, breaks) -> float:
    edges = np.unique(np.concatenate([[0.0, t_end], [b for b in breaks if 0 < b < t_end]]))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = quad(func, a, b, epsabs=QUAD_EPSABS / len(edges), epsrel=1e-12, limit=400)
        total += val
    return total


def _reduced(spec: WernerSpec, omega: float, n: int, damping, breaks) -> GeoPhaseResult:
    if spec.r != 1:
        raise PreconditionError("the reduced integrand needs r = 1")
    n = _check_winding(n)
    base = math.copysign(2 * np.pi * n * (1 - spec.p), omega)
    if spec.p in (0.0, 1.0):
        return GeoPhaseResult.build(base, base, n, Method.REDUCED_INTEGRAND)
    t_end = n * 2 * np.pi / abs(omega)
    f = lambda t: float(_occupation(spec.p, damping(t) ** 2))
    phi = omega * _integrate(f, t_end, breaks(t_end))
    return GeoPhaseResult.build(phi, base, n, Method.REDUCED_INTEGRAND)


def _cycle_breaks(omega, n, per_cycle=4):
    return lambda t_end: np.linspace(0, t_end, n * per_cycle + 1)[1:-1]


def _boson_breaks(bath: BosonBathSpec, omega, n):
    def breaks(t_end):
        early = [10.0**k / bath.cutoff for k in range(-1, 4)]
        return np.concatenate([early, _cycle_breaks(omega, n)(t_end)])

    return breaks


def reduced_phase_boson_theta(spec: WernerSpec, params: SystemParams, bath, n: int = 1) -> GeoPhaseResult:
    """Phase of the |00>,|11> Werner branch (r = 1) in a bosonic bath, or closed."""
    omega = params.cycle_frequency(Branch.THETA)
    if isinstance(bath, ClosedEnv):
        return _reduced(spec, omega, n, lambda t: 1.0, _cycle_breaks(omega, n))
    damping = lambda t: boson_factors(bath, t).theta_damping
    return _reduced(spec, omega, n, damping, _boson_breaks(bath, omega, n))


def reduced_phase_boson_mu(spec: WernerSpec, params: SystemParams, bath, n: int = 1) -> GeoPhaseResult:
    """Phase of the |01>,|10> Werner branch (r = 1); needs omega1 != omega2."""
    omega = params.cycle_frequency(Branch.MU)
    if isinstance(bath, ClosedEnv):
        return _reduced(spec, omega, n, lambda t: 1.0, _cycle_breaks(omega, n))
    damping = lambda t: boson_factors(bath, t).mu_damping
    return _reduced(spec, omega, n, damping, _boson_breaks(bath, omega, n))


def reduced_phase_spin(
    spec: WernerSpec, params: SystemParams, bath: SpinBathSpec, branch=None, n: int = 1
) -> GeoPhaseResult:
    """Phase of a Werner branch (r = 1) in a spin bath; Q drives THETA, P drives MU."""
    branch = spec.branch if branch is None else Branch(branch)
    omega = params.cycle_frequency(branch)
    factor = q_factor if branch is Branch.THETA else p_factor
    # split finely enough that quad sees a few bath oscillations per piece
    fastest = float(np.sqrt(np.max(bath.h**2 + (np.abs(bath.eps) + np.abs(bath.lam)) ** 2)))

    def breaks(t_end):
        pieces = max(4 * n, int(np.ceil(t_end * fastest / np.pi)))
        return np.linspace(0, t_end, min(pieces, 4000) + 1)[1:-1]

    return _reduced(spec, omega, n, lambda t: factor(bath, t), breaks)


def reduced_phase(spec: WernerSpec, params: SystemParams, env, n: int = 1) -> GeoPhaseResult:
    """Dispatch to the reduced integrand matching ``env`` and the state's branch."""
    if isinstance(env, SpinBathSpec):
        return reduced_phase_spin(spec, params, env, spec.branch, n)
    if spec.branch is Branch.THETA:
        return reduced_phase_boson_theta(spec, params, env, n)
    return reduced_phase_boson_mu(spec, params, env, n)


# ------------------------------------------------------------- perturbative series


class PerturbativeKind(enum.Enum):
    OHMIC_FULL = "OhmicFull"
    OHMIC_APPROX = "OhmicApprox"
    SUPRAOHMIC_FULL = "SupraohmicFull"
    SUPRAOHMIC_APPROX = "SupraohmicApprox"
    SPIN_BATH = "SpinBath"


def perturbative_phase(
    kind,
    *,
    p: float,
    gamma0: float = 0.0,
    cutoff_ratio: float = 100.0,
    lambda_over_h: float = 0.0,
    n_spins: int = 1,
    h_over_omega: float = 1.0,
    winding: int = 1,
) -> float:
    """Leading-order correction to the unitary phase, in radians.

    ``cutoff_ratio`` is Lambda/Omega and ``h_over_omega`` is h/Omega. The
    ``*_APPROX`` kinds are the large-cutoff limits and scale exactly with
    the winding number. Nothing checks that the parameters are small.
    """
    kind = PerturbativeKind(kind)
    n = _check_winding(winding)
    if not 0 <= p <= 1:
        raise ParameterDomainError(f"p must lie in [0, 1], got {p}")
    shape = p * (1 - 3 * p + 2 * p * p)
    x = 2 * np.pi * n * cutoff_ratio
    if kind is PerturbativeKind.OHMIC_FULL:
        return float(
            32 * gamma0 * shape * (np.arctan(x) / cutoff_ratio + np.pi * n * (np.log1p(x * x) - 2))
        )
    if kind is PerturbativeKind.OHMIC_APPROX:
        single = 64 * np.pi * gamma0 * shape * (np.log(2 * np.pi * cutoff_ratio) - 1)
        return float(n * single)
    if kind is PerturbativeKind.SUPRAOHMIC_FULL:
        return float(8 * gamma0 * shape / cutoff_ratio * (2 * x + x / (1 + x * x) - 3 * np.arctan(x)))
    if kind is PerturbativeKind.SUPRAOHMIC_APPROX:
        single = 32 * np.pi * gamma0 * shape
        return float(n * single)
    if h_over_omega <= 0:
        raise ParameterDomainError("h_over_omega must be > 0")
    return float(
        lambda_over_h**2
        * 16
        * n_spins
        * shape
        * (4 * np.pi * n - np.sin(4 * np.pi * n * h_over_omega) / h_over_omega)
    )


def spectral_of(kind) -> Spectral:
    kind = PerturbativeKind(kind)
    if kind in (PerturbativeKind.OHMIC_FULL, PerturbativeKind.OHMIC_APPROX):
        return Spectral.OHMIC
    if kind in (PerturbativeKind.SUPRAOHMIC_FULL, PerturbativeKind.SUPRAOHMIC_APPROX):
        return Spectral.SUPRAOHMIC
    raise ParameterDomainError(f"{kind.value} is not a bosonic series")
