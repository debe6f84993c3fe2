"""Finite bath of tunnelling spins coupled to both qubits through sigma_z.

Each bath spin i has tunnelling element h_i and couplings eps_i (qubit 1)
and lam_i (qubit 2). The bath starts in a product state with equal weights
on |0> and |1> for every spin, which is what makes the closed forms below
valid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .core import ParameterDomainError

# time samples per chunk when evaluating long grids against large baths
_CHUNK = 4096


@dataclass(frozen=True)
class BathSpin:
    h: float
    eps: float
    lam: float


@dataclass(frozen=True, eq=False)
class SpinBathSpec:
    """Immutable collection of bath spins, stored column-wise."""

    h: np.ndarray
    eps: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        h = np.array(self.h, dtype=float, ndmin=1)
        eps = np.array(self.eps, dtype=float, ndmin=1)
        lam = np.array(self.lam, dtype=float, ndmin=1)
        if not (h.shape == eps.shape == lam.shape) or h.ndim != 1:
            raise ParameterDomainError("h, eps and lam must be 1-d arrays of equal length")
        if h.size < 1:
            raise ParameterDomainError("a spin bath needs at least one spin")
        if np.any(h < 0):
            raise ParameterDomainError("tunnelling elements h_i must be >= 0")
        bad = (h == 0) & ((eps + lam == 0) | (eps - lam == 0))
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise ParameterDomainError(
                f"spin {i}: h = 0 together with eps +/- lam = 0 leaves a 0/0 factor"
            )
        for a in (h, eps, lam):
            a.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "lam", lam)

    def __len__(self):
        return self.h.size

    @property
    def spins(self) -> list[BathSpin]:
        return [BathSpin(*map(float, row)) for row in zip(self.h, self.eps, self.lam)]

    @classmethod
    def from_spins(cls, spins) -> "SpinBathSpec":
        spins = list(spins)
        return cls([s.h for s in spins], [s.eps for s in spins], [s.lam for s in spins])

    @classmethod
    def homogeneous(cls, n: int, h: float, eps: float, lam: float) -> "SpinBathSpec":
        if n < 1:
            raise ParameterDomainError("a spin bath needs at least one spin")
        return cls(np.full(n, h), np.full(n, eps), np.full(n, lam))

    @classmethod
    def random(
        cls,
        n: int,
        seed,
        h_range=(0.5, 1.5),
        eps_range=(0.25, 0.75),
        lam_range=(0.25, 0.75),
    ) -> "SpinBathSpec":
        """Draw every h_i, eps_i, lam_i uniformly from its range with a seeded generator."""
        if n < 1:
            raise ParameterDomainError("a spin bath needs at least one spin")
        rng = np.random.default_rng(seed)
        h = rng.uniform(*h_range, size=n)
        eps = rng.uniform(*eps_range, size=n)
        lam = rng.uniform(*lam_range, size=n)
        return cls(h, eps, lam)

    @property
    def is_decoupled(self) -> bool:
        return bool(np.all(self.eps == 0) and np.all(self.lam == 0))


def _times(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ParameterDomainError("time must be >= 0")
    return arr


def _product_factor(h: np.ndarray, s: np.ndarray, t):
    """prod_i [1 - 2 s_i^2/(h_i^2 + s_i^2) sin^2(t sqrt(h_i^2 + s_i^2))]."""
    t = _times(t)
    scalar = t.ndim == 0
    flat = t.reshape(-1)
    s2 = s * s
    w2 = h * h + s2
    active = s2 > 0
    amp = 2 * s2[active] / w2[active]
    freq = np.sqrt(w2[active])
    out = np.ones(flat.shape)
    if amp.size:
        for lo in range(0, flat.size, _CHUNK):
            tc = flat[lo : lo + _CHUNK, None]
            # factors can be negative, so multiply directly instead of summing logs
            out[lo : lo + _CHUNK] = np.prod(1 - amp * np.sin(tc * freq) ** 2, axis=1)
    return float(out[0]) if scalar else out.reshape(t.shape)


def q_factor(bath: SpinBathSpec, t):
    """Decoherence factor of the |00><11| coherence (depends on eps + lam)."""
    return _product_factor(bath.h, bath.eps + bath.lam, t)


def p_factor(bath: SpinBathSpec, t):
    """Decoherence factor of the |01><10| coherence (depends on eps - lam)."""
    return _product_factor(bath.h, bath.eps - bath.lam, t)


def _weights(bath: SpinBathSpec) -> np.ndarray:
    s2 = (bath.eps + bath.lam) ** 2
    return 1 - s2 / (4 * (bath.h**2 + s2))


def dispersion_estimate_raw(bath: SpinBathSpec) -> float:
    """``sqrt(sum_i p_i)`` with ``p_i = 1 - (eps+lam)^2 / (4 (h^2 + (eps+lam)^2))``.

    This grows like sqrt(N); see :func:`dispersion_estimate` for the
    per-spin normalised value.
    """
    return float(np.sqrt(np.sum(_weights(bath))))


def dispersion_estimate(bath: SpinBathSpec) -> float:
    """Raw dispersion divided by N, which falls off like 1/sqrt(N)."""
    return dispersion_estimate_raw(bath) / len(bath)


def time_averaged_abs_q(bath: SpinBathSpec, t_max: float, samples: int = 50_001) -> float:
    """Mean of |Q(t)| over [0, t_max] by the composite trapezoid rule on a uniform grid."""
    if t_max <= 0:
        raise ParameterDomainError("t_max must be > 0")
    t = np.linspace(0.0, t_max, samples)
    q = np.abs(q_factor(bath, t))
    return float(trapezoid(q, t) / t_max)


def size_scaling_exponent(
    sizes,
    seed: int = 0,
    window: float = 100.0,
    samples: int = 50_001,
    **ranges,
) -> tuple[float, list[float]]:
    """Fit log <|Q|> against log N for seeded random baths.

    ``window`` is measured in units of 1/h_ref with h_ref = 1, matching the
    default ``h_range`` centred on 1.
    """
    sizes = [int(n) for n in sizes]
    means = []
    for n in sizes:
        bath = SpinBathSpec.random(n, seed=[seed, n], **ranges)
        means.append(time_averaged_abs_q(bath, window, samples))
    slope = np.polyfit(np.log(sizes), np.log(means), 1)[0]
    return float(slope), means
