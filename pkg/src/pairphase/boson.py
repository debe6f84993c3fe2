"""Zero-temperature bosonic bath: decoherence factors and bath kernels.

Two routes to the decoherence factors exist:

* closed forms for ohmic (``(1 + L^2 t^2)^(-2 g0)``) and supraohmic
  (``exp(-4 g0 L^4 t^4 / (1 + L^2 t^2)^2)``) baths; these are the default;
* the kernel route J -> nu -> F -> exp(-4 int F), evaluated analytically
  for the spectral density ``J(w) = g0/4 w^n L^(1-n) exp(-w/L)``.

For the ohmic bath the two disagree by a constant factor of 4 in the
exponent.  For the supraohmic bath the long-time plateaus differ by the
same factor and the early-time shapes differ too.  The kernel route is
exposed through ``PrefactorConvention.APPENDIX``.  The dissipation phase only has a kernel
form and is evaluated that way under both conventions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import ParameterDomainError


class Spectral(enum.Enum):
    OHMIC = "ohmic"
    SUPRAOHMIC = "supraohmic"

    @property
    def exponent(self) -> int:
        return 1 if self is Spectral.OHMIC else 3


class PrefactorConvention(enum.Enum):
    MAIN_TEXT = "main_text"
    APPENDIX = "appendix"


@dataclass(frozen=True)
class BosonBathSpec:
    """Couplings of qubit 1, qubit 2 and their cross term to a common bath."""

    spectral: Spectral
    gamma01: float
    gamma02: float
    gamma012: float
    cutoff: float
    convention: PrefactorConvention = PrefactorConvention.MAIN_TEXT

    def __post_init__(self):
        if isinstance(self.spectral, str):
            object.__setattr__(self, "spectral", Spectral(self.spectral))
        if isinstance(self.convention, str):
            object.__setattr__(self, "convention", PrefactorConvention(self.convention))
        for name in ("gamma01", "gamma02", "gamma012"):
            if not getattr(self, name) >= 0:
                raise ParameterDomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.cutoff > 0:
            raise ParameterDomainError(f"cutoff must be > 0, got {self.cutoff}")

    @classmethod
    def equal(cls, spectral, gamma0: float, cutoff: float, **kw) -> "BosonBathSpec":
        return cls(spectral, gamma0, gamma0, gamma0, cutoff, **kw)

    def coupling(self, which) -> float:
        key = str(which)
        if key == "1":
            return self.gamma01
        if key == "2":
            return self.gamma02
        if key == "12":
            return self.gamma012
        raise ParameterDomainError(f"which must be one of 1, 2, 12; got {which!r}")

    @property
    def is_physical(self) -> bool:
        """Cross coupling bounded by the direct ones (Cauchy-Schwarz)."""
        return self.gamma012**2 <= self.gamma01 * self.gamma02 * (1 + 1e-12)

    @property
    def is_decoupled(self) -> bool:
        return self.gamma01 == self.gamma02 == self.gamma012 == 0


@dataclass(frozen=True)
class BosonFactors:
    """All bath-induced factors at one time (or a time grid, as arrays).

    ``gamma12_tilde_sq`` multiplies the |01><10| coherence and may exceed 1
    on its own.
    """

    gamma1: np.ndarray | float
    gamma2: np.ndarray | float
    gamma12: np.ndarray | float
    gamma12_tilde_sq: np.ndarray | float
    lambda12_phase: np.ndarray | float

    @property
    def theta_damping(self):
        """Damping of the |00><11| coherence."""
        return self.gamma1 * self.gamma2 * self.gamma12**2

    @property
    def mu_damping(self):
        """Damping of the |01><10| coherence."""
        return self.gamma1 * self.gamma2 * self.gamma12_tilde_sq


def _times(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ParameterDomainError("time must be >= 0")
    return arr


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def gamma_ohmic(gamma0: float, cutoff: float, t):
    """Ohmic decoherence factor ``(1 + L^2 t^2)^(-2 g0)``."""
    t = _times(t)
    return _out(np.exp(-2 * gamma0 * np.log1p((cutoff * t) ** 2)))


def gamma_supraohmic(gamma0: float, cutoff: float, t):
    """Supraohmic decoherence factor; tends to ``exp(-4 g0)`` once ``L t >> 1``."""
    t = _times(t)
    x2 = (cutoff * t) ** 2
    return _out(np.exp(-4 * gamma0 * x2 * x2 / (1 + x2) ** 2))


def spectral_density(spec: BosonBathSpec, which, omega):
    """``J(w) = g0/4 w^n L^(1-n) exp(-w/L)``.

    The cutoff power is chosen so the double time integral of the noise
    kernel is dimensionless for every n.
    """
    n = spec.spectral.exponent
    w = np.asarray(omega, dtype=float)
    lam = spec.cutoff
    return _out(spec.coupling(which) / 4 * w**n * lam ** (1 - n) * np.exp(-w / lam))


def noise_kernel(spec: BosonBathSpec, which, t):
    """``nu(t) = int_0^inf J(w) cos(w t) dw`` at zero temperature."""
    x = spec.cutoff * _times(t)
    g, lam2 = spec.coupling(which), spec.cutoff**2
    d = 1 + x * x
    if spec.spectral is Spectral.OHMIC:
        val = g / 4 * lam2 * (1 - x * x) / d**2
    else:
        val = 1.5 * g * lam2 * (1 - 6 * x**2 + x**4) / d**4
    return _out(val)


def dissipation_kernel(spec: BosonBathSpec, which, t):
    """``eta(t) = int_0^inf J(w) sin(w t) dw``."""
    x = spec.cutoff * _times(t)
    g, lam2 = spec.coupling(which), spec.cutoff**2
    d = 1 + x * x
    if spec.spectral is Spectral.OHMIC:
        val = g / 2 * lam2 * x / d**2
    else:
        val = 6 * g * lam2 * (x - x**3) / d**4
    return _out(val)


def noise_integral(spec: BosonBathSpec, which, t):
    """``F(t) = int_0^t nu``."""
    x = spec.cutoff * _times(t)
    g, lam = spec.coupling(which), spec.cutoff
    d = 1 + x * x
    if spec.spectral is Spectral.OHMIC:
        val = g / 4 * lam * x / d
    else:
        val = g / 2 * lam * (3 * x - x**3) / d**3
    return _out(val)


def noise_double_integral(spec: BosonBathSpec, which, t):
    """``int_0^t F``, the decoherence exponent divided by 4 on the kernel route."""
    x = spec.cutoff * _times(t)
    g = spec.coupling(which)
    if spec.spectral is Spectral.OHMIC:
        val = g / 8 * np.log1p(x * x)
    else:
        x2 = x * x
        val = g / 4 * (3 * x2 + x2 * x2) / (1 + x2) ** 2
    return _out(val)


def dissipation_integral(spec: BosonBathSpec, which, t):
    """``G(t) = int_0^t eta``."""
    x = spec.cutoff * _times(t)
    g, lam = spec.coupling(which), spec.cutoff
    d = 1 + x * x
    if spec.spectral is Spectral.OHMIC:
        val = g / 4 * lam * x * x / d
    else:
        val = g / 2 * lam * (1 - (1 - 3 * x * x) / d**3)
    return _out(val)


def dissipation_double_integral(spec: BosonBathSpec, which, t):
    """``int_0^t G``."""
    x = spec.cutoff * _times(t)
    g = spec.coupling(which)
    if spec.spectral is Spectral.OHMIC:
        val = g / 4 * (x - np.arctan(x))
    else:
        val = g / 2 * (x - x / (1 + x * x) ** 2)
    return _out(val)


def decoherence_exponent(spec: BosonBathSpec, which, t):
    """``E`` such that the factor for coupling ``which`` is ``exp(-E)``."""
    t = _times(t)
    if spec.convention is PrefactorConvention.APPENDIX:
        return _out(4 * np.asarray(noise_double_integral(spec, which, t)))
    g, x2 = spec.coupling(which), (spec.cutoff * t) ** 2
    if spec.spectral is Spectral.OHMIC:
        val = 2 * g * np.log1p(x2)
    else:
        val = 4 * g * x2 * x2 / (1 + x2) ** 2
    return _out(val)


def dissipation_phase(spec: BosonBathSpec, t):
    """Phase ``4 int_0^t G_12`` carried by the single-flip coherences."""
    return _out(4 * np.asarray(dissipation_double_integral(spec, "12", t)))


def boson_factors(spec: BosonBathSpec, t) -> BosonFactors:
    """Assemble the five bath factors at ``t`` (scalar or array)."""
    e1 = np.asarray(decoherence_exponent(spec, "1", t))
    e2 = np.asarray(decoherence_exponent(spec, "2", t))
    e12 = np.asarray(decoherence_exponent(spec, "12", t))
    # tilde factor is exp(+8 int F_12), the exact inverse of gamma12^2
    return BosonFactors(
        gamma1=_out(np.exp(-e1)),
        gamma2=_out(np.exp(-e2)),
        gamma12=_out(np.exp(-e12)),
        gamma12_tilde_sq=_out(np.exp(2 * e12)),
        lambda12_phase=dissipation_phase(spec, t),
    )
