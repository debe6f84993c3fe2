"""Experiment configuration files (YAML) and their validation.

Frequencies are in units of the branch cycle frequency Omega and times in
units of 1/Omega. The boson cutoff is given as ``lambda_over_omega`` and the
spin couplings as ``lambda_over_h``. Unknown keys are errors.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .boson import BosonBathSpec, PrefactorConvention, Spectral
from .core import Branch, GeneralInitialState, PairPhaseError, SystemParams, WernerSpec
from .evolution import CLOSED
from .spinbath import SpinBathSpec

SWEEP_AXES = ("p", "gamma0", "lambda_over_h", "n_spins", "r", "t")
OUTPUTS = ("geophase", "delta_phi", "concurrence", "entropy", "factors")
METHODS = ("reduced", "kinematic", "perturbative")


class ConfigError(PairPhaseError):
    """A config file could not be read or does not match the schema."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SystemSection(_Strict):
    omega1: float = 1.0
    omega2: float = 0.0
    gamma_qq: float = 0.0

    def build(self) -> SystemParams:
        return SystemParams(self.omega1, self.omega2, self.gamma_qq)


class BosonEnv(_Strict):
    kind: Literal["boson"]
    spectral: Spectral = Spectral.OHMIC
    gamma0: Optional[float] = Field(default=None, ge=0)
    gamma01: Optional[float] = Field(default=None, ge=0)
    gamma02: Optional[float] = Field(default=None, ge=0)
    gamma012: Optional[float] = Field(default=None, ge=0)
    lambda_over_omega: float = Field(default=100.0, gt=0)
    convention: PrefactorConvention = PrefactorConvention.MAIN_TEXT

    @model_validator(mode="after")
    def _couplings(self):
        split = (self.gamma01, self.gamma02, self.gamma012)
        if self.gamma0 is None and any(g is None for g in split):
            raise ValueError("give gamma0, or all of gamma01, gamma02 and gamma012")
        if self.gamma0 is not None and any(g is not None for g in split):
            raise ValueError("gamma0 and gamma01/gamma02/gamma012 are mutually exclusive")
        return self

    def build(self, omega: float, gamma0=None) -> BosonBathSpec:
        g = self.gamma0 if gamma0 is None else gamma0
        if g is not None:
            g1 = g2 = g12 = g
        else:
            g1, g2, g12 = self.gamma01, self.gamma02, self.gamma012
        return BosonBathSpec(
            self.spectral, g1, g2, g12, self.lambda_over_omega * abs(omega), self.convention
        )


class Range(_Strict):
    start: float
    stop: float
    steps: int = Field(ge=1)

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]


class SpinEntry(_Strict):
    h: float
    eps: float
    lam: float


class RandomRanges(_Strict):
    h_range: tuple[float, float] = (0.5, 1.5)
    eps_range: tuple[float, float] = (0.25, 0.75)
    lam_range: tuple[float, float] = (0.25, 0.75)


class SpinEnv(_Strict):
    kind: Literal["spin"]
    n_spins: int = Field(default=100, ge=1)
    h: float = Field(default=1.0, ge=0)
    lambda_over_h: float = 0.0
    eps_to_lambda: float = 1.0
    random: Optional[RandomRanges] = None
    spins: Optional[list[SpinEntry]] = None

    @model_validator(mode="after")
    def _check_bath(self):
        if self.random is not None and self.spins is not None:
            raise ValueError("random and spins are mutually exclusive")
        # build once so degenerate baths are rejected at parse time
        self.build(omega=1.0, seed=0)
        return self

    def build(self, omega: float, seed: int, lambda_over_h=None, n_spins=None) -> SpinBathSpec:
        n = self.n_spins if n_spins is None else int(n_spins)
        scale = abs(omega)
        if self.spins is not None:
            rows = np.array([[e.h, e.eps, e.lam] for e in self.spins]) * scale
            return SpinBathSpec(rows[:, 0], rows[:, 1], rows[:, 2])
        if self.random is not None:
            r = self.random
            return SpinBathSpec.random(
                n,
                seed=[seed, n],
                h_range=tuple(scale * v for v in r.h_range),
                eps_range=tuple(scale * v for v in r.eps_range),
                lam_range=tuple(scale * v for v in r.lam_range),
            )
        h = self.h * scale
        ratio = self.lambda_over_h if lambda_over_h is None else lambda_over_h
        lam = ratio * h
        return SpinBathSpec.homogeneous(n, h, self.eps_to_lambda * lam, lam)


class ClosedSection(_Strict):
    kind: Literal["closed"]

    def build(self, *args, **kwargs):
        return CLOSED


EnvSection = Annotated[Union[BosonEnv, SpinEnv, ClosedSection], Field(discriminator="kind")]


class WernerState(_Strict):
    kind: Literal["werner"]
    r: float = 1.0
    p: float = 0.5
    branch: Branch = Branch.THETA

    def build(self, p=None, r=None) -> WernerSpec:
        return WernerSpec(self.r if r is None else r, self.p if p is None else p, self.branch)


class GeneralState(_Strict):
    """Amplitudes as ``[re, im]`` pairs or plain reals."""

    kind: Literal["general"]
    alpha: Union[float, tuple[float, float]] = 0.0
    beta: Union[float, tuple[float, float]] = 0.0
    zeta: Union[float, tuple[float, float]] = 0.0
    delta: Union[float, tuple[float, float]] = 0.0
    normalize: bool = False

    def build(self, **_) -> GeneralInitialState:
        amps = []
        for v in (self.alpha, self.beta, self.zeta, self.delta):
            amps.append(complex(*v) if isinstance(v, tuple) else complex(v))
        if self.normalize:
            norm = np.sqrt(sum(abs(a) ** 2 for a in amps))
            amps = [a / norm for a in amps]
        return GeneralInitialState(*amps)


StateSection = Annotated[Union[WernerState, GeneralState], Field(discriminator="kind")]

Axis = Union[Range, list[float]]


class ExperimentConfig(_Strict):
    system: SystemSection = SystemSection()
    env: EnvSection
    state: StateSection
    sweep: dict[str, Axis] = Field(default_factory=dict)
    cycles: int = Field(default=1, ge=1)
    outputs: list[str] = Field(default_factory=lambda: ["geophase", "delta_phi"])
    methods: list[str] = Field(default_factory=lambda: ["reduced"])
    steps_per_cycle: int = Field(default=2001, ge=501)
    omega: Optional[float] = None
    seed: int = 0

    @field_validator("sweep")
    @classmethod
    def _axes(cls, sweep):
        for name, axis in sweep.items():
            if name not in SWEEP_AXES:
                raise ValueError(f"unknown sweep axis {name!r}; expected one of {', '.join(SWEEP_AXES)}")
            if isinstance(axis, list) and not axis:
                raise ValueError(f"sweep axis {name!r} is empty")
        return sweep

    @field_validator("outputs")
    @classmethod
    def _outputs(cls, outputs):
        bad = [o for o in outputs if o not in OUTPUTS]
        if bad or not outputs:
            raise ValueError(f"outputs must be a non-empty subset of {', '.join(OUTPUTS)}")
        return outputs

    @field_validator("methods")
    @classmethod
    def _methods(cls, methods):
        bad = [m for m in methods if m not in METHODS]
        if bad or not methods:
            raise ValueError(f"methods must be a non-empty subset of {', '.join(METHODS)}")
        return methods

    @model_validator(mode="after")
    def _axis_fits(self):
        env, state = self.env.kind, self.state.kind
        needs = {"gamma0": env == "boson", "lambda_over_h": env == "spin", "n_spins": env == "spin"}
        needs.update({"p": state == "werner", "r": state == "werner"})
        for name in self.sweep:
            if not needs.get(name, True):
                raise ValueError(f"sweep axis {name!r} does not apply to env {env!r} / state {state!r}")
        if state == "general" and env == "spin":
            raise ValueError("spin baths need a Werner-type state")
        return self

    def axis_values(self) -> dict[str, list[float]]:
        out = {}
        for name, axis in self.sweep.items():
            vals = axis.values() if isinstance(axis, Range) else [float(v) for v in axis]
            out[name] = vals
        return out


def _format_errors(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        path = ".".join(str(x) for x in e["loc"]) or "<root>"
        lines.append(f"{path}: {e['msg']}")
    return "\n".join(lines)


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a config mapping, raising ConfigError with field paths."""
    if not isinstance(data, dict):
        raise ConfigError("<root>: config must be a mapping")
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as err:
        raise ConfigError(_format_errors(err)) from None


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ConfigError(f"{path}: invalid YAML: {err}") from None
    return parse_config(data)
