"""Run a configured parameter sweep and serialise the result table."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .boson import BosonBathSpec, Spectral, boson_factors
from .config import ExperimentConfig, SpinEnv
from .core import Branch, PairPhaseError, WernerSpec
from .entanglement import concurrence_wootters, von_neumann_entropy
from .evolution import density_stack, trajectory
from .geophase import (
    PerturbativeKind,
    kinematic_phase,
    perturbative_phase,
    reduced_phase,
)
from .spinbath import SpinBathSpec, p_factor, q_factor

SCHEMA_VERSION = 1


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[dict]

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]


def sweep_points(cfg: ExperimentConfig) -> list[dict]:
    """Cartesian product of the sweep axes, in the order they are declared."""
    axes = cfg.axis_values()
    names = list(axes)
    return [dict(zip(names, combo)) for combo in itertools.product(*(axes[n] for n in names))]


def columns_for(cfg: ExperimentConfig) -> list[str]:
    cols = list(cfg.sweep)
    out = set(cfg.outputs)
    phase_methods = [m for m in cfg.methods if m != "perturbative"]
    if "geophase" in out:
        cols += ["phi_total", "phi_unitary"] + [f"phi_{m}" for m in phase_methods]
    if "delta_phi" in out:
        cols += ["delta_phi"] + [f"delta_phi_{m}" for m in phase_methods]
        if "perturbative" in cfg.methods:
            cols += ["delta_phi_perturbative", "delta_phi_perturbative_approx"]
    if "concurrence" in out:
        cols.append("concurrence")
    if "entropy" in out:
        cols.append("entropy")
    if "factors" in out:
        cols.append("damping")
    cols.append("status")
    return cols


def _omega(cfg: ExperimentConfig, params, state) -> float:
    if isinstance(state, WernerSpec):
        return params.cycle_frequency(state.branch)
    if cfg.omega is not None:
        return cfg.omega
    return params.omega1 + params.omega2


def _build_env(cfg: ExperimentConfig, omega: float, point: dict):
    env = cfg.env
    if env.kind == "boson":
        return env.build(omega, gamma0=point.get("gamma0"))
    if env.kind == "spin":
        n = point.get("n_spins")
        return env.build(omega, cfg.seed, lambda_over_h=point.get("lambda_over_h"), n_spins=n)
    return env.build()


def _damping(env, state, t):
    branch = state.branch if isinstance(state, WernerSpec) else Branch.THETA
    if isinstance(env, BosonBathSpec):
        f = boson_factors(env, t)
        return f.theta_damping if branch is Branch.THETA else f.mu_damping
    if isinstance(env, SpinBathSpec):
        return (q_factor if branch is Branch.THETA else p_factor)(env, t)
    return 1.0


def _perturbative(cfg: ExperimentConfig, env, state, point) -> tuple[float, float]:
    """Series values (full, large-cutoff) or a reason they do not apply."""
    if not (isinstance(state, WernerSpec) and state.r == 1 and state.branch is Branch.THETA):
        raise PairPhaseError("perturbative series needs an r = 1 THETA state")
    n = cfg.cycles
    if isinstance(env, BosonBathSpec):
        if not env.gamma01 == env.gamma02 == env.gamma012:
            raise PairPhaseError("perturbative series needs equal couplings")
        kw = dict(p=state.p, gamma0=env.gamma01, cutoff_ratio=cfg.env.lambda_over_omega, winding=n)
        if env.spectral is Spectral.OHMIC:
            kinds = (PerturbativeKind.OHMIC_FULL, PerturbativeKind.OHMIC_APPROX)
        else:
            kinds = (PerturbativeKind.SUPRAOHMIC_FULL, PerturbativeKind.SUPRAOHMIC_APPROX)
        return perturbative_phase(kinds[0], **kw), perturbative_phase(kinds[1], **kw)
    if isinstance(env, SpinBathSpec):
        spin_cfg: SpinEnv = cfg.env
        if spin_cfg.random is not None or spin_cfg.spins is not None or spin_cfg.eps_to_lambda != 1:
            raise PairPhaseError("spin series needs a homogeneous bath with eps = lam")
        ratio = point.get("lambda_over_h", spin_cfg.lambda_over_h)
        val = perturbative_phase(
            PerturbativeKind.SPIN_BATH,
            p=state.p,
            lambda_over_h=ratio,
            n_spins=len(env),
            h_over_omega=spin_cfg.h,
            winding=n,
        )
        return val, val
    return 0.0, 0.0


def compute_row(cfg: ExperimentConfig, point: dict) -> dict:
    """Evaluate one sweep point; failures are recorded in ``status``, never raised."""
    row = {c: math.nan for c in columns_for(cfg)}
    row.update(point)
    notes = []
    try:
        params = cfg.system.build()
        if cfg.state.kind == "werner":
            state = cfg.state.build(p=point.get("p"), r=point.get("r"))
        else:
            state = cfg.state.build()
        omega = _omega(cfg, params, state)
        env = _build_env(cfg, omega, point)
        n = cfg.cycles
        t_end = n * 2 * math.pi / abs(omega)
        t = point.get("t", t_end)
    except (PairPhaseError, ValueError) as err:
        row["status"] = f"error: {type(err).__name__}: {err}"
        return row

    out = set(cfg.outputs)
    if out & {"geophase", "delta_phi"}:
        first = None
        reference = None
        for method in cfg.methods:
            try:
                if method == "reduced":
                    if not (isinstance(state, WernerSpec) and state.r == 1):
                        raise PairPhaseError("reduced integrand needs an r = 1 Werner-type state")
                    res = reduced_phase(state, params, env, n)
                    reference = res.phi_total
                elif method == "kinematic":
                    steps = n * (cfg.steps_per_cycle - 1) + 1
                    traj = trajectory(state, params, env, t_end, steps)
                    res = kinematic_phase(traj, omega=omega, reference=reference)
                else:
                    full, approx = _perturbative(cfg, env, state, point)
                    if "delta_phi" in out:
                        row["delta_phi_perturbative"] = full
                        row["delta_phi_perturbative_approx"] = approx
                    continue
            except (PairPhaseError, ValueError) as err:
                notes.append(f"{method}: {err}")
                continue
            first = first or res
            if "geophase" in out:
                row[f"phi_{method}"] = res.phi_total
            if "delta_phi" in out:
                row[f"delta_phi_{method}"] = res.delta_phi
        if first is not None:
            if "geophase" in out:
                row["phi_total"] = first.phi_total
                row["phi_unitary"] = first.phi_unitary
            if "delta_phi" in out:
                row["delta_phi"] = first.delta_phi

    try:
        if out & {"concurrence", "entropy"}:
            rho = density_stack(state, params, env, [t])[0]
            if "concurrence" in out:
                row["concurrence"] = concurrence_wootters(rho)
            if "entropy" in out:
                row["entropy"] = von_neumann_entropy(rho)
        if "factors" in out:
            row["damping"] = float(np.asarray(_damping(env, state, t)))
    except (PairPhaseError, ValueError) as err:
        notes.append(f"state: {err}")

    row["status"] = "ok" if not notes else "partial: " + "; ".join(notes)
    return row


def run_sweep(cfg: ExperimentConfig, workers: int = 1) -> ResultTable:
    """Evaluate every sweep point; row order follows :func:`sweep_points`."""
    points = sweep_points(cfg)
    task = partial(compute_row, cfg)
    if workers <= 1 or len(points) <= 1:
        rows = [task(pt) for pt in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(task, points, chunksize=max(1, len(points) // (4 * workers))))
    return ResultTable(columns_for(cfg), rows)


def _cell(v) -> str:
    if isinstance(v, float):
        # repr gives the shortest string that round-trips
        return "" if math.isnan(v) else repr(v)
    return str(v)


def to_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(row[c]) for c in table.columns])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_json(table: ResultTable) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "columns": table.columns,
        "rows": [[_json_value(row[c]) for c in table.columns] for row in table.rows],
    }
    return json.dumps(doc, indent=1) + "\n"
