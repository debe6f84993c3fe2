"""Shipped sweep configurations that regenerate the figure data sets."""

from __future__ import annotations

import copy

from .config import ExperimentConfig, parse_config

_P_GRID = {"start": 0.0, "stop": 1.0, "steps": 51}
_GAMMAS = [0.002, 0.005, 0.01, 0.02, 0.05, 0.1]
_T_BOSON = {"start": 0.0, "stop": 6.283185307179586, "steps": 201}
_T_SPIN = {"start": 0.0, "stop": 50.0, "steps": 501}

_PRESETS: dict[str, tuple[str, dict]] = {
    "fig2": (
        "ohmic bath: delta_phi over (p, gamma0), Lambda/Omega = 100",
        {
            "env": {"kind": "boson", "spectral": "ohmic", "gamma0": 0.01, "lambda_over_omega": 100},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": _P_GRID, "gamma0": _GAMMAS},
            "outputs": ["geophase", "delta_phi"],
        },
    ),
    "fig3": (
        "ohmic bath: exact against perturbative delta_phi",
        {
            "env": {"kind": "boson", "spectral": "ohmic", "gamma0": 0.01, "lambda_over_omega": 100},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": [0.1, 0.2, 0.3, 0.4], "gamma0": {"start": 0.0, "stop": 0.02, "steps": 21}},
            "outputs": ["delta_phi"],
            "methods": ["reduced", "perturbative"],
        },
    ),
    "fig4": (
        "supraohmic bath: delta_phi over (p, gamma0), Lambda/Omega = 100",
        {
            "env": {"kind": "boson", "spectral": "supraohmic", "gamma0": 0.01, "lambda_over_omega": 100},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": _P_GRID, "gamma0": _GAMMAS},
            "outputs": ["geophase", "delta_phi"],
        },
    ),
    "fig5": (
        "supraohmic bath: exact against perturbative delta_phi",
        {
            "env": {"kind": "boson", "spectral": "supraohmic", "gamma0": 0.01, "lambda_over_omega": 100},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": [0.1, 0.2, 0.3, 0.4], "gamma0": {"start": 0.0, "stop": 0.02, "steps": 21}},
            "outputs": ["delta_phi"],
            "methods": ["reduced", "perturbative"],
        },
    ),
    "fig6": (
        "ohmic bath, gamma0 = 0.002: concurrence and entropy against time",
        {
            "env": {"kind": "boson", "spectral": "ohmic", "gamma0": 0.002, "lambda_over_omega": 100},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": [0.01, 0.2, 0.5], "t": _T_BOSON},
            "outputs": ["concurrence", "entropy", "factors"],
        },
    ),
    "fig7": (
        "ohmic bath, gamma0 = 0.1: concurrence and entropy against time",
        {
            "env": {"kind": "boson", "spectral": "ohmic", "gamma0": 0.1, "lambda_over_omega": 100},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": [0.01, 0.2, 0.5], "t": _T_BOSON},
            "outputs": ["concurrence", "entropy", "factors"],
        },
    ),
    "fig8": (
        "spin bath, N = 100: geometric phase over (p, lambda/h)",
        {
            "env": {"kind": "spin", "n_spins": 100, "h": 1.0, "lambda_over_h": 0.05},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": {"start": 0.0, "stop": 1.0, "steps": 21}, "lambda_over_h": [0.0, 0.02, 0.05, 0.1]},
            "outputs": ["geophase", "delta_phi"],
        },
    ),
    "fig9": (
        "spin bath, N = 100: exact against perturbative delta_phi",
        {
            "env": {"kind": "spin", "n_spins": 100, "h": 1.0, "lambda_over_h": 0.05},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": [0.1, 0.2, 0.3, 0.4], "lambda_over_h": {"start": 0.0, "stop": 0.05, "steps": 11}},
            "outputs": ["delta_phi"],
            "methods": ["reduced", "perturbative"],
        },
    ),
    "fig10": (
        "spin bath, N = 10: concurrence against time for several couplings",
        {
            "env": {"kind": "spin", "n_spins": 10, "h": 1.0, "lambda_over_h": 0.1},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": [0.01, 0.2, 0.5], "lambda_over_h": [0.01, 0.1], "t": _T_SPIN},
            "outputs": ["concurrence", "factors"],
        },
    ),
    "fig11": (
        "spin bath, lambda/h = 0.1: concurrence and entropy against time for N = 10 and 100",
        {
            "env": {"kind": "spin", "n_spins": 10, "h": 1.0, "lambda_over_h": 0.1},
            "state": {"kind": "werner", "r": 1.0},
            "sweep": {"p": [0.1, 0.45], "n_spins": [10, 100], "t": _T_SPIN},
            "outputs": ["concurrence", "entropy"],
        },
    ),
}


def preset_names() -> list[str]:
    return list(_PRESETS)


def describe(name: str) -> str:
    return _PRESETS[name][0]


def preset_config(name: str) -> ExperimentConfig:
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(_PRESETS)}")
    return parse_config(_PRESETS[name][1])


def preset_dict(name: str) -> dict:
    """Raw mapping, useful as a starting point for a custom config file."""
    return copy.deepcopy(_PRESETS[name][1])
