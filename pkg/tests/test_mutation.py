"""Deliberately broken physics must be caught by the acceptance checks.

The reduced and kinematic routes share the bath-factor code, so their
agreement alone cannot expose a wrong factor; these tests pin down which
check does.
"""

import dataclasses

import pytest

from pairphase import evolution, geophase, spinbath, validation
from pairphase.boson import boson_factors


def _flipped_tilde(spec, t):
    f = boson_factors(spec, t)
    return dataclasses.replace(f, gamma12_tilde_sq=1 / f.gamma12_tilde_sq)


@pytest.fixture
def wrong_tilde_sign(monkeypatch):
    for module in (evolution, geophase, validation):
        monkeypatch.setattr(module, "boson_factors", _flipped_tilde)


def test_unmutated_dfs_checks_pass():
    assert validation.check_boson_dfs().passed
    assert validation.check_spin_dfs().passed


def test_wrong_tilde_sign_breaks_boson_dfs(wrong_tilde_sign):
    assert validation.check_boson_dfs().passed is False


def test_swapped_spin_factors_break_spin_dfs(monkeypatch):
    for module in (evolution, geophase, validation):
        monkeypatch.setattr(module, "p_factor", spinbath.q_factor)
    assert validation.check_spin_dfs().passed is False
