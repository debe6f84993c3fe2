import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pairphase.boson import BosonBathSpec, Spectral
from pairphase.core import Branch, ParameterDomainError, SystemParams, UnsupportedRegimeError, WernerSpec
from pairphase.entanglement import (
    concurrence_closed,
    concurrence_decoupled_literal,
    concurrence_pure_dephased,
    concurrence_signed,
    concurrence_wootters,
    entanglement_series,
    linear_entropy,
    phase_concurrence_ratio,
    von_neumann_entropy,
)
from pairphase.evolution import CLOSED, density_stack, trajectory
from pairphase.spinbath import SpinBathSpec, q_factor

SY = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SY, SY)


def wootters_oracle(rho):
    """Textbook route: square roots of the eigenvalues of rho (sy sy) rho* (sy sy)."""
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(rho @ YY @ rho.conj() @ YY).real)[::-1], 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def random_density(seed, rank=4):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


@pytest.mark.parametrize("seed", range(8))
def test_wootters_matches_textbook_route(seed):
    rho = random_density(seed, rank=1 + seed % 4)
    assert concurrence_wootters(rho) == pytest.approx(wootters_oracle(rho), abs=1e-7)


def test_known_states():
    bell = np.zeros(4)
    bell[[0, 3]] = 1 / np.sqrt(2)
    assert concurrence_wootters(np.outer(bell, bell)) == pytest.approx(1.0, abs=1e-12)
    assert concurrence_wootters(np.eye(4) / 4) == 0.0
    product = np.zeros((4, 4))
    product[0, 0] = 1
    assert concurrence_wootters(product) == 0.0
    # Werner states are entangled only above r = 1/3
    assert concurrence_wootters(np.asarray(density_stack(WernerSpec(0.3, 0.5), SystemParams(1.0), CLOSED, 0)[0])) == 0
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    assert von_neumann_entropy(np.outer(bell, bell)) == pytest.approx(0.0, abs=1e-12)


def test_stack_and_single_agree():
    stack = np.array([random_density(s) for s in range(5)])
    c = concurrence_wootters(stack)
    assert c.shape == (5,)
    assert c == pytest.approx([concurrence_wootters(r) for r in stack])
    assert von_neumann_entropy(stack) == pytest.approx([von_neumann_entropy(r) for r in stack])
    assert linear_entropy is von_neumann_entropy


@given(st.floats(0, 1), st.floats(0, 1))
def test_dephased_pure_state_closed_form(p, damping):
    spec = WernerSpec(1.0, p)
    rho = np.asarray(density_stack(spec, SystemParams(1.0), CLOSED, 0.0)[0]).copy()
    rho[0, 3] *= damping
    rho[3, 0] *= damping
    assert concurrence_wootters(rho) == pytest.approx(concurrence_pure_dephased(p, damping), abs=1e-7)


@given(st.integers(0, 500))
def test_concurrence_bounded(seed):
    rho = random_density(seed)
    assert 0 <= concurrence_wootters(rho) <= 1
    assert -1e-12 <= von_neumann_entropy(rho) <= 2 + 1e-12


@pytest.mark.parametrize("branch", list(Branch))
def test_closed_form_matches_wootters_boson(branch):
    params = SystemParams(1.4, 0.4)
    bath = BosonBathSpec(Spectral.OHMIC, 0.03, 0.01, 0.012, 50.0)
    spec = WernerSpec(1.0, 0.3, branch)
    t = np.linspace(0, 6, 13)
    exact = concurrence_wootters(density_stack(spec, params, bath, t))
    assert concurrence_closed(branch, bath, spec, params, t) == pytest.approx(exact, abs=1e-7)


def test_closed_form_spin_and_closed():
    params = SystemParams(1.0)
    bath = SpinBathSpec.random(10, 4)
    spec = WernerSpec(1.0, 0.2)
    t = np.linspace(0, 5, 11)
    c = concurrence_closed(Branch.THETA, bath, spec, params, t)
    assert c == pytest.approx(2 * np.sqrt(0.16) * q_factor(bath, t))
    assert concurrence_closed(Branch.THETA, CLOSED, spec, params, t) == pytest.approx(np.full(11, 0.8))
    with pytest.raises(UnsupportedRegimeError):
        concurrence_closed(Branch.THETA, CLOSED, WernerSpec(0.9, 0.2), params, t)


def test_signed_form_goes_negative_with_q():
    assert concurrence_signed(0.5, -0.6) == pytest.approx(-0.6)
    assert concurrence_signed(0.5, 0.6) == pytest.approx(0.6)
    rho = np.asarray(density_stack(WernerSpec(1.0, 0.5), SystemParams(1.0), CLOSED, 0.0)[0]).copy()
    rho[0, 3] *= -0.6
    rho[3, 0] *= -0.6
    assert concurrence_wootters(rho) == pytest.approx(0.6, abs=1e-7)


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5])
def test_decoupled_literal_agrees_below_half(p):
    assert concurrence_decoupled_literal(p) == pytest.approx(2 * np.sqrt(p * (1 - p)), abs=1e-12)


@pytest.mark.parametrize("p", [0.6, 0.8, 0.95])
def test_decoupled_literal_above_half(p):
    assert concurrence_decoupled_literal(p) == pytest.approx(2 * (1 - p), abs=1e-12)


def test_phase_concurrence_ratio():
    assert phase_concurrence_ratio(0.5) == pytest.approx(np.pi)
    assert phase_concurrence_ratio(1.0) == 0.0
    with pytest.raises(ParameterDomainError):
        phase_concurrence_ratio(0.0)


def test_entanglement_series_follows_trajectory():
    bath = BosonBathSpec.equal(Spectral.OHMIC, 0.05, 100.0)
    traj = trajectory(WernerSpec(1.0, 0.3), SystemParams(1.0), bath, 10.0, 21)
    series = entanglement_series(traj)
    assert len(series) == 21 and series[0].t == 0.0
    assert series[0].concurrence == pytest.approx(2 * np.sqrt(0.21), abs=1e-7)
    conc = [s.concurrence for s in series]
    assert conc == sorted(conc, reverse=True)
    ent = [s.entropy for s in series]
    assert ent[0] == pytest.approx(0.0, abs=1e-9)
    assert ent == sorted(ent)
