import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pairphase.core import (
    Branch,
    DensityMatrix4,
    GeneralInitialState,
    ParameterDomainError,
    PreconditionError,
    StateIntegrityError,
    SystemParams,
    WernerSpec,
    eigensystem,
    fix_gauge,
    werner_density,
    werner_matrix,
)

probs = st.floats(0.0, 1.0)
mix = st.floats(1e-3, 1.0)


def test_system_params_rejects_nonpositive_omega1():
    with pytest.raises(ParameterDomainError):
        SystemParams(0.0)
    with pytest.raises(ParameterDomainError):
        SystemParams(1.0, -0.1)


def test_cycle_frequency_per_branch():
    params = SystemParams(1.4, 0.4)
    assert params.cycle_frequency(Branch.THETA) == pytest.approx(1.8)
    assert params.cycle_frequency(Branch.MU) == pytest.approx(1.0)
    assert SystemParams(0.4, 1.4).cycle_frequency(Branch.MU) == pytest.approx(-1.0)
    assert params.period(Branch.MU) == pytest.approx(2 * np.pi)


def test_mu_cycle_undefined_for_equal_frequencies():
    with pytest.raises(PreconditionError):
        SystemParams(1.0, 1.0).cycle_frequency(Branch.MU)


def test_general_state_normalisation():
    GeneralInitialState(1 / np.sqrt(2), 0, 0, 1j / np.sqrt(2))
    with pytest.raises(ParameterDomainError):
        GeneralInitialState(1, 1, 0, 0)


@pytest.mark.parametrize("r, p", [(0.0, 0.5), (1.1, 0.5), (0.5, -0.1), (0.5, 1.2)])
def test_werner_spec_domain(r, p):
    with pytest.raises(ParameterDomainError):
        WernerSpec(r, p)


def test_werner_matrix_entries():
    rho = werner_matrix(WernerSpec(0.6, 0.3))
    noise = 0.4 / 4
    assert rho[0, 0] == pytest.approx(noise + 0.6 * 0.7)
    assert rho[3, 3] == pytest.approx(noise + 0.6 * 0.3)
    assert rho[0, 3] == pytest.approx(0.6 * np.sqrt(0.21))
    assert rho[1, 1] == pytest.approx(noise)
    mu = werner_matrix(WernerSpec(1.0, 0.3, Branch.MU))
    assert mu[1, 2] == pytest.approx(np.sqrt(0.21))
    assert mu[0, 0] == 0


@given(mix, probs, st.sampled_from(list(Branch)))
def test_werner_states_are_valid(r, p, branch):
    rho = werner_density(WernerSpec(r, p, branch))
    assert rho.purity() <= 1 + 1e-12
    assert np.isclose(np.trace(np.asarray(rho)), 1)


def test_density_matrix_rejects_bad_input():
    with pytest.raises(StateIntegrityError):
        DensityMatrix4(np.eye(4))
    bad = np.diag([0.5, 0.5, 0.5, -0.5]).astype(complex)
    with pytest.raises(StateIntegrityError):
        DensityMatrix4(bad)
    nonherm = np.eye(4, dtype=complex) / 4
    nonherm[0, 1] = 0.1
    with pytest.raises(StateIntegrityError):
        DensityMatrix4(nonherm)


def test_density_matrix_is_read_only():
    rho = werner_density(WernerSpec(1.0, 0.3))
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 1.0


@given(mix, probs)
def test_eigensystem_reconstructs(r, p):
    es = eigensystem(werner_matrix(WernerSpec(r, p)))
    assert np.all(np.diff(es.eigenvalues) <= 1e-15)
    assert np.allclose(es.reconstruct(), werner_matrix(WernerSpec(r, p)), atol=1e-12)


def test_gauge_fix_makes_largest_component_real_positive():
    rng = np.random.default_rng(1)
    v = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    v, _ = np.linalg.qr(v)
    fixed = fix_gauge(v * np.exp(1j * rng.uniform(0, 6, 4)))
    top = fixed[np.argmax(np.abs(fixed), axis=0), range(4)]
    assert np.allclose(top.imag, 0) and np.all(top.real > 0)
    # columns only pick up a phase
    assert np.allclose(np.abs(np.sum(fixed.conj() * v, axis=0)), 1)
