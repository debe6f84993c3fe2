import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pairphase.boson import BosonBathSpec, Spectral
from pairphase.core import (
    Branch,
    GeneralInitialState,
    ParameterDomainError,
    PreconditionError,
    SystemParams,
    WernerSpec,
)
from pairphase.evolution import CLOSED, Trajectory, density_stack, trajectory
from pairphase.geophase import (
    Method,
    PerturbativeKind,
    cycle_count,
    kinematic_phase,
    lift_to,
    perturbative_phase,
    reduced_phase,
    reduced_phase_boson_mu,
    reduced_phase_boson_theta,
    reduced_phase_spin,
    spectral_of,
    unitary_phase,
    wrap_phase,
)
from pairphase.spinbath import SpinBathSpec

# 30-digit references from mpmath quadrature of the occupation integrand
OHMIC_01_PHI = 5.67591176432520699350049412574
OHMIC_01_DELTA = 0.963522783940517135806529050816
OHMIC_002_DELTA = 0.208614354189710569796926282687
SUPRA_01_DELTA = 0.190631408831073782839781435911
MU_PHI = 4.54076473207057962564210432008
OHMIC_APPROX_002 = 0.205198047135286760581249684406

TWO_PI = 2 * np.pi


def ohmic(g, cutoff=100.0):
    return BosonBathSpec.equal(Spectral.OHMIC, g, cutoff)


def kinematic(spec, params, env, cycles=1, per_cycle=1000, omega=None):
    w = params.cycle_frequency(spec.branch) if omega is None else omega
    traj = trajectory(spec, params, env, cycles * TWO_PI / abs(w), cycles * per_cycle + 1)
    return kinematic_phase(traj, omega=omega)


def test_wrap_and_lift():
    assert wrap_phase(np.pi) == pytest.approx(np.pi)
    assert wrap_phase(-np.pi) == pytest.approx(np.pi)
    assert wrap_phase(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    assert lift_to(0.1, 4 * np.pi) == pytest.approx(4 * np.pi + 0.1)


def test_cycle_count():
    assert cycle_count(3 * TWO_PI, 1.0) == 3
    with pytest.raises(PreconditionError):
        cycle_count(3.5 * TWO_PI, 1.0)


def test_reduced_ohmic_reference_values(theta_params):
    res = reduced_phase_boson_theta(WernerSpec(1.0, 0.25), theta_params, ohmic(0.01))
    assert res.phi_total == pytest.approx(OHMIC_01_PHI, rel=1e-10)
    assert res.delta_phi == pytest.approx(OHMIC_01_DELTA, rel=1e-9)
    assert res.method is Method.REDUCED_INTEGRAND
    weak = reduced_phase_boson_theta(WernerSpec(1.0, 0.25), theta_params, ohmic(0.002))
    assert weak.delta_phi == pytest.approx(OHMIC_002_DELTA, rel=1e-9)


def test_reduced_supraohmic_reference_value(theta_params):
    bath = BosonBathSpec.equal(Spectral.SUPRAOHMIC, 0.01, 100.0)
    res = reduced_phase_boson_theta(WernerSpec(1.0, 0.25), theta_params, bath)
    assert res.delta_phi == pytest.approx(SUPRA_01_DELTA, rel=1e-9)


def test_reduced_mu_reference_value(mu_params):
    bath = BosonBathSpec(Spectral.OHMIC, 0.01, 0.002, 0.003, 100.0)
    res = reduced_phase_boson_mu(WernerSpec(1.0, 0.3, Branch.MU), mu_params, bath)
    assert res.phi_total == pytest.approx(MU_PHI, rel=1e-10)


def test_mu_with_equal_couplings_is_undamped(mu_params):
    spec = WernerSpec(1.0, 0.3, Branch.MU)
    res = reduced_phase_boson_mu(spec, mu_params, ohmic(0.05))
    assert res.delta_phi == pytest.approx(0.0, abs=1e-10)


def test_mu_needs_distinct_frequencies():
    with pytest.raises(PreconditionError):
        reduced_phase_boson_mu(WernerSpec(1.0, 0.3, Branch.MU), SystemParams(1.0, 1.0), ohmic(0.01))


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_reduced_endpoints_are_exact(theta_params, p):
    res = reduced_phase_boson_theta(WernerSpec(1.0, p), theta_params, ohmic(0.1), n=3)
    assert res.delta_phi == 0.0
    assert res.phi_total == pytest.approx(3 * TWO_PI * (1 - p))


def test_reduced_needs_pure_component(theta_params):
    with pytest.raises(PreconditionError):
        reduced_phase_boson_theta(WernerSpec(0.9, 0.3), theta_params, ohmic(0.01))


def test_reduced_closed_matches_unitary(theta_params):
    for p in (0.1, 0.5, 0.8):
        res = reduced_phase_boson_theta(WernerSpec(1.0, p), theta_params, CLOSED, n=2)
        assert res.phi_total == pytest.approx(2 * TWO_PI * (1 - p), abs=1e-9)


def test_unitary_phase_sign_follows_cycle_frequency():
    spec = WernerSpec(1.0, 0.3, Branch.MU)
    assert unitary_phase(spec, SystemParams(0.4, 1.4)) == pytest.approx(-TWO_PI * 0.7)


def test_maximally_entangled_phase_is_pi(theta_params):
    res = kinematic(WernerSpec(1.0, 0.5), theta_params, CLOSED)
    assert res.phi_total == pytest.approx(np.pi, abs=1e-9)


@pytest.mark.parametrize("r", [0.3, 0.6, 0.95])
def test_kinematic_closed_mixed_werner_matches_closed_form(theta_params, r):
    spec = WernerSpec(r, 0.3)
    res = kinematic(spec, theta_params, CLOSED, cycles=2)
    assert res.phi_total == pytest.approx(unitary_phase(spec, theta_params, 2), abs=1e-8)
    assert res.delta_phi == pytest.approx(0.0, abs=1e-8)


def test_general_state_unitary_phase_matches_werner(theta_params):
    spec = WernerSpec(1.0, 0.3)
    direct = unitary_phase(spec, theta_params)
    via_twin = unitary_phase(spec.pure_component(), theta_params, omega=1.0)
    assert wrap_phase(direct - via_twin) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("g, p", [(0.01, 0.25), (0.05, 0.7), (0.002, 0.4)])
def test_kinematic_agrees_with_reduced_boson(theta_params, g, p):
    spec = WernerSpec(1.0, p)
    ref = reduced_phase_boson_theta(spec, theta_params, ohmic(g))
    res = kinematic(spec, theta_params, ohmic(g), per_cycle=2000)
    assert res.phi_total == pytest.approx(ref.phi_total, abs=1e-6)


def test_kinematic_agrees_with_reduced_spin(theta_params):
    spec = WernerSpec(1.0, 0.35)
    bath = SpinBathSpec.random(6, 11)
    ref = reduced_phase_spin(spec, theta_params, bath)
    res = kinematic(spec, theta_params, bath, per_cycle=4000)
    assert res.phi_total == pytest.approx(ref.phi_total, abs=1e-5)


def test_kinematic_general_state_needs_omega(theta_params):
    psi = WernerSpec(1.0, 0.3).pure_component()
    traj = trajectory(psi, theta_params, ohmic(0.01), TWO_PI, 1001)
    with pytest.raises(PreconditionError):
        kinematic_phase(traj)
    ref = reduced_phase_boson_theta(WernerSpec(1.0, 0.3), theta_params, ohmic(0.01))
    res = kinematic_phase(traj, omega=1.0, reference=ref.phi_total)
    assert res.phi_total == pytest.approx(ref.phi_total, abs=1e-5)


def test_kinematic_preconditions(theta_params):
    spec = WernerSpec(1.0, 0.3)
    with pytest.raises(PreconditionError):
        kinematic_phase(trajectory(spec, theta_params, CLOSED, 1.5 * TWO_PI, 2001))
    with pytest.raises(PreconditionError):
        kinematic_phase(trajectory(spec, theta_params, CLOSED, TWO_PI, 400))


def test_kinematic_on_nonuniform_grid(theta_params):
    spec = WernerSpec(1.0, 0.25)
    bath = ohmic(0.01)
    # denser sampling near t = 0, where the bath factor changes fastest
    times = TWO_PI * np.linspace(0, 1, 1501) ** 2
    traj = Trajectory(times, density_stack(spec, theta_params, bath, times), theta_params, bath, spec)
    res = kinematic_phase(traj)
    assert res.phi_total == pytest.approx(OHMIC_01_PHI, abs=1e-4)


def test_dispatch(theta_params, mu_params):
    spin = SpinBathSpec.random(4, 2)
    assert reduced_phase(WernerSpec(1.0, 0.3), theta_params, spin) == reduced_phase_spin(
        WernerSpec(1.0, 0.3), theta_params, spin
    )
    mu = WernerSpec(1.0, 0.3, Branch.MU)
    assert reduced_phase(mu, mu_params, ohmic(0.01)) == reduced_phase_boson_mu(mu, mu_params, ohmic(0.01))


def test_ohmic_approx_reference_value():
    val = perturbative_phase(PerturbativeKind.OHMIC_APPROX, p=0.25, gamma0=0.002, cutoff_ratio=100)
    assert val == pytest.approx(OHMIC_APPROX_002, rel=1e-13)


@given(
    st.floats(0.0, 1.0),
    st.sampled_from(list(PerturbativeKind)),
    st.integers(1, 5),
)
def test_series_antisymmetric_in_p(p, kind, n):
    kw = dict(gamma0=0.01, lambda_over_h=0.05, n_spins=30, winding=n)
    a = perturbative_phase(kind, p=p, **kw)
    b = perturbative_phase(kind, p=1 - p, **kw)
    assert a + b == pytest.approx(0.0, abs=1e-12 * max(1.0, abs(a)))


@given(st.floats(0.01, 0.99), st.integers(1, 6))
def test_approx_series_linear_in_winding(p, n):
    for kind in (PerturbativeKind.OHMIC_APPROX, PerturbativeKind.SUPRAOHMIC_APPROX):
        one = perturbative_phase(kind, p=p, gamma0=0.01)
        assert perturbative_phase(kind, p=p, gamma0=0.01, winding=n) == pytest.approx(n * one, rel=1e-14)


def test_series_vanishes_at_special_points():
    for kind in PerturbativeKind:
        for p in (0.0, 0.5, 1.0):
            assert perturbative_phase(kind, p=p, gamma0=0.1, lambda_over_h=0.1) == pytest.approx(0, abs=1e-15)


def test_full_series_approach_their_limits():
    full = perturbative_phase("OhmicFull", p=0.2, gamma0=0.01, cutoff_ratio=1e6)
    approx = perturbative_phase("OhmicApprox", p=0.2, gamma0=0.01, cutoff_ratio=1e6)
    assert full == pytest.approx(approx, rel=1e-6)
    full = perturbative_phase("SupraohmicFull", p=0.2, gamma0=0.01, cutoff_ratio=1e6)
    approx = perturbative_phase("SupraohmicApprox", p=0.2, gamma0=0.01)
    assert full == pytest.approx(approx, rel=1e-6)


def test_perturbative_domain():
    with pytest.raises(ParameterDomainError):
        perturbative_phase("OhmicFull", p=1.5, gamma0=0.01)
    with pytest.raises(PreconditionError):
        perturbative_phase("OhmicFull", p=0.5, gamma0=0.01, winding=0)
    with pytest.raises(ParameterDomainError):
        perturbative_phase("SpinBath", p=0.3, h_over_omega=0.0)
    assert spectral_of("SupraohmicApprox") is Spectral.SUPRAOHMIC
    with pytest.raises(ParameterDomainError):
        spectral_of("SpinBath")


def test_exact_correction_grows_with_coupling(theta_params):
    deltas = [
        reduced_phase_boson_theta(WernerSpec(1.0, 0.25), theta_params, ohmic(g)).delta_phi
        for g in (0.001, 0.002, 0.005, 0.01)
    ]
    assert deltas == sorted(deltas)
    assert all(d > 0 for d in deltas)


def test_general_state_closed_phase_with_single_flip_weight(theta_params):
    # a state with weight on every basis vector still has a well-defined unitary phase
    psi = GeneralInitialState(0.6, 0.48, 0.36, np.sqrt(0.28))
    phi = unitary_phase(psi, theta_params, omega=1.0)
    traj = trajectory(psi, theta_params, CLOSED, TWO_PI, 2001)
    assert kinematic_phase(traj, omega=1.0).delta_phi == pytest.approx(0.0, abs=1e-7)
    assert np.isfinite(phi)
