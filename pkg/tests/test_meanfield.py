import math

import numpy as np
import pytest

from physics.exceptions import RegimeWarning
from physics.meanfield import (DensityProfile, adjudicate_prefactor, canonical_update, coefficients,
                               convergence_scan, critical_exponent_fit, critical_pump_strength,
                               density_from_mode_volume, instability_threshold_exact, locate_threshold,
                               odd_site_scan, order_parameter_near_threshold, pump_power_threshold,
                               solve_self_consistent)
from physics.params import derive_params


def test_uniform_profile_moments():
    rho = DensityProfile.uniform(64)
    assert rho.is_normalized()
    assert rho.theta() == pytest.approx(0.0, abs=1e-14)
    assert rho.bunching() == pytest.approx(0.5)


def test_perturbed_profile_moments():
    rho = DensityProfile.perturbed(0.2, 128)
    assert rho.is_normalized()
    assert rho.theta() == pytest.approx(0.1)
    mirrored = rho.mirrored()
    assert mirrored.theta() == pytest.approx(-0.1)
    assert mirrored.odd_fraction() == pytest.approx(1.0 - rho.odd_fraction(), abs=1e-12)


def test_profile_validation():
    with pytest.raises(ValueError):
        DensityProfile(np.zeros(4), -np.ones(4))
    with pytest.raises(ValueError):
        DensityProfile.make_grid(2)
    with pytest.raises(ValueError):
        DensityProfile.perturbed(1.5)
    with pytest.raises(ValueError):
        DensityProfile.uniform(9).mirrored()


def test_uniform_gas_is_a_fixed_point(bistability):
    p, d = bistability
    rho = DensityProfile.uniform(256)
    assert canonical_update(rho, p.replace(eta=100.0), derive_params(p.replace(eta=100.0))).distance(rho) < 1e-12


def test_coefficients_for_organized_gas(organization):
    p, d = organization
    c = coefficients(1.0, 1.0, p, d)
    assert c.i0 == pytest.approx(0.12475, rel=1e-4)
    assert c.u2 == pytest.approx(-p.n_atoms ** 2 * c.i0 * abs(d.u0))
    # delta_C - N U0 = -kappa under the prescription
    assert c.u1 == pytest.approx(-2.0 * p.n_atoms * c.i0 * p.kappa)


def test_coefficients_reject_inconsistent_moments(organization):
    p, d = organization
    with pytest.raises(ValueError):
        coefficients(0.9, 0.5, p, d)
    with pytest.raises(ValueError):
        coefficients(1.2, 1.0, p, d)


def test_closed_form_threshold_value(bistability):
    p, d = bistability
    with pytest.warns(RegimeWarning):
        assert critical_pump_strength(p, d) == pytest.approx(25.0, rel=1e-6)


def test_exact_instability_threshold(bistability):
    p, d = bistability
    assert instability_threshold_exact(p, d) == pytest.approx(25.71, abs=0.01)


def test_located_threshold_matches_linear_instability(bistability):
    p, d = bistability
    located = locate_threshold(p)
    assert 20.0 < located < 40.0
    assert located == pytest.approx(instability_threshold_exact(p, d), rel=1e-3)
    assert locate_threshold(p, m=1024) == pytest.approx(located, rel=1e-6)


def test_threshold_bracket_must_enclose_root(bistability):
    p, _ = bistability
    with pytest.raises(ValueError):
        locate_threshold(p, bracket=(30.0, 200.0))


def test_prefactor_adjudication(bistability):
    p, d = bistability
    verdict = adjudicate_prefactor(25.71, p, d)
    assert verdict.supported_prefactor == 'sqrt2'
    assert verdict.ratio_to_closed_form == pytest.approx(25.71 / 25.0)
    assert adjudicate_prefactor(35.0, p, d).supported_prefactor == '2'


def test_uniform_gas_below_threshold(bistability):
    p, _ = bistability
    point = p.replace(eta=15.0)
    solution = solve_self_consistent(point, derive_params(point), init=DensityProfile.perturbed(m=256),
                                     max_iter=1000)
    assert solution.converged
    assert abs(solution.profile.theta()) < 1e-6


def test_organized_above_threshold_and_mirror_branch(bistability):
    p, _ = bistability
    point = p.replace(eta=50.0)
    d = derive_params(point)
    even = solve_self_consistent(point, d, init=DensityProfile.perturbed(0.01, 256), max_iter=5000)
    odd = solve_self_consistent(point, d, init=DensityProfile.perturbed(-0.01, 256), max_iter=5000)
    assert even.profile.theta() > 0.5
    assert odd.profile.theta() == pytest.approx(-even.profile.theta(), abs=1e-8)
    assert even.profile.mirrored().distance(odd.profile) < 1e-8


def test_odd_seed_settles_on_odd_sites(bistability):
    p, _ = bistability
    (row,) = odd_site_scan(p, [50.0], m=256)
    assert row.odd_fraction_long > 0.7
    assert row.odd_fraction_short > 0.5


def test_odd_site_scan_iteration_counts(bistability):
    p, _ = bistability
    with pytest.raises(ValueError):
        odd_site_scan(p, [50.0], short=20, long=10)


def test_unnormalized_seed_is_rejected(bistability):
    p, d = bistability
    with pytest.raises(ValueError):
        solve_self_consistent(p, d, init=DensityProfile(DensityProfile.make_grid(16), np.ones(16)))


def test_exponent_fit_recovers_synthetic_power_laws():
    deltas = np.logspace(-3, -1, 8)
    assert critical_exponent_fit(deltas, 2.0 * deltas ** 0.5).exponent == pytest.approx(0.5)
    fit = critical_exponent_fit(deltas, 0.3 * deltas)
    assert fit.exponent == pytest.approx(1.0)
    assert fit.prefactor == pytest.approx(0.3)


def test_exponent_fit_needs_four_points():
    with pytest.raises(ValueError):
        critical_exponent_fit([1e-3, 1e-2, 1e-1], [0.1, 0.2, 0.3])


def test_pump_power_threshold_scaling(bistability):
    p, d = bistability
    base = pump_power_threshold(p, d, density=1e-3)
    assert pump_power_threshold(p, d, density=2e-3).internal == pytest.approx(base.internal / 2)
    far = p.replace(delta_a=2.0 * p.delta_a)
    assert pump_power_threshold(far, derive_params(far), density=1e-3).internal == pytest.approx(4 * base.internal)
    assert base.si_w_per_m2 > 0
    with pytest.raises(ValueError):
        pump_power_threshold(p, d, density=0.0)


def test_density_from_mode_volume():
    assert density_from_mode_volume(100, 1e-12) > 0
    with pytest.raises(ValueError):
        density_from_mode_volume(100, 0.0)


@pytest.mark.slow
def test_critical_exponent_is_one_half(bistability):
    p, _ = bistability
    eta_c = locate_threshold(p)
    deltas = np.logspace(-3, -1, 9)
    thetas = order_parameter_near_threshold(p, eta_c, deltas)
    assert critical_exponent_fit(deltas, thetas).exponent == pytest.approx(0.5, abs=0.05)


@pytest.mark.slow
def test_iterations_peak_at_threshold(bistability):
    p, _ = bistability
    eta_c = locate_threshold(p)
    etas = eta_c * np.linspace(0.5, 2.0, 31)
    scan = convergence_scan(p, etas)
    peak = max(scan, key=lambda point: point.iterations)
    assert math.isclose(peak.eta, eta_c, rel_tol=0.1)


def test_canonical_map_amplifies_even_seed_above_threshold(bistability):
    p, _ = bistability
    point = p.replace(eta=50.0)
    d = derive_params(point)
    rho = DensityProfile.perturbed(0.01, 256)
    thetas = [rho.theta()]
    for _ in range(10):
        rho = canonical_update(rho, point, d)
        thetas.append(rho.theta())
    assert np.all(np.diff(thetas) > -1e-12)
    assert thetas[-1] > 10 * thetas[0]
