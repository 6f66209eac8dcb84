import math

import pytest

from physics.exceptions import RegimeWarning
from physics.params import PhysicalParams, UnitSystem, derive_params, validate_regime


def test_derived_quantities_for_organization_preset(organization):
    p, d = organization
    assert d.u0 == pytest.approx(-0.0125, rel=1e-4)
    assert d.gamma0 == pytest.approx(2.5e-5, rel=1e-4)
    assert d.delta_c == pytest.approx(-1.0, abs=1e-5)
    assert abs(d.eta_eff) ** 2 == pytest.approx(0.0625, rel=1e-5)
    assert d.eta_eff.imag < 0 < d.eta_eff.real
    assert d.pump_lattice == pytest.approx(d.u0 * (p.eta / p.g) ** 2, rel=1e-12)
    assert d.gamma0 == pytest.approx(p.g ** 2 * d.scatter_weight, rel=1e-12)


def test_explicit_cavity_detuning_overrides_prescription():
    p = PhysicalParams.preset('organization', delta_c=-2.0)
    assert not p.uses_prescription
    assert derive_params(p).delta_c == -2.0
    assert PhysicalParams(delta_c='prescription').uses_prescription


def test_zero_coupling_gives_no_cavity_interaction():
    d = derive_params(PhysicalParams(g=0.0))
    assert d.u0 == 0.0 and d.gamma0 == 0.0 and d.eta_eff == 0
    assert d.pump_lattice < 0


def test_small_atomic_detuning_warns():
    with pytest.warns(RegimeWarning):
        derive_params(PhysicalParams(delta_a=-5.0))


@pytest.mark.parametrize('changes', [
    {'kappa': 0.0},
    {'g': -1.0},
    {'eta': -1.0},
    {'n_atoms': 2.5},
    {'n_atoms': -1},
    {'kT': 0.0},
    {'u2_x': 1.5},
    {'delta_a': 0.0, 'gamma': 0.0},
])
def test_invalid_parameters_are_rejected(changes):
    with pytest.raises(ValueError):
        PhysicalParams(**changes)


def test_from_mapping_applies_preset_then_overrides():
    p = PhysicalParams.from_mapping({'eta': 30.0}, preset='bistability')
    assert (p.g, p.n_atoms, p.eta) == (2.0, 50, 30.0)


def test_from_mapping_rejects_unknown_keys_and_presets():
    with pytest.raises(ValueError, match='Unknown physical parameter'):
        PhysicalParams.from_mapping({'detuning': -500})
    with pytest.raises(ValueError, match='Unknown preset'):
        PhysicalParams.preset('nonexistent')


def test_regime_flags():
    p = PhysicalParams.preset('bistability')
    flags = validate_regime(p, derive_params(p))
    # N g^2 = 200 < kappa |delta_A| = 250
    assert not flags.defects_possible
    assert not flags.far_detuned
    assert flags.adiabatic

    crowded = p.replace(n_atoms=100)
    assert validate_regime(crowded, derive_params(crowded)).defects_possible

    far = p.replace(delta_a=-5000.0)
    assert validate_regime(far, derive_params(far)).far_detuned
    assert 'far_detuned' in validate_regime(far, derive_params(far)).active()


def test_unit_conversions():
    units = UnitSystem()
    assert units.to_microseconds(1000.0) == pytest.approx(50.0)
    assert units.from_microseconds(50.0) == pytest.approx(1000.0)
    assert units.length_to_meters(2.0 * math.pi) == pytest.approx(780.241e-9)
