# physics/params.py
"""
Unit convention, physical parameters and the derived per-atom coupling quantities.

Internally gamma = hbar = k = 1: rates and detunings are in units of the atomic half-linewidth,
lengths in 1/k, momenta in hbar k and energies in hbar gamma. SI values only appear through
``UnitSystem`` at I/O boundaries.
"""

import math
import warnings
from dataclasses import dataclass, asdict, fields, replace
from typing import Any, Dict, List, Mapping, Optional

from configs.physics_config import (PHYSICAL_DEFAULTS, PARAMETER_PRESETS, PHYSICAL_KEYS, UNIT_ANCHORS,
                                    DELTA_C_PRESCRIPTION, REGIME_SETTINGS)
from physics.exceptions import RegimeWarning


@dataclass(frozen=True)
class UnitSystem:
    """
    Conversion between the internal convention and SI.
    """
    gamma_si: float = UNIT_ANCHORS['gamma_si']
    wavelength_si: float = UNIT_ANCHORS['wavelength_si']
    hbar_si: float = UNIT_ANCHORS['hbar_si']

    @property
    def k_si(self) -> float:
        return 2.0 * math.pi / self.wavelength_si

    def to_seconds(self, t: float) -> float:
        return t / self.gamma_si

    def from_seconds(self, seconds: float) -> float:
        return seconds * self.gamma_si

    def to_microseconds(self, t: float) -> float:
        return 1e6 * self.to_seconds(t)

    def from_microseconds(self, microseconds: float) -> float:
        return self.from_seconds(1e-6 * microseconds)

    def length_to_meters(self, kz: float) -> float:
        return kz / self.k_si

    def power_density_to_si(self, value: float) -> float:
        """hbar gamma^2 k^2 -> W/m^2."""
        return value * self.hbar_si * self.gamma_si ** 2 * self.k_si ** 2

    def number_density_from_si(self, density_per_m3: float) -> float:
        """atoms/m^3 -> atoms per (1/k)^3."""
        return density_per_m3 / self.k_si ** 3


@dataclass(frozen=True)
class PhysicalParams:
    """
    Experiment inputs in gamma units. ``delta_c`` is None when the cavity detuning follows the
    positive-feedback prescription delta_C = N U0 - kappa.
    """
    gamma: float = PHYSICAL_DEFAULTS['gamma']
    g: float = PHYSICAL_DEFAULTS['g']
    kappa: float = PHYSICAL_DEFAULTS['kappa']
    delta_a: float = PHYSICAL_DEFAULTS['delta_a']
    eta: float = PHYSICAL_DEFAULTS['eta']
    n_atoms: int = PHYSICAL_DEFAULTS['n_atoms']
    kT: float = PHYSICAL_DEFAULTS['kT']
    omega_rec: float = PHYSICAL_DEFAULTS['omega_rec']
    u2_x: float = PHYSICAL_DEFAULTS['u2_x']
    u2_z: float = PHYSICAL_DEFAULTS['u2_z']
    delta_c: Optional[float] = PHYSICAL_DEFAULTS['delta_c']

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}.")
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}.")
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}.")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}.")
        if isinstance(self.n_atoms, bool) or int(self.n_atoms) != self.n_atoms or self.n_atoms < 0:
            raise ValueError(f"n_atoms must be a non-negative integer, got {self.n_atoms}.")
        object.__setattr__(self, 'n_atoms', int(self.n_atoms))
        if self.kT <= 0:
            raise ValueError(f"kT must be positive, got {self.kT}.")
        if self.omega_rec <= 0:
            raise ValueError(f"omega_rec must be positive, got {self.omega_rec}.")
        for name in ('u2_x', 'u2_z'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}.")
        if self.delta_c == DELTA_C_PRESCRIPTION:
            object.__setattr__(self, 'delta_c', None)
        if self.delta_a == 0 and self.gamma == 0:
            raise ValueError("delta_a = 0 together with gamma = 0 leaves the atomic response undefined.")

    @property
    def uses_prescription(self) -> bool:
        return self.delta_c is None

    def replace(self, **changes) -> 'PhysicalParams':
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any], preset: Optional[str] = None) -> 'PhysicalParams':
        """
        Builds parameters from defaults, an optional named preset and a flat mapping. Unknown keys
        are rejected.
        """
        unknown = set(mapping) - set(PHYSICAL_KEYS)
        if unknown:
            raise ValueError(f"Unknown physical parameter keys: {sorted(unknown)}. Allowed: {list(PHYSICAL_KEYS)}")
        values = dict(PHYSICAL_DEFAULTS)
        if preset is not None:
            if preset not in PARAMETER_PRESETS:
                raise ValueError(f"Unknown preset '{preset}'. Available: {sorted(PARAMETER_PRESETS)}")
            values.update(PARAMETER_PRESETS[preset])
        values.update(mapping)
        return cls(**{f.name: values[f.name] for f in fields(cls)})

    @classmethod
    def preset(cls, name: str, **overrides) -> 'PhysicalParams':
        return cls.from_mapping(overrides, preset=name)


@dataclass(frozen=True)
class DerivedParams:
    """
    Coupling quantities shared by the dynamics, the mean-field solver and the closed forms.

    ``scatter_weight`` is gamma / (delta_A^2 + gamma^2), so that Gamma0 = g^2 * scatter_weight and
    the pump lattice depth U0 (eta/g)^2 = eta^2 delta_A / (delta_A^2 + gamma^2) stay finite at g = 0.
    """
    u0: float
    gamma0: float
    eta_eff: complex
    delta_c: float
    pump_lattice: float
    scatter_weight: float


def derive_params(p: PhysicalParams) -> DerivedParams:
    denominator = p.delta_a ** 2 + p.gamma ** 2
    if denominator == 0:
        raise ValueError("delta_a = 0 together with gamma = 0 leaves the atomic response undefined.")

    if abs(p.delta_a) < REGIME_SETTINGS['adiabatic_margin'] * p.gamma:
        warnings.warn(f"|delta_A| = {abs(p.delta_a):g} is not much larger than gamma = {p.gamma:g}; "
                      f"adiabatic elimination of the excited state is questionable.", RegimeWarning)

    u0 = p.g ** 2 * p.delta_a / denominator
    gamma0 = p.g ** 2 * p.gamma / denominator
    eta_eff = p.eta * p.g / complex(p.gamma, -p.delta_a)
    delta_c = p.n_atoms * u0 - p.kappa if p.delta_c is None else float(p.delta_c)

    return DerivedParams(
        u0=u0,
        gamma0=gamma0,
        eta_eff=eta_eff,
        delta_c=delta_c,
        pump_lattice=p.eta ** 2 * p.delta_a / denominator,
        scatter_weight=p.gamma / denominator,
    )


@dataclass(frozen=True)
class RegimeFlags:
    far_detuned: bool
    defects_possible: bool
    strong_coupling: bool
    adiabatic: bool

    def active(self) -> List[str]:
        return [name for name, value in asdict(self).items() if value]

    def as_dict(self) -> Dict[str, bool]:
        return asdict(self)


def validate_regime(p: PhysicalParams, d: DerivedParams) -> RegimeFlags:
    """
    Evaluates the advisory regime inequalities:

    - far_detuned: |delta_A| >> N g^2 / kappa (equivalently N |U0| << kappa)
    - defects_possible: N g^2 > kappa |delta_A|
    - strong_coupling: g exceeds both kappa and gamma
    - adiabatic: |delta_A| >> gamma
    """
    collective_shift = p.n_atoms * p.g ** 2
    coupled = p.g > 0 and p.n_atoms > 0
    return RegimeFlags(
        far_detuned=abs(p.delta_a) * p.kappa >= REGIME_SETTINGS['far_detuned_margin'] * collective_shift,
        defects_possible=coupled and collective_shift > p.kappa * abs(p.delta_a),
        strong_coupling=coupled and p.g > max(p.kappa, p.gamma),
        adiabatic=abs(p.delta_a) >= REGIME_SETTINGS['adiabatic_margin'] * p.gamma,
    )
