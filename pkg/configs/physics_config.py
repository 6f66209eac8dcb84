# configs/physics_config.py
from pathlib import Path

PROJECT_ROOT: Path = Path(__file__).resolve().parent.parent

# SI anchors. Internally gamma = hbar = k = 1; these are only used at I/O boundaries.
UNIT_ANCHORS = {
    'gamma_si': 2.0e7,              # atomic half-linewidth [1/s], "20 per microsecond"
    'wavelength_si': 780.241e-9,    # Rb D2 line [m]
    'hbar_si': 1.054571817e-34,     # [J s]
    'atomic_mass_unit_si': 1.66053906660e-27,  # [kg]
    'rb85_mass_u': 84.911789738,
}

# [DERIVED] omega_rec = hbar k^2 / (2 m) for Rb-85 at 780.241 nm is 2.4251e4 1/s,
# i.e. 1.2126e-3 gamma with the gamma_si anchor above.
OMEGA_REC_RB85 = 1.2126e-3

PHYSICAL_DEFAULTS = {
    'gamma': 1.0,
    'g': 2.5,
    'kappa': 0.5,
    'delta_a': -500.0,
    'eta': 50.0,
    'n_atoms': 40,
    'kT': 0.5,                      # hbar * kappa, the cavity cooling limit
    'omega_rec': OMEGA_REC_RB85,
    'u2_x': 1.0 / 3.0,
    'u2_z': 1.0 / 3.0,
    'delta_c': None,                # None -> N U0 - kappa
}

# Named parameter sets. Entries override PHYSICAL_DEFAULTS.
PARAMETER_PRESETS = {
    'organization': {'g': 2.5, 'kappa': 0.5, 'delta_a': -500.0, 'eta': 50.0, 'n_atoms': 40},
    'bistability': {'g': 2.0, 'kappa': 0.5, 'delta_a': -500.0, 'eta': 50.0, 'n_atoms': 50},   # N g^2 = 200
    'hysteresis': {'g': 2.0, 'kappa': 0.5, 'delta_a': -500.0, 'eta': 50.0, 'n_atoms': 50},   # N g^2 held at 200
    'scaling': {'g': 0.5, 'kappa': 0.5, 'delta_a': -500.0, 'eta': 80.0, 'n_atoms': 800},  # N g^4 held at 50
    'localization': {'g': 2.5, 'kappa': 0.5, 'delta_a': -500.0, 'eta': 50.0, 'n_atoms': 40},
}

# Keys accepted in a flat config file for PhysicalParams.
PHYSICAL_KEYS = tuple(PHYSICAL_DEFAULTS.keys())

DELTA_C_PRESCRIPTION = 'prescription'

REGIME_SETTINGS = {
    'adiabatic_margin': 10.0,       # |delta_A| >= margin * gamma
    'far_detuned_margin': 10.0,     # |delta_A| >= margin * N g^2 / kappa
}
