# physics/observables.py
"""
Scalar diagnostics of a SystemState: order and bunching parameters, defect ratios, localization,
phase-space volumes and kinetic temperatures.
"""

import math
from dataclasses import dataclass, asdict
from typing import Dict

import numpy as np

from physics.params import PhysicalParams

AXES = {'x': 0, 'z': 1}
CLASSIFIERS = ('z', 'checkerboard')


@dataclass(frozen=True)
class ObservableSample:
    t: float
    photon_number: float
    theta: float
    bunching: float
    defect_ratio: float
    defect_ratio_2d: float
    loc_z: float
    loc_x: float
    psv_z: float
    psv_x: float
    kin_T_z: float
    kin_T_x: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def _require_atoms(state, minimum: int = 1) -> None:
    if state.n_atoms < minimum:
        raise ValueError(f"Observable needs at least {minimum} atom(s), state holds {state.n_atoms}.")


def _axis_index(axis: str) -> int:
    if axis not in AXES:
        raise ValueError(f"Invalid axis '{axis}'. Use 'x' or 'z'.")
    return AXES[axis]


def fold_to_antinode(q: np.ndarray) -> np.ndarray:
    """Signed distance from the nearest antinode (multiple of pi), in [-pi/2, pi/2)."""
    return np.mod(np.asarray(q) + 0.5 * np.pi, np.pi) - 0.5 * np.pi


def fold_to_cell(q: np.ndarray) -> np.ndarray:
    """Phase folded into [-pi, pi)."""
    return np.mod(np.asarray(q) + np.pi, 2.0 * np.pi) - np.pi


def order_parameter(state) -> float:
    _require_atoms(state)
    return float(np.mean(np.cos(state.kz)))


def bunching(state) -> float:
    _require_atoms(state)
    return float(np.mean(np.cos(state.kz) ** 2))


def site_parity(state, classifier: str = 'z') -> np.ndarray:
    """
    True for atoms nearest to an even site. The 'z' classifier looks at kz only (even sites at
    kz = 2n pi); 'checkerboard' uses the sign of cos(kz) cos(kx).
    """
    if classifier == 'z':
        return np.abs(fold_to_cell(state.kz)) < 0.5 * np.pi
    if classifier == 'checkerboard':
        return np.cos(state.kz) * np.cos(state.kx) >= 0.0
    raise ValueError(f"Invalid classifier '{classifier}'. Supported: {CLASSIFIERS}")


def defect_count(state, classifier: str = 'z') -> int:
    """Number of atoms on minority-parity sites; on a tie the even parity is the majority."""
    _require_atoms(state)
    n_even = int(np.count_nonzero(site_parity(state, classifier)))
    return min(n_even, state.n_atoms - n_even)


def defect_ratio(state, classifier: str = 'z') -> float:
    return defect_count(state, classifier) / state.n_atoms


def localization(state, axis: str = 'z') -> float:
    _require_atoms(state)
    folded = fold_to_antinode(state.pos[:, _axis_index(axis)])
    return float(np.mean((folded / np.pi) ** 2))


def phase_space_volume(state, axis: str = 'z') -> float:
    """RMS distance from the nearest antinode (1/k) times RMS momentum (hbar k), in units of hbar."""
    _require_atoms(state, minimum=2)
    index = _axis_index(axis)
    delta_q = math.sqrt(float(np.mean(fold_to_antinode(state.pos[:, index]) ** 2)))
    delta_p = math.sqrt(float(np.mean(state.mom[:, index] ** 2)))
    return delta_q * delta_p


def kinetic_temperature(state, p: PhysicalParams, axis: str = 'z') -> float:
    """<p^2>/m along ``axis`` in hbar gamma (m = hbar k^2 / (2 omega_rec))."""
    _require_atoms(state)
    return float(2.0 * p.omega_rec * np.mean(state.mom[:, _axis_index(axis)] ** 2))


def untrapped_psv_estimate(p: PhysicalParams, kT: float = None) -> float:
    """lambda sqrt(m kT) / (4 sqrt(3) hbar) for a uniform thermal gas."""
    kT = p.kT if kT is None else kT
    return (2.0 * np.pi / (4.0 * math.sqrt(3.0))) * math.sqrt(kT / (2.0 * p.omega_rec))


def sample_observables(state, p: PhysicalParams) -> ObservableSample:
    photon_number = abs(state.alpha) ** 2
    if state.n_atoms == 0:
        nan = float('nan')
        return ObservableSample(state.t, photon_number, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan)

    psv = {axis: phase_space_volume(state, axis) if state.n_atoms >= 2 else float('nan') for axis in AXES}
    return ObservableSample(
        t=state.t,
        photon_number=photon_number,
        theta=order_parameter(state),
        bunching=bunching(state),
        defect_ratio=defect_ratio(state, 'z'),
        defect_ratio_2d=defect_ratio(state, 'checkerboard'),
        loc_z=localization(state, 'z'),
        loc_x=localization(state, 'x'),
        psv_z=psv['z'],
        psv_x=psv['x'],
        kin_T_z=kinetic_temperature(state, p, 'z'),
        kin_T_x=kinetic_temperature(state, p, 'x'),
    )
