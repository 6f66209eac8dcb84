# physics/analytics.py
"""
Closed-form finite-N estimates: fluctuation-triggered thresholds, hysteresis bounds, defect
existence and the harmonic-trap picture of the organized phase.
"""

import math
import warnings
from dataclasses import dataclass, asdict
from typing import Any, Dict, NamedTuple, Optional

from logger.logger_manager import LoggerManager
from physics.exceptions import RegimeWarning
from physics.meanfield import coefficients, critical_pump_strength
from physics.params import PhysicalParams, DerivedParams, validate_regime

log = LoggerManager.get_logger()


def density_fluctuation(p: PhysicalParams, delta_n: Optional[float] = None) -> float:
    """Typical even/odd population imbalance of a uniform gas, sqrt(N) unless given."""
    if delta_n is None:
        return math.sqrt(p.n_atoms)
    if delta_n < 0:
        raise ValueError(f"delta_n must be non-negative, got {delta_n}.")
    return float(delta_n)


def _require_coupling(p: PhysicalParams) -> None:
    if p.g == 0:
        raise ValueError("g = 0: atoms do not couple to the cavity mode.")


def _warn_if_not_far_detuned(p: PhysicalParams, d: DerivedParams, what: str) -> None:
    if not validate_regime(p, d).far_detuned:
        warnings.warn(f"{what} assumes |delta_A| >> N g^2 / kappa; got |delta_A| = {abs(p.delta_a):g} "
                      f"and N g^2 / kappa = {p.n_atoms * p.g ** 2 / p.kappa:g}.", RegimeWarning)


def fluctuation_trap_depth(p: PhysicalParams, d: DerivedParams, delta_n: Optional[float] = None,
                           exact: bool = False) -> float:
    """
    Depth 2|U1| of the lattice created by a thermal imbalance of ``delta_n`` atoms.

    The default is the far-detuned form (4 delta_n / pi) eta^2 g^2 / (kappa delta_A^2). With
    ``exact`` the mean-field coefficients are evaluated at theta = 2 delta_n / (pi N), B = 1/2.
    """
    delta_n = density_fluctuation(p, delta_n)
    if delta_n == 0:
        return 0.0
    if not exact:
        return (4.0 * delta_n / math.pi) * p.eta ** 2 * p.g ** 2 / (p.kappa * p.delta_a ** 2)

    if p.n_atoms == 0:
        raise ValueError("The exact trap depth needs at least one atom.")
    theta = 2.0 * delta_n / (math.pi * p.n_atoms)
    if theta ** 2 > 0.5:
        raise ValueError(f"delta_n = {delta_n:g} implies theta = {theta:.3g}, beyond sqrt(B) for B = 1/2.")
    return 2.0 * abs(coefficients(theta, 0.5, p, d).u1)


def up_threshold(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None,
                 delta_n: Optional[float] = None) -> float:
    """
    Pump strength at which the fluctuation trap depth reaches kT,
    sqrt(kT / kappa) kappa |delta_A| / g * sqrt(pi / (4 delta_n)).
    """
    _require_coupling(p)
    kT = p.kT if kT is None else kT
    delta_n = density_fluctuation(p, delta_n)
    _warn_if_not_far_detuned(p, d, "The up-threshold")
    if delta_n == 0:
        return math.inf
    return math.sqrt(kT / p.kappa) * p.kappa * abs(p.delta_a) / p.g * math.sqrt(math.pi / (4.0 * delta_n))


def down_threshold(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None) -> float:
    """An organized gas stays organized down to half the mean-field threshold."""
    return 0.5 * critical_pump_strength(p, d, kT)


class DefectBounds(NamedTuple):
    n_thr: float
    m_max: float
    defects_possible: bool


def defect_bounds(p: PhysicalParams, d: DerivedParams) -> DefectBounds:
    """
    Atom number kappa / |U0| beyond which minority-site wells exist, the largest stable number
    (N - n_thr) / 2 of defects and the N g^2 > kappa |delta_A| existence flag.
    """
    if d.u0 == 0:
        raise ValueError("U0 = 0 (g = 0): defect bounds are undefined without coupling.")
    n_thr = p.kappa / abs(d.u0)
    m_max = max(0.0, 0.5 * (p.n_atoms - n_thr))
    return DefectBounds(n_thr=n_thr, m_max=m_max, defects_possible=validate_regime(p, d).defects_possible)


def vibration_frequency(p: PhysicalParams, d: DerivedParams, alpha_abs: float) -> float:
    """
    Harmonic frequency at the bottom of an organized site,
    sqrt(2 omega_rec (|U0| eta / g |alpha| + 2 |U0| |alpha|^2)).
    """
    if alpha_abs < 0:
        raise ValueError(f"alpha_abs must be non-negative, got {alpha_abs}.")
    # |U0| eta / g without dividing by g
    interference = p.eta * p.g * abs(p.delta_a) / (p.delta_a ** 2 + p.gamma ** 2)
    curvature = interference * alpha_abs + 2.0 * abs(d.u0) * alpha_abs ** 2
    return math.sqrt(2.0 * p.omega_rec * curvature)


@dataclass(frozen=True)
class CloudSize:
    r2_over_lambda2: float
    r_over_lambda: float
    predicted_localization: float   # (k r / pi)^2, comparable to loc_z


def cloud_size(p: PhysicalParams, d: DerivedParams, alpha_abs: float, kT: Optional[float] = None) -> CloudSize:
    """
    Thermal cloud radius in an organized site,
    r^2 / lambda^2 = sqrt(kT / |U0|) (eta / g |alpha| + 2 |alpha|^2)^(-1/2) / (8 pi sqrt(3)).
    """
    _require_coupling(p)
    if alpha_abs <= 0:
        raise ValueError(f"cloud_size is singular for alpha_abs <= 0, got {alpha_abs}.")
    kT = p.kT if kT is None else kT
    depth = p.eta / p.g * alpha_abs + 2.0 * alpha_abs ** 2
    r2 = math.sqrt(kT / abs(d.u0)) / math.sqrt(depth) / (8.0 * math.pi * math.sqrt(3.0))
    return CloudSize(r2_over_lambda2=r2, r_over_lambda=math.sqrt(r2), predicted_localization=4.0 * r2)


@dataclass(frozen=True)
class ThresholdReport:
    eta_star: float
    eta_up: float
    eta_down: float
    n_thr: float
    m_max: float
    defects_possible: bool
    delta_E: float
    delta_E_exact: float
    delta_n: float
    kT: float
    regime: Dict[str, bool]

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def threshold_report(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None,
                     delta_n: Optional[float] = None) -> ThresholdReport:
    _require_coupling(p)
    kT = p.kT if kT is None else kT
    delta_n = density_fluctuation(p, delta_n)
    with warnings.catch_warnings():
        # the regime flags below carry the same information
        warnings.simplefilter('ignore', RegimeWarning)
        eta_star = critical_pump_strength(p, d, kT)
        eta_up = up_threshold(p, d, kT, delta_n)
    bounds = defect_bounds(p, d)
    exact_depth = fluctuation_trap_depth(p, d, delta_n, exact=True) if p.n_atoms > 0 else 0.0
    report = ThresholdReport(
        eta_star=eta_star,
        eta_up=eta_up,
        eta_down=0.5 * eta_star,
        n_thr=bounds.n_thr,
        m_max=bounds.m_max,
        defects_possible=bounds.defects_possible,
        delta_E=fluctuation_trap_depth(p, d, delta_n),
        delta_E_exact=exact_depth,
        delta_n=delta_n,
        kT=kT,
        regime=validate_regime(p, d).as_dict(),
    )
    log.debug(f"Threshold report N={p.n_atoms}, g={p.g:g}: eta*={eta_star:.4g}, up={eta_up:.4g}, "
              f"n_thr={bounds.n_thr:.4g}")
    return report
