# physics/meanfield.py
"""
One-dimensional mean-field theory along the cavity axis: the density-dependent potential
V(z) = U2 cos^2(kz) + U1 cos(kz), its canonical fixed point, the linear instability of the uniform
gas and the critical exponent of the order parameter.
"""

import math
import warnings
from dataclasses import dataclass, asdict
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy import optimize, stats
from scipy.integrate import trapezoid

from configs.experiment_config import MEANFIELD_SETTINGS, ANALYSIS_SETTINGS
from logger.logger_manager import LoggerManager
from physics.exceptions import RegimeWarning
from physics.params import PhysicalParams, DerivedParams, UnitSystem, derive_params, validate_regime

log = LoggerManager.get_logger()

NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class DensityProfile:
    """Density over kz in [0, 2 pi) on an equally spaced periodic grid, normalized to 1."""
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.shape != values.shape or grid.ndim != 1:
            raise ValueError("grid and values must be one-dimensional arrays of equal length.")
        if np.any(values < 0):
            raise ValueError("Density must be non-negative.")
        object.__setattr__(self, 'grid', grid)
        object.__setattr__(self, 'values', values)

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.grid.size

    def integrate(self, integrand: np.ndarray) -> float:
        """Periodic trapezoidal rule over one wavelength."""
        wrapped = np.append(integrand, integrand[0])
        return float(trapezoid(wrapped, dx=self.spacing))

    def norm(self) -> float:
        return self.integrate(self.values)

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.norm() - 1.0) < tol

    def theta(self) -> float:
        return self.integrate(np.cos(self.grid) * self.values)

    def bunching(self) -> float:
        return self.integrate(np.cos(self.grid) ** 2 * self.values)

    def odd_fraction(self) -> float:
        """Weight within a quarter wavelength of the odd sites kz = (2m+1) pi."""
        return self.integrate(np.where(np.cos(self.grid) < 0.0, self.values, 0.0))

    def distance(self, other: 'DensityProfile') -> float:
        """L1 distance."""
        return self.integrate(np.abs(self.values - other.values))

    def mirrored(self) -> 'DensityProfile':
        """Profile shifted by kz -> kz + pi (exact on grids with an even number of points)."""
        if self.grid.size % 2:
            raise ValueError("Mirroring needs an even number of grid points.")
        return DensityProfile(self.grid, np.roll(self.values, self.grid.size // 2))

    @classmethod
    def make_grid(cls, m: int = MEANFIELD_SETTINGS['grid_points']) -> np.ndarray:
        if m < 4:
            raise ValueError(f"Grid needs at least 4 points, got {m}.")
        return 2.0 * np.pi * np.arange(m) / m

    @classmethod
    def from_weights(cls, grid: np.ndarray, weights: np.ndarray) -> 'DensityProfile':
        profile = cls(grid, weights)
        return cls(grid, weights / profile.norm())

    @classmethod
    def uniform(cls, m: int = MEANFIELD_SETTINGS['grid_points']) -> 'DensityProfile':
        grid = cls.make_grid(m)
        return cls(grid, np.full(m, 1.0 / (2.0 * np.pi)))

    @classmethod
    def perturbed(cls, amplitude: float = MEANFIELD_SETTINGS['seed_amplitude'],
                  m: int = MEANFIELD_SETTINGS['grid_points']) -> 'DensityProfile':
        """(1 + amplitude cos kz) / (2 pi); a positive amplitude leans towards the even sites."""
        if abs(amplitude) > 1:
            raise ValueError(f"Perturbation amplitude must lie in [-1, 1], got {amplitude}.")
        grid = cls.make_grid(m)
        return cls.from_weights(grid, 1.0 + amplitude * np.cos(grid))


@dataclass(frozen=True)
class MeanFieldCoefficients:
    theta: float
    bunching: float
    i0: float
    u1: float
    u2: float


def coefficients(theta: float, bunching: float, p: PhysicalParams, d: DerivedParams) -> MeanFieldCoefficients:
    """
    I0 = |eta_eff|^2 / ([kappa + N Gamma0 B]^2 + [delta_C - N U0 B]^2),
    U2 = N^2 theta^2 I0 U0,  U1 = 2 N theta I0 (delta_C - N U0 B).
    """
    if not -1.0 - 1e-12 <= theta <= 1.0 + 1e-12:
        raise ValueError(f"theta must lie in [-1, 1], got {theta}.")
    if not -1e-12 <= bunching <= 1.0 + 1e-12:
        raise ValueError(f"bunching must lie in [0, 1], got {bunching}.")
    if theta ** 2 > bunching + 1e-12:
        raise ValueError(f"theta^2 = {theta ** 2} exceeds bunching = {bunching}.")

    n = p.n_atoms
    detuning = d.delta_c - n * d.u0 * bunching
    i0 = abs(d.eta_eff) ** 2 / ((p.kappa + n * d.gamma0 * bunching) ** 2 + detuning ** 2)
    return MeanFieldCoefficients(
        theta=theta,
        bunching=bunching,
        i0=i0,
        u1=2.0 * n * theta * i0 * detuning,
        u2=n ** 2 * theta ** 2 * i0 * d.u0,
    )


def potential(kz, coeffs: MeanFieldCoefficients):
    cos_kz = np.cos(kz)
    return coeffs.u2 * cos_kz ** 2 + coeffs.u1 * cos_kz


def canonical_update(rho: DensityProfile, p: PhysicalParams, d: DerivedParams,
                     kT: Optional[float] = None) -> DensityProfile:
    """One iteration rho -> exp(-V[rho] / kT) / Z."""
    kT = p.kT if kT is None else kT
    theta = float(np.clip(rho.theta(), -1.0, 1.0))
    bunch = float(np.clip(rho.bunching(), theta ** 2, 1.0))
    coeffs = coefficients(theta, bunch, p, d)
    energy = potential(rho.grid, coeffs)
    weights = np.exp(-(energy - energy.min()) / kT)
    return DensityProfile.from_weights(rho.grid, weights)


class MeanFieldSolution(NamedTuple):
    profile: DensityProfile
    iterations: int
    converged: bool
    theta_history: List[float]


def solve_self_consistent(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None,
                          init: Optional[DensityProfile] = None,
                          max_iter: int = MEANFIELD_SETTINGS['max_iter'],
                          tol: float = MEANFIELD_SETTINGS['tol']) -> MeanFieldSolution:
    """
    Fixed-point iteration of the canonical map until the L1 change drops below ``tol``.
    """
    rho = DensityProfile.perturbed() if init is None else init
    if not rho.is_normalized():
        raise ValueError(f"Initial profile is not normalized (norm = {rho.norm():.12g}).")

    history = [rho.theta()]
    for iteration in range(1, max_iter + 1):
        updated = canonical_update(rho, p, d, kT)
        change = updated.distance(rho)
        rho = updated
        history.append(rho.theta())
        if change < tol:
            log.debug(f"Mean-field converged after {iteration} iterations (eta={p.eta:g}, theta={history[-1]:.6g})")
            return MeanFieldSolution(rho, iteration, True, history)

    log.debug(f"Mean-field not converged after {max_iter} iterations (eta={p.eta:g}, theta={history[-1]:.6g})")
    return MeanFieldSolution(rho, max_iter, False, history)


def critical_pump_strength(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None) -> float:
    """
    Far-detuned closed-form threshold,
    eta* = sqrt(kT / (hbar kappa)) kappa |delta_A| / (sqrt(N) g) sqrt(2).
    """
    kT = p.kT if kT is None else kT
    if not validate_regime(p, d).far_detuned:
        warnings.warn(f"N g^2 / kappa = {p.n_atoms * p.g ** 2 / p.kappa:g} is not small against "
                      f"|delta_A| = {abs(p.delta_a):g}; the far-detuned threshold is approximate.", RegimeWarning)
    if p.g == 0 or p.n_atoms == 0:
        return math.inf
    return math.sqrt(kT / p.kappa) * p.kappa * abs(p.delta_a) / (math.sqrt(p.n_atoms) * p.g) * math.sqrt(2.0)


def linear_growth_coefficient(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None) -> float:
    """
    Amplification of a small cos(kz) modulation per canonical iteration,
    -N I0 (delta_C - N U0 / 2) / kT with I0 at theta = 0, B = 1/2.
    """
    kT = p.kT if kT is None else kT
    coeffs = coefficients(0.0, 0.5, p, d)
    return -p.n_atoms * coeffs.i0 * (d.delta_c - 0.5 * p.n_atoms * d.u0) / kT


def instability_threshold_exact(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None) -> float:
    """
    Pump strength at which N I0 hbar (N |U0| / 2 + kappa) = kT (with the configured cavity
    detuning), without the far-detuned approximation. I0 is proportional to eta^2, so the root
    follows from the growth coefficient at unit pump strength.
    """
    unit_pump = p.replace(eta=1.0)
    growth = linear_growth_coefficient(unit_pump, derive_params(unit_pump), kT)
    if growth <= 0:
        return math.inf
    return 1.0 / math.sqrt(growth)


def perturbation_growth_factor(p: PhysicalParams, kT: Optional[float] = None,
                               amplitude: float = MEANFIELD_SETTINGS['probe_amplitude'],
                               m: int = MEANFIELD_SETTINGS['grid_points']) -> float:
    """theta after one canonical iteration of a small cos(kz) perturbation, relative to before."""
    rho = DensityProfile.perturbed(amplitude, m)
    updated = canonical_update(rho, p, derive_params(p), kT)
    return updated.theta() / rho.theta()


def locate_threshold(p: PhysicalParams, kT: Optional[float] = None,
                     m: int = MEANFIELD_SETTINGS['grid_points'],
                     bracket=MEANFIELD_SETTINGS['bracket'],
                     xtol: float = MEANFIELD_SETTINGS['bisection_xtol']) -> float:
    """
    Bisection on eta for a unit growth factor of the canonical map around the uniform gas.
    """
    def excess(eta: float) -> float:
        return perturbation_growth_factor(p.replace(eta=eta), kT, m=m) - 1.0

    low, high = bracket
    if excess(low) >= 0 or excess(high) <= 0:
        raise ValueError(f"Bracket {bracket} does not enclose the mean-field threshold.")
    eta_c = optimize.bisect(excess, low, high, xtol=xtol)
    log.debug(f"Mean-field threshold located at eta = {eta_c:.6g} on a {m}-point grid")
    return float(eta_c)


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    prefactor: float
    stderr: float
    n_points: int


def critical_exponent_fit(deltas: Sequence[float], thetas: Sequence[float],
                          min_points: int = ANALYSIS_SETTINGS['min_fit_points']) -> ExponentFit:
    """Least-squares slope of log|theta| against log(delta)."""
    deltas = np.asarray(deltas, dtype=float)
    thetas = np.abs(np.asarray(thetas, dtype=float))
    valid = (deltas > 0) & (thetas > 0) & np.isfinite(deltas) & np.isfinite(thetas)
    if np.count_nonzero(valid) < min_points:
        raise ValueError(f"Critical exponent fit needs at least {min_points} positive points, "
                         f"got {int(np.count_nonzero(valid))}.")
    fit = stats.linregress(np.log(deltas[valid]), np.log(thetas[valid]))
    return ExponentFit(exponent=float(fit.slope), prefactor=float(np.exp(fit.intercept)),
                       stderr=float(fit.stderr), n_points=int(np.count_nonzero(valid)))


def order_parameter_near_threshold(p: PhysicalParams, eta_c: float, deltas: Sequence[float],
                                   kT: Optional[float] = None, m: int = MEANFIELD_SETTINGS['grid_points'],
                                   tol: float = 1e-13, max_iter: int = 500000) -> List[float]:
    """Converged theta at eta = eta_c (1 + delta) for each delta, seeded on the even branch."""
    thetas = []
    for delta in deltas:
        point = p.replace(eta=eta_c * (1.0 + delta))
        seed = DensityProfile.perturbed(min(0.5, 4.0 * math.sqrt(delta)), m)
        solution = solve_self_consistent(point, derive_params(point), kT, seed, max_iter=max_iter, tol=tol)
        if not solution.converged:
            log.warning(f"theta at delta={delta:.3g} did not converge within {max_iter} iterations")
        thetas.append(solution.profile.theta())
    return thetas


@dataclass(frozen=True)
class PumpPowerThreshold:
    internal: float         # hbar gamma^2 k^2
    si_w_per_m2: float


def pump_power_threshold(p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None,
                         density: Optional[float] = None, units: UnitSystem = UnitSystem()) -> PumpPowerThreshold:
    """
    P_in > kT (delta_A / gamma)^2 kappa 4 k^3 / (3 N/V), with N/V in atoms per (1/k)^3.
    """
    kT = p.kT if kT is None else kT
    if density is None or density <= 0:
        raise ValueError(f"Atomic density must be positive, got {density}.")
    value = kT * (p.delta_a / p.gamma) ** 2 * p.kappa * 4.0 / (3.0 * density)
    return PumpPowerThreshold(internal=value, si_w_per_m2=units.power_density_to_si(value))


def density_from_mode_volume(n_atoms: int, mode_volume_m3: float, units: UnitSystem = UnitSystem()) -> float:
    if mode_volume_m3 <= 0:
        raise ValueError(f"Mode volume must be positive, got {mode_volume_m3}.")
    return units.number_density_from_si(n_atoms / mode_volume_m3)


@dataclass(frozen=True)
class PrefactorAdjudication:
    """Located threshold compared with the closed form and with a reference value."""
    located: float
    closed_form: float
    quoted: float
    ratio_to_closed_form: float
    ratio_to_quoted: float
    supported_prefactor: str    # 'sqrt2' when the closed form matches better, '2' when the reference value does

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def adjudicate_prefactor(located: float, p: PhysicalParams, d: DerivedParams, kT: Optional[float] = None,
                         quoted: float = MEANFIELD_SETTINGS['quoted_eta_star']) -> PrefactorAdjudication:
    closed_form = critical_pump_strength(p, d, kT)
    ratio_closed = located / closed_form
    ratio_quoted = located / quoted
    supported = 'sqrt2' if abs(math.log(ratio_closed)) <= abs(math.log(ratio_quoted)) else '2'
    log.info(f"Located threshold {located:.4g} vs closed form {closed_form:.4g} and quoted {quoted:.4g}: "
             f"supports the {supported} prefactor")
    return PrefactorAdjudication(located, closed_form, quoted, ratio_closed, ratio_quoted, supported)


class ConvergencePoint(NamedTuple):
    eta: float
    iterations: int
    converged: bool
    theta: float


def convergence_scan(p: PhysicalParams, etas: Sequence[float], kT: Optional[float] = None,
                     m: int = MEANFIELD_SETTINGS['grid_points'], max_iter: int = 20000,
                     tol: float = MEANFIELD_SETTINGS['tol']) -> List[ConvergencePoint]:
    """Iterations needed from the seeded profile at each pump strength; they pile up at the threshold."""
    points = []
    for eta in etas:
        point = p.replace(eta=float(eta))
        solution = solve_self_consistent(point, derive_params(point), kT, DensityProfile.perturbed(m=m),
                                         max_iter=max_iter, tol=tol)
        points.append(ConvergencePoint(float(eta), solution.iterations, solution.converged,
                                       solution.profile.theta()))
    return points


class OddSiteScanPoint(NamedTuple):
    eta: float
    odd_fraction_short: float
    odd_fraction_long: float


def odd_site_scan(p: PhysicalParams, etas: Sequence[float], kT: Optional[float] = None,
                  short: int = 10, long: int = 100, seed_amplitude: float = -MEANFIELD_SETTINGS['seed_amplitude'],
                  m: int = MEANFIELD_SETTINGS['grid_points']) -> List[OddSiteScanPoint]:
    """
    Weight near the odd sites after ``short`` and ``long`` canonical iterations, starting from a
    profile that leans towards the odd sites.
    """
    if not 0 < short <= long:
        raise ValueError(f"Iteration counts must satisfy 0 < short <= long, got {short} and {long}.")
    rows = []
    for eta in etas:
        point = p.replace(eta=float(eta))
        derived = derive_params(point)
        rho = DensityProfile.perturbed(seed_amplitude, m)
        fraction_short = float('nan')
        for iteration in range(1, long + 1):
            rho = canonical_update(rho, point, derived, kT)
            if iteration == short:
                fraction_short = rho.odd_fraction()
        rows.append(OddSiteScanPoint(float(eta), fraction_short, rho.odd_fraction()))
    return rows
