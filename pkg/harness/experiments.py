# harness/experiments.py
"""
Experiment drivers on top of the ensemble runner: plain sweeps, up/down hysteresis scans, atom
number scaling studies and the mean-field threshold study.
"""

import math
import warnings
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from configs.experiment_config import MEANFIELD_SETTINGS
from harness.fitting import LogLogFit, loglog_fit, locate_crossing, quadratic_prefactor
from harness.runner import aggregate, run_tasks
from harness.spec import UP_MODE, ExperimentSpec, constrained_coupling
from logger.logger_manager import LoggerManager
from physics import analytics, meanfield
from physics.exceptions import RegimeWarning
from physics.params import PhysicalParams, derive_params
from physics.records import RunRecord, RunFailure

log = LoggerManager.get_logger()


@dataclass
class SweepResult:
    spec: ExperimentSpec
    records: List[RunRecord]
    failures: List[RunFailure]
    summary: pd.DataFrame

    @property
    def ok(self) -> bool:
        return not self.failures


def run_sweep(spec: ExperimentSpec, workers: Optional[int] = None, progress: bool = False) -> SweepResult:
    """Every grid point times the ensemble; per-point means and standard errors in ``summary``."""
    tasks = spec.tasks()
    log.info(f"Sweep: {len(spec.grid())} grid points x {spec.ensemble} runs, duration {spec.duration:g}")
    records, failures = run_tasks(tasks, workers=workers, progress=progress)
    return SweepResult(spec, records, failures, aggregate(records, failures))


def _predictions(p: PhysicalParams) -> Dict[str, float]:
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', RegimeWarning)
        d = derive_params(p)
        return {
            'eta_star': meanfield.critical_pump_strength(p, d),
            'eta_up': analytics.up_threshold(p, d),
            'eta_down': analytics.down_threshold(p, d),
        }


@dataclass
class HysteresisReport:
    level: float
    classifier: str
    duration: float
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)


def hysteresis_experiment(spec: ExperimentSpec, workers: Optional[int] = None, progress: bool = False,
                          result: Optional[SweepResult] = None) -> HysteresisReport:
    """
    Observed transition pump strengths from uniform ('up') and organized ('down') starts, per atom
    number, next to the closed-form predictions. A transition is the first pump strength at which
    the ensemble-mean defect ratio drops through ``spec.transition_threshold``.
    """
    spec.validate_for('hysteresis')
    down_mode = next(mode for mode in spec.init_modes if mode != UP_MODE)

    result = run_sweep(spec, workers, progress) if result is None else result
    summary = result.summary
    column = f'mean_{spec.defect_column}'
    report = HysteresisReport(level=spec.transition_threshold, classifier=spec.classifier, duration=spec.duration)
    if summary.empty or column not in summary:
        log.warning("Hysteresis sweep produced no usable runs")
        return report

    for n_atoms in sorted(summary['n_atoms'].unique()):
        subset = summary[summary['n_atoms'] == n_atoms]
        row: Dict[str, Any] = {'n_atoms': int(n_atoms)}
        for label, mode in (('up', UP_MODE), ('down', down_mode)):
            curve = subset[subset['init_mode'] == mode]
            crossing = locate_crossing(curve['eta'], curve[column], spec.transition_threshold)
            row[f'eta_{label}_obs'] = crossing.x
            row[f'{label}_monotone'] = crossing.monotone
        params = spec.params_at(int(n_atoms) if spec.n_values else None)
        predicted = _predictions(params)
        row.update({'g': params.g, **{f'{k}_pred': v for k, v in predicted.items()}})
        report.rows.append(row)
        log.info(f"N={int(n_atoms)}: eta_up_obs={row['eta_up_obs']:.4g}, eta_down_obs={row['eta_down_obs']:.4g} "
                 f"(eta*={predicted['eta_star']:.4g}, eta_up={predicted['eta_up']:.4g})")
    return report


@dataclass
class ScalingReport:
    duration: float
    per_n: List[Dict[str, Any]] = field(default_factory=list)
    photon_fit: Optional[Dict[str, Any]] = None
    localization_fit: Optional[Dict[str, Any]] = None
    superradiance_prefactor: Optional[float] = None
    fit_errors: Dict[str, str] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.per_n)


def _try_fit(report: ScalingReport, name: str, x, y) -> Optional[LogLogFit]:
    try:
        return loglog_fit(x, y)
    except ValueError as e:
        report.fit_errors[name] = str(e)
        log.warning(f"{name} fit failed: {e}")
        return None


def scaling_report_from_summary(summary: pd.DataFrame, base: PhysicalParams, duration: float,
                                constraint: Optional[str] = None) -> ScalingReport:
    """Per-N final means, log-log fits of |alpha|^2 and D_z against N and the cloud-size prediction."""
    report = ScalingReport(duration=duration)
    if summary.empty or 'n_atoms' not in summary:
        report.fit_errors['summary'] = "no usable runs"
        return report
    if summary['n_atoms'].duplicated().any():
        raise ValueError("Scaling analysis expects exactly one grid point per atom number.")

    summary = summary.sort_values('n_atoms')
    for _, row in summary.iterrows():
        n_atoms = int(row['n_atoms'])
        params = base.replace(n_atoms=n_atoms, g=constrained_coupling(base, n_atoms, constraint))
        entry = {'n_atoms': n_atoms}
        for name in ('photon_number', 'defect_count_2d', 'defect_ratio_2d', 'psv_z', 'loc_z', 'alpha_abs'):
            entry[name] = float(row.get(f'mean_{name}', math.nan))
            entry[f'{name}_sem'] = float(row.get(f'sem_{name}', math.nan))
        alpha_abs = math.sqrt(entry['photon_number']) if entry['photon_number'] > 0 else 0.0
        if alpha_abs > 0 and params.g > 0:
            entry['loc_z_pred'] = analytics.cloud_size(params, derive_params(params), alpha_abs).predicted_localization
        else:
            entry['loc_z_pred'] = math.nan
        report.per_n.append(entry)

    n = [e['n_atoms'] for e in report.per_n]
    photon_fit = _try_fit(report, 'photon_number', n, [e['photon_number'] for e in report.per_n])
    loc_fit = _try_fit(report, 'localization', n, [e['loc_z'] for e in report.per_n])
    report.photon_fit = photon_fit.as_dict() if photon_fit else None
    report.localization_fit = loc_fit.as_dict() if loc_fit else None
    try:
        report.superradiance_prefactor = quadratic_prefactor(n, [e['photon_number'] for e in report.per_n])
    except ValueError as e:
        report.fit_errors['superradiance_prefactor'] = str(e)
    return report


def scaling_experiment(spec: ExperimentSpec, workers: Optional[int] = None, progress: bool = False,
                       result: Optional[SweepResult] = None) -> ScalingReport:
    spec.validate_for('scaling')
    result = run_sweep(spec, workers, progress) if result is None else result
    report = scaling_report_from_summary(result.summary, spec.base, spec.duration, spec.constraint)
    if report.photon_fit:
        log.info(f"|alpha|^2 ~ N^{report.photon_fit['slope']:.3f} (+/- {report.photon_fit['slope_stderr']:.2g}), "
                 f"c = {report.superradiance_prefactor:.3g}")
    return report


@dataclass
class MeanFieldStudy:
    threshold: float
    threshold_refined: float
    grid_points: int
    grid_shift: float
    threshold_exact: float
    adjudication: Dict[str, Any]
    peak_iterations_eta: float
    profile: pd.DataFrame
    theta_history: pd.DataFrame
    convergence: pd.DataFrame
    odd_sites: pd.DataFrame
    exponent: Optional[Dict[str, Any]] = None

    def report(self) -> Dict[str, Any]:
        return {
            'threshold': self.threshold,
            'threshold_refined': self.threshold_refined,
            'grid_points': self.grid_points,
            'grid_shift': self.grid_shift,
            'threshold_exact': self.threshold_exact,
            'adjudication': self.adjudication,
            'peak_iterations_eta': self.peak_iterations_eta,
            'exponent': self.exponent,
        }


def meanfield_study(p: PhysicalParams, etas: Optional[Sequence[float]] = None,
                    m: int = MEANFIELD_SETTINGS['grid_points'], profile_eta: Optional[float] = None,
                    exponent_deltas: Optional[Sequence[float]] = None) -> MeanFieldStudy:
    """
    Locates the mean-field threshold on M and 2M grid points, adjudicates the closed-form prefactor,
    scans convergence speed and odd-site weight over ``etas`` and optionally fits the critical
    exponent over ``exponent_deltas``.
    """
    d = derive_params(p)
    threshold = meanfield.locate_threshold(p, m=m)
    refined = meanfield.locate_threshold(p, m=2 * m)
    shift = abs(refined - threshold) / threshold
    exact = meanfield.instability_threshold_exact(p, d)
    adjudication = meanfield.adjudicate_prefactor(threshold, p, d).as_dict()

    etas = np.linspace(0.5 * threshold, 2.0 * threshold, 31) if etas is None else np.asarray(etas, dtype=float)
    convergence = pd.DataFrame([c._asdict() for c in meanfield.convergence_scan(p, etas, m=m)])
    peak_eta = float(convergence.loc[convergence['iterations'].idxmax(), 'eta'])
    odd_sites = pd.DataFrame([o._asdict() for o in meanfield.odd_site_scan(p, etas, m=m)])

    profile_eta = 2.0 * threshold if profile_eta is None else profile_eta
    point = p.replace(eta=profile_eta)
    solution = meanfield.solve_self_consistent(point, derive_params(point), init=meanfield.DensityProfile.perturbed(m=m))
    profile = pd.DataFrame({'kz': solution.profile.grid, 'rho': solution.profile.values})
    history = pd.DataFrame({'iteration': np.arange(len(solution.theta_history)), 'theta': solution.theta_history})

    exponent = None
    if exponent_deltas is not None:
        thetas = meanfield.order_parameter_near_threshold(p, threshold, exponent_deltas, m=m)
        exponent = asdict(meanfield.critical_exponent_fit(exponent_deltas, thetas))

    log.info(f"Mean-field threshold {threshold:.5g} (M={m}), {refined:.5g} (M={2 * m}); exact {exact:.5g}; "
             f"iterations peak at eta={peak_eta:.4g}")
    return MeanFieldStudy(threshold, refined, m, shift, exact, adjudication, peak_eta, profile, history,
                          convergence, odd_sites, exponent)
