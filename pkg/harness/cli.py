# harness/cli.py
"""
Command line entry point:

    python -m harness simulate   --config cfg.yaml [--set eta=60] [--seed 7] [--out DIR]
    python -m harness sweep      --config cfg.yaml --kind sweep|hysteresis|scaling [--workers 4]
    python -m harness meanfield  --config cfg.yaml [--exponent]
    python -m harness thresholds --config cfg.yaml
    python -m harness analyze    DIR

Exit code 0 only when every run completed.
"""

import argparse
import math
from pathlib import Path
from typing import List, Optional

import numpy as np

from configs.experiment_config import HARNESS_SETTINGS, MEANFIELD_SETTINGS
from configs.physics_config import PHYSICAL_KEYS
from harness import experiments
from harness.config_file import merge_config, dump_config, PRESET_KEY
from harness.runner import aggregate
from harness.spec import ExperimentSpec
from logger.logger_config import LOGGER_SETTINGS
from logger.logger_manager import LoggerManager
from physics.analytics import threshold_report
from physics.params import PhysicalParams, UnitSystem, derive_params
from record_io.facade import RecordIO
from utils.path_manager import get_output_path

EXIT_OK = 0
EXIT_RUN_FAILURES = 1
EXIT_INVALID = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='harness', description="Cavity self-organization simulator and analysis")
    subparsers = parser.add_subparsers(dest='verb', required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help="Flat YAML config file")
    common.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help="Override a config key (repeatable)")
    common.add_argument('--seed', type=int, help="Master seed")
    common.add_argument('--out', help="Output directory (default outputs/<verb>)")
    common.add_argument('--workers', type=int,
                        help=f"Worker processes (default ${HARNESS_SETTINGS['workers_env_var']} or 1)")
    common.add_argument('--log-mode', default='experiment', choices=sorted(LOGGER_SETTINGS['available_modes']))
    common.add_argument('--progress', action='store_true', help="Show a progress bar")

    subparsers.add_parser('simulate', parents=[common], help="One trajectory")
    sweep = subparsers.add_parser('sweep', parents=[common], help="Ensemble sweep")
    sweep.add_argument('--kind', default='sweep', choices=HARNESS_SETTINGS['sweep_kinds'])
    meanfield = subparsers.add_parser('meanfield', parents=[common], help="Mean-field threshold study")
    meanfield.add_argument('--grid-points', type=int, default=None)
    meanfield.add_argument('--exponent', action='store_true', help="Also fit the critical exponent")
    subparsers.add_parser('thresholds', parents=[common], help="Closed-form threshold report")
    analyze = subparsers.add_parser('analyze', parents=[common], help="Re-aggregate a persisted run directory")
    analyze.add_argument('directory', type=Path)
    return parser


def _physical_params(config) -> PhysicalParams:
    physical = {key: value for key, value in config.items() if key in PHYSICAL_KEYS}
    return PhysicalParams.from_mapping(physical, preset=config.get(PRESET_KEY))


def _simulate(args, config, out: Path, io: RecordIO, log) -> int:
    spec = ExperimentSpec.from_config({**config, 'ensemble': 1, 'sweep_axis': None, 'sweep_values': None,
                                       'n_values': None, 'constraint': None, 'init_modes': None})
    result = experiments.run_sweep(spec, workers=1, progress=args.progress)
    io.persist(result.records, out, result.failures, result.summary)
    if result.records:
        final = result.records[0].final_sample
        log.info(f"Final |alpha|^2 = {final['photon_number']:.4g}, theta = {final['theta']:.4g}, "
                 f"2D defect ratio = {final['defect_ratio_2d']:.3g} "
                 f"(t = {UnitSystem().to_microseconds(final['t']):.4g} us)")
    return EXIT_OK if result.ok else EXIT_RUN_FAILURES


def _sweep(args, config, out: Path, io: RecordIO, log) -> int:
    spec = ExperimentSpec.from_config(config)
    spec.validate_for(args.kind)
    result = experiments.run_sweep(spec, workers=args.workers, progress=args.progress)
    reports = {}
    if args.kind == 'hysteresis':
        reports['hysteresis'] = experiments.hysteresis_experiment(spec, result=result).as_dict()
    elif args.kind == 'scaling':
        reports['scaling'] = experiments.scaling_experiment(spec, result=result).as_dict()
    reports['spec'] = spec.to_dict()
    io.persist(result.records, out, result.failures, result.summary, reports)
    return EXIT_OK if result.ok else EXIT_RUN_FAILURES


def _meanfield(args, config, out: Path, io: RecordIO, log) -> int:
    p = _physical_params(config)
    m = args.grid_points or MEANFIELD_SETTINGS['grid_points']
    deltas = np.logspace(-3, -1, 9) if args.exponent else None
    study = experiments.meanfield_study(p, m=m, exponent_deltas=deltas)
    io.write('report', {'data': study.report()}, out / 'meanfield.json')
    for name in ('profile', 'theta_history', 'convergence', 'odd_sites'):
        io.write('series', {'data': getattr(study, name)}, out / f'{name}.csv')
    return EXIT_OK


def _thresholds(args, config, out: Path, io: RecordIO, log) -> int:
    p = _physical_params(config)
    report = threshold_report(p, derive_params(p))
    io.write('report', {'data': {'params': p.to_dict(), **report.as_dict()}}, out / 'thresholds.json')
    log.info(f"eta* = {report.eta_star:.4g}, eta_up = {report.eta_up:.4g}, eta_down = {report.eta_down:.4g}, "
             f"n_thr = {report.n_thr:.4g}")
    return EXIT_OK


def _analyze(args, config, out: Path, io: RecordIO, log) -> int:
    loaded = io.load(args.directory)
    summary = aggregate(loaded.records, loaded.failures)
    reports = {}
    if not summary.empty and summary['n_atoms'].nunique() > 1 and not summary['n_atoms'].duplicated().any():
        spec = loaded.reports.get('spec', {})
        base = PhysicalParams(**spec['base']) if 'base' in spec else loaded.records[0].params
        duration = spec.get('duration', math.nan)
        reports['scaling'] = experiments.scaling_report_from_summary(summary, base, duration,
                                                                     spec.get('constraint')).as_dict()
    io.write('series', {'data': summary}, out / 'summary.csv')
    for name, report in reports.items():
        io.write('report', {'data': report}, out / f'{name}.json')
    log.info(f"Analyzed {len(loaded.records)} runs from {args.directory}")
    return EXIT_OK if not loaded.failures else EXIT_RUN_FAILURES


VERBS = {
    'simulate': _simulate,
    'sweep': _sweep,
    'meanfield': _meanfield,
    'thresholds': _thresholds,
    'analyze': _analyze,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    LoggerManager.get_logger()
    log = LoggerManager.reinitialize_logger(experiment_name=args.verb, mode=args.log_mode, stream_only=False)

    try:
        config = merge_config(args.config, args.overrides, args.seed)
        out = get_output_path(args.verb, args.out)
        dump_config(config, out / 'config.yaml')
        return VERBS[args.verb](args, config, out, RecordIO(), log)
    except (ValueError, FileNotFoundError) as e:
        log.error(f"{args.verb}: {e}")
        return EXIT_INVALID
