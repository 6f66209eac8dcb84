import json

import pandas as pd
import pytest

from harness import experiments
from harness.cli import EXIT_INVALID, EXIT_OK, main
from logger.logger_manager import LoggerManager


@pytest.fixture(autouse=True)
def restore_test_logger():
    yield
    LoggerManager.shutdown_logger()
    LoggerManager.initialize_logger(experiment_name='tests', mode='test', stream_only=True)


def run(*argv):
    return main([*argv, '--log-mode', 'test'])


def test_thresholds(tmp_path):
    assert run('thresholds', '--set', 'preset=scaling', '--out', str(tmp_path)) == EXIT_OK
    report = json.loads((tmp_path / 'thresholds.json').read_text())
    assert report['eta_up'] == pytest.approx(83.3, abs=0.05)
    assert report['params']['n_atoms'] == 800
    assert (tmp_path / 'config.yaml').is_file()


def test_invalid_key_exits_with_usage_error(tmp_path):
    assert run('thresholds', '--set', 'pump=3', '--out', str(tmp_path)) == EXIT_INVALID


def test_missing_config_file(tmp_path):
    assert run('thresholds', '--config', str(tmp_path / 'nope.yaml'), '--out', str(tmp_path)) == EXIT_INVALID


def test_simulate_then_analyze(tmp_path):
    config = tmp_path / 'cfg.yaml'
    config.write_text("preset: organization\nn_atoms: 4\nduration: 0.1\nrecord_every: 10\n")
    out = tmp_path / 'sim'
    assert run('simulate', '--config', str(config), '--seed', '7', '--out', str(out)) == EXIT_OK
    manifest = json.loads((out / 'manifest.json').read_text())
    assert [entry['stem'] for entry in manifest['runs']] == ['run_00000']
    series = pd.read_csv(out / 'runs' / 'run_00000.csv')
    assert series['t'].iloc[0] == 0.0
    run_doc = json.loads((out / 'runs' / 'run_00000.json').read_text())
    assert run_doc['seed'] == 7

    analyzed = tmp_path / 'analyzed'
    assert run('analyze', str(out), '--out', str(analyzed)) == EXIT_OK
    summary = pd.read_csv(analyzed / 'summary.csv')
    assert summary['n_runs'].tolist() == [1]


def test_sweep(tmp_path):
    out = tmp_path / 'sweep'
    argv = ['sweep', '--set', 'preset=organization', '--set', 'n_atoms=4', '--set', 'duration=0.1',
            '--set', 'sweep_axis=eta', '--set', 'sweep_values=[10, 50]', '--set', 'ensemble=2', '--out', str(out)]
    assert run(*argv) == EXIT_OK
    assert len(list((out / 'runs').glob('*.json'))) == 4
    spec = json.loads((out / 'spec.json').read_text())
    assert spec['sweep_values'] == [10.0, 50.0]


def test_meanfield(tmp_path):
    assert run('meanfield', '--set', 'preset=bistability', '--grid-points', '32', '--out', str(tmp_path)) == EXIT_OK
    report = json.loads((tmp_path / 'meanfield.json').read_text())
    assert report['threshold'] == pytest.approx(25.71, abs=0.02)
    assert (tmp_path / 'convergence.csv').is_file()


def test_scaling_sweep_fails_before_running(tmp_path, monkeypatch):
    calls = []
    monkeypatch.setattr(experiments, 'run_sweep', lambda *args, **kwargs: calls.append(args))
    out = tmp_path / 'scaling'
    argv = ['sweep', '--kind', 'scaling', '--set', 'preset=organization', '--set', 'n_values=[4, 8]',
            '--set', 'constraint=ng2', '--set', 'duration=0.1', '--out', str(out)]
    assert run(*argv) == EXIT_INVALID
    assert calls == []
    assert not (out / 'runs').exists()


def test_hysteresis_sweep_needs_both_starts(tmp_path, monkeypatch):
    calls = []
    monkeypatch.setattr(experiments, 'run_sweep', lambda *args, **kwargs: calls.append(args))
    argv = ['sweep', '--kind', 'hysteresis', '--set', 'preset=hysteresis', '--set', 'sweep_axis=eta',
            '--set', 'sweep_values=[10, 20]', '--set', 'duration=0.1', '--out', str(tmp_path)]
    assert run(*argv) == EXIT_INVALID
    assert calls == []
