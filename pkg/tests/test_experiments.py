import math

import numpy as np
import pandas as pd
import pytest

from harness.experiments import (SweepResult, hysteresis_experiment, meanfield_study, run_sweep,
                                 scaling_experiment, scaling_report_from_summary)
from harness.spec import ExperimentSpec
from physics.integrator import init_ensemble, make_rng, run_trajectory
from physics.params import PhysicalParams, derive_params


@pytest.fixture
def hysteresis_spec():
    return ExperimentSpec(base=PhysicalParams.preset('hysteresis'), sweep_axis='eta',
                          sweep_values=(10.0, 20.0, 30.0, 40.0), init_modes=('uniform', 'organized-even'),
                          duration=1.0)


def test_run_sweep_small():
    spec = ExperimentSpec(base=PhysicalParams.preset('organization', n_atoms=4), sweep_axis='eta',
                          sweep_values=(10.0, 50.0), ensemble=2, duration=0.1, record_every=20)
    result = run_sweep(spec)
    assert result.ok
    assert len(result.records) == 4
    assert list(result.summary['n_runs']) == [2, 2]


def test_single_run_sweep_matches_direct_trajectory():
    spec = ExperimentSpec(base=PhysicalParams.preset('organization', n_atoms=4), duration=0.1, record_every=10,
                          ensemble=1, master_seed=3)
    (record,) = run_sweep(spec).records

    (task,) = spec.tasks()
    init_spec = spec.init_spec(spec.init_modes[0])
    rng = make_rng(spec.master_seed, 0)
    init = init_ensemble(init_spec, spec.base, rng)
    direct = run_trajectory(init, spec.integrator_config(0), spec.base, derive_params(spec.base), rng=rng,
                            init_spec=init_spec)
    direct.index, direct.point = task.index, dict(task.point)
    assert record.same_run_as(direct)


def test_hysteresis_from_summary(hysteresis_spec):
    rows = []
    up = [0.5, 0.5, 0.1, 0.0]
    down = [0.5, 0.1, 0.0, 0.0]
    for eta, u, d in zip(hysteresis_spec.sweep_values, up, down):
        rows.append({'n_atoms': 50, 'g': 2.0, 'init_mode': 'uniform', 'eta': eta, 'mean_defect_ratio_2d': u})
        rows.append({'n_atoms': 50, 'g': 2.0, 'init_mode': 'organized-even', 'eta': eta, 'mean_defect_ratio_2d': d})
    result = SweepResult(hysteresis_spec, [], [], pd.DataFrame(rows))

    report = hysteresis_experiment(hysteresis_spec, result=result)
    (row,) = report.rows
    assert row['eta_up_obs'] == pytest.approx(26.25)
    assert row['eta_down_obs'] == pytest.approx(16.25)
    assert row['up_monotone'] and row['down_monotone']
    assert row['eta_down_pred'] == pytest.approx(0.5 * row['eta_star_pred'])
    assert report.to_frame().shape[0] == 1


def test_hysteresis_without_usable_runs(hysteresis_spec):
    report = hysteresis_experiment(hysteresis_spec, result=SweepResult(hysteresis_spec, [], [], pd.DataFrame()))
    assert report.rows == []


def test_hysteresis_needs_both_starts():
    spec = ExperimentSpec(base=PhysicalParams.preset('hysteresis'), sweep_axis='eta', sweep_values=(10.0,),
                          duration=1.0)
    with pytest.raises(ValueError):
        hysteresis_experiment(spec)
    spec = ExperimentSpec(base=PhysicalParams.preset('hysteresis'), sweep_axis='kappa', sweep_values=(0.5,),
                          init_modes=('uniform', 'organized-even'), duration=1.0)
    with pytest.raises(ValueError):
        hysteresis_experiment(spec)


def test_scaling_report_from_summary():
    base = PhysicalParams.preset('scaling')
    n = np.array([100, 200, 400, 800])
    summary = pd.DataFrame({'n_atoms': n, 'mean_photon_number': 0.08 * n ** 2.0,
                            'mean_loc_z': 0.1 / np.sqrt(n)})
    report = scaling_report_from_summary(summary, base, duration=100.0, constraint='ng4')
    assert report.photon_fit['slope'] == pytest.approx(2.0)
    assert report.localization_fit['slope'] == pytest.approx(-0.5)
    assert report.superradiance_prefactor == pytest.approx(0.08)
    assert all(math.isfinite(entry['loc_z_pred']) for entry in report.per_n)
    assert math.isnan(report.per_n[0]['defect_count_2d'])
    assert report.fit_errors == {}


def test_scaling_report_rejects_repeated_atom_numbers():
    summary = pd.DataFrame({'n_atoms': [100, 100], 'mean_photon_number': [1.0, 2.0]})
    with pytest.raises(ValueError):
        scaling_report_from_summary(summary, PhysicalParams.preset('scaling'), 1.0)


def test_scaling_report_of_empty_summary():
    report = scaling_report_from_summary(pd.DataFrame(), PhysicalParams.preset('scaling'), 1.0)
    assert 'summary' in report.fit_errors
    assert report.photon_fit is None


def test_scaling_experiment_needs_four_atom_numbers():
    spec = ExperimentSpec(base=PhysicalParams.preset('scaling'), n_values=(100, 200, 400), constraint='ng4',
                          duration=1.0)
    with pytest.raises(ValueError):
        scaling_experiment(spec)


def test_meanfield_study_small_grid():
    p = PhysicalParams.preset('bistability')
    study = meanfield_study(p, etas=[15.0, 30.0, 50.0], m=64)
    assert study.threshold == pytest.approx(25.71, abs=0.02)
    assert study.grid_shift < 1e-6
    assert study.adjudication['supported_prefactor'] == 'sqrt2'
    assert list(study.convergence['eta']) == [15.0, 30.0, 50.0]
    assert list(study.odd_sites.columns) == ['eta', 'odd_fraction_short', 'odd_fraction_long']
    assert study.profile.shape == (64, 2)
    assert study.profile['rho'].min() >= 0
    assert study.exponent is None
    assert set(study.report()) >= {'threshold', 'threshold_exact', 'adjudication', 'exponent'}


# One millisecond, a fifth of the production duration.
REDUCED_DURATION = 20000.0


@pytest.mark.extended
def test_hysteresis_gap_grows_with_atom_number():
    spec = ExperimentSpec(base=PhysicalParams.preset('hysteresis'), sweep_axis='eta',
                          sweep_values=tuple(np.arange(5.0, 125.0, 5.0)), n_values=(50, 200), constraint='ng2',
                          init_modes=('uniform', 'organized-even'), ensemble=10, duration=2000.0)
    report = hysteresis_experiment(spec)
    rows = {row['n_atoms']: row for row in report.rows}
    assert sorted(rows) == [50, 200]
    for row in rows.values():
        assert row['eta_down_obs'] < row['eta_up_obs']
        assert 0.4 * row['eta_star_pred'] <= row['eta_down_obs'] <= row['eta_star_pred']
    gaps = [rows[n]['eta_up_obs'] - rows[n]['eta_down_obs'] for n in (50, 200)]
    assert gaps[1] > gaps[0]


@pytest.mark.extended
def test_photon_number_grows_quadratically_with_atoms():
    spec = ExperimentSpec(base=PhysicalParams.preset('organization'), n_values=(20, 40, 80, 160),
                          init_modes=('uniform',), ensemble=10, duration=REDUCED_DURATION)
    report = scaling_experiment(spec)
    assert report.photon_fit['slope'] == pytest.approx(2.0, abs=0.3)
    assert 0.04 <= report.superradiance_prefactor <= 0.16


@pytest.mark.extended
def test_stable_defects_appear_above_threshold_atom_number():
    spec = ExperimentSpec(base=PhysicalParams.preset('organization'), n_values=(50, 100, 200),
                          init_modes=('uniform',), ensemble=10, duration=REDUCED_DURATION)
    summary = run_sweep(spec).summary.set_index('n_atoms')
    counts = summary['mean_defect_count_2d']
    assert counts[50] <= 1.0
    assert counts[100] > counts[50]
    assert counts[200] > counts[50]


@pytest.mark.extended
def test_localization_shrinks_inversely_with_atom_number():
    base = PhysicalParams.preset('localization')
    spec = ExperimentSpec(base=base, n_values=(25, 50, 100), init_modes=('organized-even',), ensemble=10,
                          duration=REDUCED_DURATION)
    report = scaling_report_from_summary(run_sweep(spec).summary, base, spec.duration)
    assert report.localization_fit['slope'] == pytest.approx(-1.0, abs=0.4)
    for entry in report.per_n:
        ratio = entry['loc_z_pred'] / entry['loc_z']
        assert 1.0 / 3.0 <= ratio <= 3.0
