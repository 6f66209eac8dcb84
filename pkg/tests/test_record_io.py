import json

import pandas as pd
import pytest

from configs.io_config import SCHEMA_VERSION, SERIES_COLUMNS
from harness.runner import execute_task
from harness.spec import ExperimentSpec
from physics.params import PhysicalParams
from physics.records import RunFailure
from record_io.base_io import SchemaVersionError
from record_io.facade import RecordIO
from record_io.utils import human_readable_size, list_artifacts, resolve_kind_from_extension


@pytest.fixture
def records():
    spec = ExperimentSpec(base=PhysicalParams.preset('organization', n_atoms=6), duration=0.1, ensemble=2,
                          record_every=10, sweep_axis='eta', sweep_values=(40.0,))
    return [execute_task(task) for task in spec.tasks()]


def test_persist_then_load_reproduces_runs(records, tmp_path):
    io = RecordIO()
    failure = RunFailure(index=2, point={'n_atoms': 6, 'eta': 40.0}, seed=1, stream=2, error="IntegrationError: boom",
                         t=0.05)
    summary = pd.DataFrame({'eta': [40.0], 'n_runs': [2]})
    io.persist(records, tmp_path, failures=[failure], summary=summary, reports={'spec': {'ensemble': 2}})

    loaded = io.load(tmp_path)
    assert len(loaded.records) == len(records)
    for original, restored in zip(records, loaded.records):
        assert restored.same_run_as(original, include_metadata=True)
    assert loaded.failures == [failure]
    assert loaded.reports['spec']['ensemble'] == 2
    pd.testing.assert_frame_equal(loaded.summary, summary)
    assert loaded.manifest['schema_version'] == SCHEMA_VERSION


def test_series_keep_fixed_column_order(records, tmp_path):
    io = RecordIO()
    io.persist(records, tmp_path)
    series = io.read(tmp_path / 'runs' / 'run_00000.csv')['data']
    assert list(series.columns) == SERIES_COLUMNS
    assert series['t'].iloc[0] == 0.0


def test_empty_run_set(tmp_path):
    io = RecordIO()
    io.persist([], tmp_path)
    loaded = io.load(tmp_path)
    assert loaded.records == []
    assert loaded.failures == []
    assert loaded.summary.empty


def test_schema_mismatch_is_rejected(records, tmp_path):
    io = RecordIO()
    io.persist(records, tmp_path)
    run_file = tmp_path / 'runs' / 'run_00001.json'
    document = json.loads(run_file.read_text())
    document['schema_version'] = SCHEMA_VERSION + 1
    run_file.write_text(json.dumps(document))
    with pytest.raises(SchemaVersionError) as excinfo:
        io.load(tmp_path)
    assert excinfo.value.found == SCHEMA_VERSION + 1


def test_missing_manifest(tmp_path):
    with pytest.raises(FileNotFoundError):
        RecordIO().load(tmp_path)


def test_unsupported_extension(tmp_path):
    io = RecordIO()
    with pytest.raises(ValueError):
        io.read(tmp_path / 'run.h5')
    with pytest.raises(ValueError):
        io.write('series', {'data': pd.DataFrame()}, tmp_path / 'run.json')
    with pytest.raises(ValueError):
        io.write('report', {'data': None}, tmp_path / 'run.json')


@pytest.mark.parametrize('kind, name', [('series', 'run.json'), ('report', 'run.csv')])
def test_writers_reject_extensions_alike(tmp_path, kind, name):
    with pytest.raises(ValueError, match='Unsupported file extension'):
        RecordIO().write(kind, {'data': pd.DataFrame()}, tmp_path / name)
    assert not (tmp_path / name).exists()


def test_artifact_helpers(records, tmp_path):
    RecordIO().persist(records, tmp_path)
    assert resolve_kind_from_extension('a/b.CSV') == 'series'
    assert resolve_kind_from_extension('a/b.yml') == 'config'
    assert resolve_kind_from_extension('a/b.txt') is None
    assert len(list_artifacts(str(tmp_path), 'report')) == 3     # two runs and the manifest
    assert human_readable_size(2048) == "2.00 KB"
