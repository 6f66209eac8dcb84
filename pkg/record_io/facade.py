# record_io/facade.py

import importlib
import pkgutil
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Iterable, List, NamedTuple, Optional

import pandas as pd

from configs.io_config import OUTPUT_LAYOUT, SCHEMA_VERSION, SERIES_COLUMNS
from logger.logger_manager import LoggerManager
from physics.params import PhysicalParams
from physics.records import RunRecord, RunFailure, state_to_dict, state_from_dict
from record_io import __path__ as record_io_path
from record_io.base_io import IORegistry, SchemaVersionError
from record_io.utils import resolve_kind_from_extension, get_directory_size

log = LoggerManager.get_logger()

# Force dynamic loading of all artifact IO classes
__all__ = []

for loader, module_name, is_pkg in pkgutil.iter_modules(record_io_path):
    if module_name not in ['base_io', 'utils', 'facade']:
        importlib.import_module(f"record_io.{module_name}")
        __all__.append(module_name)


class LoadedRecords(NamedTuple):
    records: List[RunRecord]
    failures: List[RunFailure]
    summary: pd.DataFrame
    reports: Dict[str, Dict[str, Any]]
    manifest: Dict[str, Any]


class RecordIO:
    """
    Facade over the artifact readers and writers, plus the output-directory layout of an
    experiment: manifest.json, runs/run_<index>.csv|json, summary.csv and named JSON reports.
    """

    def __init__(self):
        pass

    def read(self, file_path: str) -> dict:
        kind = resolve_kind_from_extension(str(file_path), operation='read')
        if kind is None:
            raise ValueError(f"Unsupported file extension: {file_path}")

        reader_cls = IORegistry.get_reader(kind)
        if reader_cls is None:
            raise ValueError(f"No reader registered for artifact kind: {kind}")
        return reader_cls().read(str(file_path))

    def write(self, kind: str, data_bundle: dict, file_path: str) -> None:
        writer_cls = IORegistry.get_writer(kind)
        if writer_cls is None:
            raise ValueError(f"No writer registered for artifact kind: {kind}")
        writer_cls().write(data_bundle, str(file_path))

    def read_checked(self, file_path: str) -> Dict[str, Any]:
        """Reads a JSON document and rejects it unless it carries the current schema version."""
        bundle = self.read(file_path)
        if bundle['schema_version'] != SCHEMA_VERSION:
            raise SchemaVersionError(str(file_path), bundle['schema_version'], SCHEMA_VERSION)
        return bundle['data']

    # ---- Experiment layout -------------------------------------------------------------------

    def persist(self, records: Iterable[RunRecord], out_dir, failures: Iterable[RunFailure] = (),
                summary: Optional[pd.DataFrame] = None,
                reports: Optional[Dict[str, Dict[str, Any]]] = None) -> Path:
        out_dir = Path(out_dir)
        runs_dir = out_dir / OUTPUT_LAYOUT['runs_dir']
        records = list(records)
        failures = list(failures)
        reports = reports or {}

        run_entries = []
        for record in records:
            stem = OUTPUT_LAYOUT['run_stem'].format(index=record.index)
            self.write('series', {'data': record.series, 'columns': SERIES_COLUMNS}, runs_dir / f"{stem}.csv")
            self.write('report', {'data': self._run_document(record)}, runs_dir / f"{stem}.json")
            run_entries.append({'index': record.index, 'stem': stem})

        summary = pd.DataFrame() if summary is None else summary
        self.write('series', {'data': summary}, out_dir / OUTPUT_LAYOUT['summary'])
        for name, report in reports.items():
            self.write('report', {'data': report}, out_dir / f"{name}.json")

        manifest = {
            'schema_version': SCHEMA_VERSION,
            'runs': run_entries,
            'failures': [asdict(failure) for failure in failures],
            'reports': sorted(reports),
        }
        self.write('report', {'data': manifest}, out_dir / OUTPUT_LAYOUT['manifest'])

        log.info(f"Persisted {len(records)} runs ({len(failures)} failed) to {out_dir} | "
                 f"Size: {get_directory_size(str(out_dir))}")
        return out_dir

    def load(self, out_dir) -> LoadedRecords:
        out_dir = Path(out_dir)
        manifest_path = out_dir / OUTPUT_LAYOUT['manifest']
        if not manifest_path.is_file():
            raise FileNotFoundError(f"No manifest found in {out_dir}")
        manifest = self.read_checked(manifest_path)

        runs_dir = out_dir / OUTPUT_LAYOUT['runs_dir']
        records = []
        for entry in manifest['runs']:
            document = self.read_checked(runs_dir / f"{entry['stem']}.json")
            series = self.read(runs_dir / f"{entry['stem']}.csv")['data']
            records.append(self._run_from_document(document, series))

        summary = self.read(out_dir / OUTPUT_LAYOUT['summary'])['data']
        reports = {name: self.read_checked(out_dir / f"{name}.json") for name in manifest.get('reports', [])}
        failures = [RunFailure(**failure) for failure in manifest.get('failures', [])]

        log.info(f"Loaded {len(records)} runs ({len(failures)} failed) from {out_dir}")
        return LoadedRecords(records, failures, summary, reports, manifest)

    @staticmethod
    def _run_document(record: RunRecord) -> Dict[str, Any]:
        return {
            'schema_version': record.schema_version,
            'index': record.index,
            'point': record.point,
            'params': record.params.to_dict(),
            'integrator': record.integrator,
            'init': record.init,
            'seed': record.seed,
            'stream': record.stream,
            'final_state': state_to_dict(record.final_state),
            'final_summary': record.final_summary(),
            'metadata': record.metadata,
        }

    @staticmethod
    def _run_from_document(document: Dict[str, Any], series: pd.DataFrame) -> RunRecord:
        if series.empty and not len(series.columns):
            series = pd.DataFrame(columns=SERIES_COLUMNS)
        series = series[SERIES_COLUMNS].astype(float)
        return RunRecord(
            params=PhysicalParams(**document['params']),
            integrator=document['integrator'],
            init=document['init'],
            seed=document['seed'],
            stream=document['stream'],
            series=series,
            final_state=state_from_dict(document['final_state']),
            metadata=document['metadata'],
            index=document['index'],
            point=document['point'],
            schema_version=document['schema_version'],
        )
