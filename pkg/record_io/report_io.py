# record_io/report_io.py

import json
from pathlib import Path
from typing import Any, Dict

import numpy as np

from configs.io_config import SUPPORTED_EXTENSIONS, SCHEMA_VERSION
from logger.logger_manager import LoggerManager
from record_io.base_io import BaseIO, IORegistry
from record_io.utils import ensure_directory_exists

log = LoggerManager.get_logger()


def _to_builtin(value: Any) -> Any:
    """json fallback for numpy scalars, arrays and complex numbers."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (set, tuple)):
        return list(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class ReportIO(BaseIO):
    """
    JSON documents: run echoes, manifests and experiment reports. Every document carries
    ``schema_version``; non-finite floats use the NaN / Infinity tokens.
    """

    def __init__(self):
        self.supported_read_extensions = SUPPORTED_EXTENSIONS['report']['read']
        self.supported_write_extensions = SUPPORTED_EXTENSIONS['report']['write']

    def read(self, file_path: str) -> Dict[str, Any]:
        self.validate_or_raise_extension(file_path, self.supported_read_extensions)
        try:
            with open(file_path, 'r', encoding='utf-8') as handle:
                document = json.load(handle)
        except Exception as e:
            raise ValueError(f"Failed to read report file {file_path}: {e}") from e
        if not isinstance(document, dict):
            raise ValueError(f"Report file {file_path} does not hold a JSON object.")

        return {'data': document, 'schema_version': document.get('schema_version')}

    def write(self, data_bundle: Dict[str, Any], file_path: str) -> None:
        self.validate_or_raise_extension(file_path, self.supported_write_extensions)
        document = dict(self.require_data(data_bundle))
        document.setdefault('schema_version', data_bundle.get('schema_version', SCHEMA_VERSION))

        ensure_directory_exists(str(Path(file_path).parent))
        try:
            with open(file_path, 'w', encoding='utf-8') as handle:
                json.dump(document, handle, indent=2, default=_to_builtin)
        except Exception as e:
            raise ValueError(f"Failed to write report file {file_path}: {e}") from e

        log.debug(f"Report saved: {file_path}")


IORegistry.register_reader('report', ReportIO)
IORegistry.register_writer('report', ReportIO)
