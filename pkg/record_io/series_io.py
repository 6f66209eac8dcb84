# record_io/series_io.py

from pathlib import Path
from typing import Any, Dict

import pandas as pd

from configs.io_config import SUPPORTED_EXTENSIONS
from logger.logger_manager import LoggerManager
from record_io.base_io import BaseIO, IORegistry
from record_io.utils import ensure_directory_exists

log = LoggerManager.get_logger()


class SeriesIO(BaseIO):
    """
    CSV tables: observable time series (fixed column order) and aggregated summaries. Floats are
    read back with round-trip precision so that write followed by read is lossless.
    """

    def __init__(self):
        self.supported_read_extensions = SUPPORTED_EXTENSIONS['series']['read']
        self.supported_write_extensions = SUPPORTED_EXTENSIONS['series']['write']

    def read(self, file_path: str) -> Dict[str, Any]:
        self.validate_or_raise_extension(file_path, self.supported_read_extensions)
        try:
            frame = pd.read_csv(file_path, float_precision='round_trip')
        except pd.errors.EmptyDataError:
            frame = pd.DataFrame()
        except Exception as e:
            raise ValueError(f"Failed to read series file {file_path}: {e}") from e

        log.debug(f"Series read: {file_path} | Shape: {frame.shape}")
        return {'data': frame, 'columns': list(frame.columns), 'schema_version': None}

    def write(self, data_bundle: Dict[str, Any], file_path: str) -> None:
        self.validate_or_raise_extension(file_path, self.supported_write_extensions)
        frame = self.require_data(data_bundle)
        if not isinstance(frame, pd.DataFrame):
            raise ValueError("Series data must be a pandas DataFrame.")

        columns = data_bundle.get('columns')
        if columns is not None:
            missing = [c for c in columns if c not in frame.columns]
            if missing:
                raise ValueError(f"Series is missing columns {missing}.")
            frame = frame[list(columns)]

        ensure_directory_exists(str(Path(file_path).parent))
        try:
            frame.to_csv(file_path, index=False)
        except Exception as e:
            raise ValueError(f"Failed to write series file {file_path}: {e}") from e

        log.debug(f"Series saved: {file_path} | Shape: {frame.shape}")


IORegistry.register_reader('series', SeriesIO)
IORegistry.register_writer('series', SeriesIO)
