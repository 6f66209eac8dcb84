# record_io/base_io.py

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Type


class IORegistry:
    """
    Global registry of artifact-specific IO classes.
    """
    readers: dict[str, Type['BaseIO']] = {}
    writers: dict[str, Type['BaseIO']] = {}

    @classmethod
    def register_reader(cls, kind: str, reader_cls: Type['BaseIO']) -> None:
        cls.readers[kind] = reader_cls

    @classmethod
    def register_writer(cls, kind: str, writer_cls: Type['BaseIO']) -> None:
        cls.writers[kind] = writer_cls

    @classmethod
    def get_reader(cls, kind: str) -> Type['BaseIO']:
        return cls.readers.get(kind)

    @classmethod
    def get_writer(cls, kind: str) -> Type['BaseIO']:
        return cls.writers.get(kind)


class BaseIO(ABC):
    """
    Abstract base class for artifact readers and writers. Every artifact travels as a bundle
    {'data': ..., 'schema_version': Optional[int]}.
    """

    @abstractmethod
    def read(self, file_path: str) -> Dict[str, Any]:
        """
        Reads one artifact.

        Args:
            file_path (str): Path to the file.

        Returns:
            dict: {'data': DataFrame or mapping, 'schema_version': Optional[int]}
        """
        pass

    @abstractmethod
    def write(self, data_bundle: Dict[str, Any], file_path: str) -> None:
        """
        Writes one artifact.

        Args:
            data_bundle (dict): Must contain 'data'.
            file_path (str): Path to the output file.
        """
        pass

    @staticmethod
    def validate_extension(file_ext: str, supported_extensions: List[str]) -> bool:
        if not file_ext:
            return False
        return file_ext.lower() in {ext.lower() for ext in supported_extensions}

    @staticmethod
    def validate_or_raise_extension(file_path: str, supported_extensions: List[str]) -> None:
        """
        Raises:
            ValueError: If the file extension is unsupported.
        """
        if not BaseIO.validate_extension(Path(file_path).suffix, supported_extensions):
            raise ValueError(f"Unsupported file extension: {file_path}")

    @staticmethod
    def require_data(data_bundle: Dict[str, Any]) -> Any:
        if 'data' not in data_bundle or data_bundle['data'] is None:
            raise ValueError("Data bundle must contain a 'data' key.")
        return data_bundle['data']


class SchemaVersionError(ValueError):
    """A persisted artifact was written with a different schema version."""

    def __init__(self, file_path: str, found: Any, expected: int):
        super().__init__(f"{file_path}: schema_version {found!r}, expected {expected}")
        self.file_path = file_path
        self.found = found
        self.expected = expected
