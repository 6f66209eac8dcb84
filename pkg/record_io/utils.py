# record_io/utils.py

from pathlib import Path
from typing import List, Optional
from configs.io_config import SUPPORTED_EXTENSIONS


def validate_extension(file_path: str, supported_extensions: List[str]) -> bool:
    """
    Checks if the file extension is supported.
    """
    return Path(file_path).suffix.lower() in {ext.lower() for ext in supported_extensions}


def get_file_extension(file_path: str) -> str:
    return Path(file_path).suffix.lower()


def human_readable_size(size_in_bytes: float) -> str:
    if size_in_bytes < 1024:
        return f"{size_in_bytes:.0f} Bytes"
    elif size_in_bytes < 1024 ** 2:
        return f"{size_in_bytes / 1024:.2f} KB"
    elif size_in_bytes < 1024 ** 3:
        return f"{size_in_bytes / (1024 ** 2):.2f} MB"
    return f"{size_in_bytes / (1024 ** 3):.2f} GB"


def get_directory_size(directory_path: str) -> str:
    """Total size of the files below ``directory_path``, human readable."""
    total = sum(f.stat().st_size for f in Path(directory_path).rglob("*") if f.is_file())
    return human_readable_size(total)


def ensure_directory_exists(directory_path: str) -> None:
    Path(directory_path).mkdir(parents=True, exist_ok=True)


def resolve_kind_from_extension(file_path: str, operation: str = 'read') -> Optional[str]:
    """
    Resolves the artifact kind ('series', 'report', 'config') from the file extension.
    """
    if operation not in ('read', 'write'):
        raise ValueError(f"Operation '{operation}' is invalid. Use 'read' or 'write'.")
    ext = get_file_extension(file_path)
    for kind, ops in SUPPORTED_EXTENSIONS.items():
        if ext in [e.lower() for e in ops[operation]]:
            return kind
    return None


def list_artifacts(directory_path: str, kind: str, operation: str = 'read') -> List[str]:
    """
    Lists files of one artifact kind in a directory and its subdirectories, sorted by path.
    """
    if kind not in SUPPORTED_EXTENSIONS:
        raise ValueError(f"Artifact kind '{kind}' is not configured in SUPPORTED_EXTENSIONS.")
    directory = Path(directory_path)
    files = []
    for ext in SUPPORTED_EXTENSIONS[kind][operation]:
        files.extend(directory.rglob(f'*{ext}'))
    return sorted(str(f) for f in files if f.is_file())
