# harness/config_file.py
"""
Flat YAML configuration files and ``--set key=value`` overrides.

A config file is a single mapping whose keys are PhysicalParams fields, ``preset`` or experiment
keys; nested mappings and unknown keys are rejected.
"""

from io import StringIO
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from configs.experiment_config import EXPERIMENT_KEYS
from configs.io_config import SUPPORTED_EXTENSIONS
from configs.physics_config import PHYSICAL_KEYS
from logger.logger_manager import LoggerManager
from record_io.utils import validate_extension

log = LoggerManager.get_logger()

PRESET_KEY = 'preset'
ALLOWED_KEYS = frozenset(PHYSICAL_KEYS) | frozenset(EXPERIMENT_KEYS) | {PRESET_KEY}


def _yaml() -> YAML:
    return YAML(typ='safe', pure=True)


def validate_config(mapping: Dict[str, Any], source: str = 'config') -> Dict[str, Any]:
    if not isinstance(mapping, dict):
        raise ValueError(f"{source}: the config root must be a mapping, got {type(mapping).__name__}.")
    unknown = sorted(set(mapping) - ALLOWED_KEYS)
    if unknown:
        raise ValueError(f"{source}: unknown config keys {unknown}. Allowed: {sorted(ALLOWED_KEYS)}")
    nested = sorted(key for key, value in mapping.items() if isinstance(value, dict))
    if nested:
        raise ValueError(f"{source}: config must be flat, keys {nested} hold mappings.")
    return mapping


def load_config_file(path) -> Dict[str, Any]:
    """Reads a flat YAML config file. An empty file yields an empty mapping."""
    path = Path(path)
    if not validate_extension(str(path), SUPPORTED_EXTENSIONS['config']['read']):
        raise ValueError(f"Unsupported config file extension: {path}")
    try:
        with path.open('r', encoding='utf-8') as handle:
            data = _yaml().load(handle)
    except YAMLError as e:
        raise ValueError(f"{path}: invalid YAML: {e}") from e

    data = {} if data is None else data
    log.debug(f"Config loaded from {path}: {sorted(data) if isinstance(data, dict) else data}")
    return validate_config(data, str(path))


def parse_value(text: str) -> Any:
    """A single YAML scalar or flow sequence, e.g. '50', '1e-3', 'null', '[10, 20, 40]'."""
    try:
        return _yaml().load(StringIO(text))
    except YAMLError as e:
        raise ValueError(f"Cannot parse override value '{text}': {e}") from e


def parse_overrides(items: Optional[Sequence[str]]) -> Dict[str, Any]:
    overrides = {}
    for item in items or ():
        key, sep, raw = item.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ValueError(f"Invalid override '{item}'; expected key=value.")
        overrides[key] = parse_value(raw)
    return validate_config(overrides, 'overrides')


def merge_config(path=None, overrides: Optional[Sequence[str]] = None,
                 seed: Optional[int] = None) -> Dict[str, Any]:
    """Config file, then ``--set`` overrides, then ``--seed``."""
    config = load_config_file(path) if path is not None else {}
    config.update(parse_overrides(overrides))
    if seed is not None:
        config['master_seed'] = int(seed)
    return config


def dump_config(config: Dict[str, Any], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    yaml = _yaml()
    yaml.default_flow_style = None
    with path.open('w', encoding='utf-8') as handle:
        yaml.dump({key: list(value) if isinstance(value, tuple) else value for key, value in config.items()}, handle)
