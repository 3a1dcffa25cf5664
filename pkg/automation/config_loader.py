#!/usr/bin/env python3
"""
📂 Config Loader - Run configuration and figure presets
Date: 03/09/2025
Description: Loads flat run configurations from YAML / JSON files and named
presets, merges them with command-line values and builds a RunConfig.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import yaml

from models.errors import ConfigError
from models.oscillation import InitialStates
from models.run_config import (
    Method,
    OutputFormat,
    RunConfig,
    ScanSpec,
    ScanVariable,
    UserParams,
)
from utils.logger import setup_logger
from utils.units import UnitsMode, parse_angle

DEFAULT_PRESETS_PATH = Path(__file__).resolve().parent.parent / "config" / "figure_presets.yaml"

ANGLE_KEYS = ('theta', 'phi', 'chi', 'tau', 'tau_p', 'alpha', 'beta')
FLOAT_PARAM_KEYS = ('dm2', 'energy', 'kappa', 'sigma', 'mbar2')
FLOAT_SCAN_KEYS = ('start', 'stop', 'baseline')
RANGE_KEYS = ('kappa_range', 'sigma_range')
META_KEYS = ('description',)
KNOWN_KEYS = frozenset(
    ANGLE_KEYS + FLOAT_PARAM_KEYS + FLOAT_SCAN_KEYS + RANGE_KEYS + META_KEYS + (
        'method', 'scan', 'samples', 'vary_energy', 'units_mode', 'out', 'format',
        'initial_states', 'static_metric', 'appendix_verbatim', 'steps_per_period',
        'points', 'times', 'seed', 'inject_fault',
    )
)


def _normalize_keys(data: Mapping[str, Any]) -> Dict[str, Any]:
    return {str(key).replace('-', '_'): value for key, value in data.items()}


def _enum(enum_cls, value: Any, key: str):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ', '.join(member.value for member in enum_cls)
        raise ConfigError(f"{key}: {value!r} is not one of {choices}") from None


def _float(value: Any, key: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not _float(value, key).is_integer():
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return int(_float(value, key))


def _flag(value: Any, key: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ('true', 'yes', '1', 'false', 'no', '0'):
        return value.lower() in ('true', 'yes', '1')
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _range(value: Any, key: str) -> tuple:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{key}: expected a pair [low, high], got {value!r}")
    return (_float(value[0], key), _float(value[1], key))


def run_config_from_mapping(data: Mapping[str, Any]) -> RunConfig:
    """Build and validate a RunConfig from flat keys (hyphens or underscores)"""
    data = _normalize_keys(data)
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")

    params = UserParams()
    scan = ScanSpec()
    config = RunConfig(params=params, scan=scan)

    for key in ANGLE_KEYS:
        if data.get(key) is not None:
            try:
                setattr(params, key, parse_angle(data[key]))
            except ValueError as e:
                raise ConfigError(f"{key}: {e}") from None
    for key in FLOAT_PARAM_KEYS:
        if data.get(key) is not None:
            setattr(params, key, _float(data[key], key))

    if data.get('scan') is not None:
        scan.variable = _enum(ScanVariable, data['scan'], 'scan')
    if data.get('start') is not None:
        scan.start = _float(data['start'], 'start')
    if data.get('stop') is not None:
        scan.stop = _float(data['stop'], 'stop')
    if data.get('baseline') is not None:
        scan.baseline_km = _float(data['baseline'], 'baseline')
    if data.get('samples') is not None:
        scan.samples = _int(data['samples'], 'samples')
    if data.get('vary_energy') is not None:
        scan.vary_energy = _flag(data['vary_energy'], 'vary_energy')
    for key in RANGE_KEYS:
        if data.get(key) is not None:
            setattr(scan, key, _range(data[key], key))

    if data.get('method') is not None:
        config.method = _enum(Method, data['method'], 'method')
    if data.get('units_mode') is not None:
        config.units_mode = _enum(UnitsMode, data['units_mode'], 'units_mode')
    if data.get('format') is not None:
        config.output_format = _enum(OutputFormat, data['format'], 'format')
    if data.get('initial_states') is not None:
        config.initial_states = _enum(InitialStates, data['initial_states'], 'initial_states')
    if data.get('out') is not None:
        config.output_path = Path(data['out'])
    for key in ('static_metric', 'appendix_verbatim'):
        if data.get(key) is not None:
            setattr(config, key, _flag(data[key], key))
    if data.get('steps_per_period') is not None:
        config.steps_per_period = _int(data['steps_per_period'], 'steps_per_period')
    for key in ('points', 'times', 'seed'):
        if data.get(key) is not None:
            setattr(config.validation, key, _int(data[key], key))
    if data.get('inject_fault') is not None:
        config.validation.inject_fault = _flag(data['inject_fault'], 'inject_fault')

    config.validate()
    return config


class ConfigLoader:
    """Loads run configurations and figure presets"""

    def __init__(self, presets_path: Path = DEFAULT_PRESETS_PATH):
        self.logger = setup_logger('config_loader')
        self.presets_path = Path(presets_path)
        self._presets: Optional[Dict[str, Dict[str, Any]]] = None

    def load_from_yaml(self, file_path: Path) -> Dict[str, Any]:
        """Load a flat configuration mapping from a YAML file"""
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            self.logger.error(f"Failed to load configuration from {file_path}: {str(e)}")
            raise ConfigError(f"cannot read {file_path}: {e}") from e
        return self._mapping(data, file_path)

    def load_from_json(self, file_path: Path) -> Dict[str, Any]:
        """Load a flat configuration mapping from a JSON file"""
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.error(f"Failed to load configuration from {file_path}: {str(e)}")
            raise ConfigError(f"cannot read {file_path}: {e}") from e
        return self._mapping(data, file_path)

    def load_file(self, file_path: Path) -> Dict[str, Any]:
        file_path = Path(file_path)
        if file_path.suffix.lower() in ('.yaml', '.yml'):
            return self.load_from_yaml(file_path)
        if file_path.suffix.lower() == '.json':
            return self.load_from_json(file_path)
        raise ConfigError(f"unsupported configuration format: {file_path.suffix or file_path.name}")

    def _mapping(self, data: Any, source: Path) -> Dict[str, Any]:
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"{source}: expected a mapping at the top level")
        self.logger.info(f"Loaded configuration from {source}")
        return _normalize_keys(data)

    def presets(self) -> Dict[str, Dict[str, Any]]:
        if self._presets is None:
            data = self.load_from_yaml(self.presets_path)
            presets = data.get('presets')
            if not isinstance(presets, dict):
                raise ConfigError(f"{self.presets_path}: missing 'presets' mapping")
            self._presets = {name: _normalize_keys(values) for name, values in presets.items()}
        return self._presets

    def preset_names(self) -> List[str]:
        return sorted(self.presets())

    def preset(self, name: str) -> Dict[str, Any]:
        presets = self.presets()
        if name not in presets:
            raise ConfigError(f"unknown preset {name!r}; available: {', '.join(sorted(presets))}")
        return dict(presets[name])

    def build(self, overrides: Optional[Mapping[str, Any]] = None,
              preset: Optional[str] = None,
              config_file: Optional[Path] = None,
              defaults: Optional[Mapping[str, Any]] = None) -> RunConfig:
        """Defaults, then preset, then file, then command-line values; None means 'not given'"""
        merged: Dict[str, Any] = _normalize_keys(defaults or {})
        if preset:
            merged.update(self.preset(preset))
        if config_file:
            merged.update(self.load_file(config_file))
        if overrides:
            merged.update({k: v for k, v in _normalize_keys(overrides).items() if v is not None})
        return run_config_from_mapping(merged)


__all__ = [
    'DEFAULT_PRESETS_PATH',
    'ConfigLoader',
    'run_config_from_mapping',
]
