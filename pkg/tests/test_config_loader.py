"""
Tests for run configuration loading and figure presets
"""

import json
import math

import pytest
import yaml

from automation.config_loader import ConfigLoader, run_config_from_mapping
from models.errors import ConfigError
from models.oscillation import InitialStates
from models.run_config import Method, OutputFormat, ScanVariable
from utils.units import UnitsMode


@pytest.fixture
def loader():
    return ConfigLoader()


def test_presets_are_available(loader):
    assert loader.preset_names() == ['fig1', 'fig2', 'fig2-broken', 'fig3', 'fig4']


@pytest.mark.parametrize("name", ['fig1', 'fig2', 'fig2-broken', 'fig3', 'fig4'])
def test_every_preset_builds(loader, name):
    cfg = loader.build(preset=name)
    cfg.validate()


def test_fig3_preset_values(loader):
    cfg = loader.build(preset='fig3')
    assert cfg.method is Method.DENSITY_ANALYTIC
    assert cfg.units_mode is UnitsMode.PAPER_ROUNDED
    assert cfg.params.theta == pytest.approx(math.pi / 3)
    assert cfg.params.alpha == pytest.approx(math.pi / 6)
    assert cfg.params.beta == pytest.approx(math.pi / 3)
    assert cfg.scan.samples == 100


def test_unknown_preset(loader):
    with pytest.raises(ConfigError):
        loader.preset('fig9')


def test_precedence_preset_file_overrides(loader, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump({'samples': 50, 'stop': 1500.0}), encoding='utf-8')
    cfg = loader.build(overrides={'samples': 10, 'stop': None}, preset='fig3', config_file=path)
    assert cfg.scan.samples == 10
    assert cfg.scan.stop == 1500.0
    assert cfg.params.alpha == pytest.approx(math.pi / 6)


def test_json_file_with_hyphenated_keys(loader, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({
        'method': 'density-trace', 'initial-states': 'flavor', 'theta': '2pi/9',
        'units-mode': 'exact', 'format': 'json', 'scan': 'LE',
    }), encoding='utf-8')
    cfg = loader.build(config_file=path)
    assert cfg.method is Method.DENSITY_TRACE
    assert cfg.initial_states is InitialStates.FLAVOR_BASIS
    assert cfg.params.theta == pytest.approx(2 * math.pi / 9)
    assert cfg.output_format is OutputFormat.JSON
    assert cfg.scan.variable is ScanVariable.L_OVER_E


def test_unreadable_files(loader, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding='utf-8')
    with pytest.raises(ConfigError):
        loader.load_file(broken)
    with pytest.raises(ConfigError):
        loader.load_file(tmp_path / "missing.yaml")
    with pytest.raises(ConfigError):
        loader.load_file(tmp_path / "run.toml")
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding='utf-8')
    with pytest.raises(ConfigError):
        loader.load_file(listing)


@pytest.mark.parametrize("data", [
    {'colour': 'blue'},
    {'method': 'euler'},
    {'theta': 'pie/3'},
    {'energy': 'high'},
    {'samples': 2.5},
    {'samples': 1},
    {'kappa_range': [0.0]},
    {'start': 10.0, 'stop': 5.0},
    {'static_metric': 'maybe'},
    {'energy': -1.0},
    {'steps_per_period': 8},
    {'points': 0},
    {'times': 2.5},
    {'seed': True},
    {'inject_fault': 'sometimes'},
])
def test_invalid_mappings(data):
    with pytest.raises(ConfigError):
        run_config_from_mapping(data)


@pytest.mark.parametrize("data", [
    {'appendix_verbatim': True},
    {'appendix_verbatim': True, 'units_mode': 'paper', 'method': 'density-trace'},
    {'static_metric': True},
    {'initial_states': 'flavor'},
    {'method': 'g-metric', 'alpha': 0.5, 'beta': 0.5},
])
def test_inconsistent_option_combinations(data):
    with pytest.raises(ConfigError):
        run_config_from_mapping(data)


def test_to_dict_round_trips():
    cfg = run_config_from_mapping({'method': 'density-rk4', 'theta': 0.6, 'kappa': 1e-3,
                                   'samples': 12, 'steps_per_period': 500})
    data = {k: v for k, v in cfg.to_dict().items() if v is not None}
    again = run_config_from_mapping(data)
    assert again.to_dict() == cfg.to_dict()


def test_validation_settings(loader, tmp_path):
    cfg = loader.build()
    assert (cfg.validation.points, cfg.validation.times) == (1000, 10)
    assert cfg.validation.inject_fault is False

    path = tmp_path / "validate.yaml"
    path.write_text(yaml.safe_dump({'points': 25, 'seed': 4}), encoding='utf-8')
    cfg = loader.build(overrides={'times': 3, 'inject_fault': True}, config_file=path)
    assert (cfg.validation.points, cfg.validation.times, cfg.validation.seed) == (25, 3, 4)
    assert cfg.validation.inject_fault is True


def test_defaults_sit_below_every_other_layer(loader, tmp_path):
    assert loader.build(defaults={'format': 'json'}).output_format is OutputFormat.JSON
    assert loader.build(defaults={'format': 'json'},
                        overrides={'format': 'csv'}).output_format is OutputFormat.CSV
    path = tmp_path / "run.json"
    path.write_text(json.dumps({'format': 'csv'}), encoding='utf-8')
    assert loader.build(defaults={'format': 'json'}, config_file=path).output_format is OutputFormat.CSV
