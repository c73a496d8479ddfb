import json

import pytest

from hmono.config import (
    CertifyParams,
    InterpParams,
    ZooSource,
    get_tool_config,
    load_experiment,
    load_settings,
)
from hmono.errors import ConfigError

MINIMAL = {"cost": {"n": 2, "p": 2}, "map": {"kind": "zoo", "name": "identity"}}


def write(tmp_path, document, name="experiment.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document) if isinstance(document, dict) else document)
    return path


def test_profiles_scale_budgets():
    default, fast, thorough = (load_settings(p) for p in ("default", "fast", "thorough"))
    assert fast.sampling.budget < default.sampling.budget < thorough.sampling.budget
    assert fast.sampling.particles == 65_536
    assert fast.sampling.green_budget == 2_048


def test_unknown_profile():
    with pytest.raises(ValueError):
        load_settings("turbo")


def test_pyproject_overrides_apply():
    assert get_tool_config()["seed"] == 20240601
    settings = load_settings()
    assert settings.seed == 20240601
    assert settings.quadrature.order == 16


def test_thread_cap_from_environment(monkeypatch):
    monkeypatch.setenv("HMONO_THREADS", "4")
    assert load_settings("fast").threads == 4
    monkeypatch.setenv("HMONO_THREADS", "many")
    with pytest.raises(ValueError):
        load_settings("fast")
    monkeypatch.setenv("HMONO_THREADS", "0")
    with pytest.raises(ValueError):
        load_settings("fast")


def test_threads_default_to_one(monkeypatch):
    monkeypatch.delenv("HMONO_THREADS", raising=False)
    assert load_settings().threads == 1


def test_load_minimal_json(tmp_path):
    config = load_experiment(write(tmp_path, MINIMAL))
    assert config.cost.family == "isotropic"
    assert isinstance(config.map, ZooSource)
    assert config.checks == []
    assert config.seed is None
    assert config.profile == "default"


def test_load_yaml_with_checks(tmp_path):
    text = """
cost: {n: 3, p: 4}
map: {kind: zoo, name: translation, params: {shift: [0.1, 0, 0]}}
profile: fast
seed: 7
checks:
  - kind: certify
    beta: 0.3
  - kind: interp
    t_grid: [0.0, 1.0]
"""
    config = load_experiment(write(tmp_path, text, "experiment.yaml"))
    assert config.seed == 7
    assert isinstance(config.checks[0], CertifyParams)
    assert config.checks[0].beta == 0.3
    assert isinstance(config.checks[1], InterpParams)
    assert config.checks[1].beta_bar == 0.75


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_experiment(tmp_path / "absent.json")


def test_bad_json_reports_position(tmp_path):
    path = write(tmp_path, '{\n  "cost": \n}')
    with pytest.raises(ConfigError) as err:
        load_experiment(path)
    assert f"{path}:3:" in str(err.value)


def test_non_object_document(tmp_path):
    with pytest.raises(ConfigError, match="object"):
        load_experiment(write(tmp_path, "[1, 2]"))


def test_validation_errors_name_the_field(tmp_path):
    document = MINIMAL | {"checks": [{"kind": "certify", "beta": 1.5}]}
    with pytest.raises(ConfigError) as err:
        load_experiment(write(tmp_path, document))
    assert "checks.0" in str(err.value)
    assert "beta" in str(err.value)


def test_interpolation_radii_must_be_ordered(tmp_path):
    document = MINIMAL | {"checks": [{"kind": "interp", "beta": 0.8, "beta_bar": 0.6}]}
    with pytest.raises(ConfigError, match="beta < beta_bar"):
        load_experiment(write(tmp_path, document))


def test_weighted_cost_needs_weights(tmp_path):
    document = MINIMAL | {"cost": {"family": "weighted", "n": 2, "p": 3}}
    with pytest.raises(ConfigError, match="weights"):
        load_experiment(write(tmp_path, document))


def test_unknown_top_level_keys_are_rejected(tmp_path):
    with pytest.raises(ConfigError, match="extra"):
        load_experiment(write(tmp_path, MINIMAL | {"colour": "blue"}))


def test_unknown_check_kind(tmp_path):
    document = MINIMAL | {"checks": [{"kind": "teleport"}]}
    with pytest.raises(ConfigError):
        load_experiment(write(tmp_path, document))


def test_csv_source_must_exist(tmp_path):
    document = MINIMAL | {"map": {"kind": "csv", "path": str(tmp_path / "missing.csv")}}
    with pytest.raises(ConfigError, match="map file not found"):
        load_experiment(write(tmp_path, document))


def test_zoo_map_name_must_be_known(tmp_path):
    document = MINIMAL | {"map": {"kind": "zoo", "name": "spiral"}}
    with pytest.raises(ConfigError, match="unknown zoo map"):
        load_experiment(write(tmp_path, document))
