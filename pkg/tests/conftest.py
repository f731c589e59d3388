"""Pytest configuration and shared fixtures"""

import json
import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))


@pytest.fixture
def project_root():
    """Return path to project root directory"""
    return Path(__file__).parent.parent


@pytest.fixture
def config_dir(project_root):
    """Return path to config directory"""
    return project_root / "config"


@pytest.fixture
def schema_file(config_dir):
    """Return path to schema.json file"""
    return config_dir / "schema.json"


@pytest.fixture
def settings_file(config_dir):
    """Return path to settings.yaml file"""
    return config_dir / "settings.yaml"


@pytest.fixture
def instance_schema_file(config_dir):
    """Return path to instance.schema.json file"""
    return config_dir / "instance.schema.json"


@pytest.fixture
def example_one():
    """The eight-state instance with breakpoints at 1/4, 1/2 and 3/4"""
    from blackwell_mdp.core.generators import example_one
    return example_one()


@pytest.fixture
def example_two():
    """Interval instance with breakpoints 0, 1/5, ..., 4/5, 1"""
    from blackwell_mdp.core.generators import example_two
    return example_two()


@pytest.fixture
def single_state_raw():
    """One state, one action, reward 1, self-loop"""
    return {"rewards": [["1"]], "transitions": [[["1"]]]}


@pytest.fixture
def two_state_raw():
    """
    State 0: a1 stays and earns 1/2, a2 moves to state 1 and earns 0.
    State 1: absorbing with reward 1 under both actions.
    """
    return {
        "rewards": [["1/2", "0"], ["1", "1"]],
        "transitions": [
            [["1", "0"], ["0", "1"]],
            [["0", "1"], ["0", "1"]],
        ],
    }


@pytest.fixture
def two_state(two_state_raw):
    from blackwell_mdp.model.mdp import validate_instance
    return validate_instance(two_state_raw)


@pytest.fixture
def write_json(tmp_path):
    """Write a dict as JSON into tmp_path and return the path"""
    def _write(data, name="instance.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path
    return _write


@pytest.fixture
def example_one_file(tmp_path, example_one):
    from blackwell_mdp.model.instance_io import write_instance
    return write_instance(tmp_path / "example1.json", example_one)


@pytest.fixture
def quiet_env(monkeypatch):
    """Keep CLI logs off the captured output"""
    monkeypatch.setenv("BLACKWELL_LOG_LEVEL", "ERROR")
    for name in ("BLACKWELL_POLICY_GUARD", "BLACKWELL_VERTEX_GUARD", "BLACKWELL_PARALLEL",
                 "BLACKWELL_MAX_WORKERS", "BLACKWELL_REPORT_FORMAT"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def runner(quiet_env):
    from click.testing import CliRunner
    return CliRunner()
