"""Tests for configuration loader"""

import pytest
import yaml


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """No BLACKWELL_* overrides and no stray .env file"""
    monkeypatch.chdir(tmp_path)
    for name in ("BLACKWELL_POLICY_GUARD", "BLACKWELL_VERTEX_GUARD", "BLACKWELL_PARALLEL",
                 "BLACKWELL_MAX_WORKERS", "BLACKWELL_LOG_LEVEL", "BLACKWELL_REPORT_FORMAT"):
        monkeypatch.delenv(name, raising=False)


@pytest.mark.unit
class TestConfigLoader:
    """Test suite for ConfigLoader"""

    def test_can_import_config_loader(self):
        """Verify ConfigLoader can be imported"""
        from blackwell_mdp.config.loader import ConfigLoader
        assert ConfigLoader is not None

    def test_default_settings_file_exists(self, settings_file):
        """Verify the shipped settings.yaml exists and is a YAML object"""
        assert settings_file.exists(), f"Config file not found: {settings_file}"
        with open(settings_file, 'r') as f:
            config = yaml.safe_load(f)
        assert isinstance(config, dict), "Config should be a YAML object"

    def test_shipped_settings_match_defaults(self, settings_file, clean_env):
        """Verify settings.yaml and the dataclass defaults agree"""
        from blackwell_mdp.config import ConfigLoader, ToolkitConfig
        assert ConfigLoader().load(settings_file) == ToolkitConfig()

    def test_load_without_file(self, clean_env):
        """Verify None gives the built-in defaults"""
        from blackwell_mdp.config import ConfigLoader
        config = ConfigLoader().load(None)
        assert config.analysis.policy_guard == 10**6
        assert config.analysis.vertex_guard == 10**4
        assert config.io.rationalize_floats is False
        assert config.report.format == "text"

    def test_partial_file(self, tmp_path, clean_env):
        """Verify missing sections fall back to defaults"""
        from blackwell_mdp.config import ConfigLoader
        path = tmp_path / "settings.yaml"
        path.write_text("analysis:\n  policy_guard: 50\n")
        config = ConfigLoader().load(path)
        assert config.analysis.policy_guard == 50
        assert config.solvers.max_iterations == 100000

    def test_env_overrides(self, monkeypatch, clean_env):
        """Verify BLACKWELL_* variables override file values"""
        from blackwell_mdp.config import ConfigLoader
        monkeypatch.setenv("BLACKWELL_POLICY_GUARD", "12")
        monkeypatch.setenv("BLACKWELL_PARALLEL", "yes")
        monkeypatch.setenv("BLACKWELL_LOG_LEVEL", "DEBUG")
        config = ConfigLoader().load(None)
        assert config.analysis.policy_guard == 12
        assert config.analysis.parallel is True
        assert config.logging.get_log_level() == "DEBUG"

    def test_bad_env_value(self, monkeypatch, clean_env):
        """Verify a non-numeric guard override raises ConfigError"""
        from blackwell_mdp.config import ConfigError, ConfigLoader
        monkeypatch.setenv("BLACKWELL_POLICY_GUARD", "many")
        with pytest.raises(ConfigError):
            ConfigLoader().load(None)

    def test_dotenv_file(self, tmp_path, clean_env):
        """Verify a .env file in the working directory is honoured"""
        from blackwell_mdp.config import ConfigLoader
        import os
        (tmp_path / ".env").write_text("BLACKWELL_VERTEX_GUARD=77\n")
        try:
            config = ConfigLoader().load(None)
        finally:
            os.environ.pop("BLACKWELL_VERTEX_GUARD", None)
        assert config.analysis.vertex_guard == 77


@pytest.mark.unit
class TestConfigValidation:
    """Test suite for configuration validation logic"""

    def test_missing_file(self, tmp_path, clean_env):
        """Verify a missing settings file raises ConfigError"""
        from blackwell_mdp.config import ConfigError, ConfigLoader
        with pytest.raises(ConfigError):
            ConfigLoader().load(tmp_path / "absent.yaml")

    def test_invalid_yaml(self, tmp_path, clean_env):
        """Verify broken YAML raises ConfigError"""
        from blackwell_mdp.config import ConfigError, ConfigLoader
        path = tmp_path / "settings.yaml"
        path.write_text("analysis: [unclosed\n")
        with pytest.raises(ConfigError):
            ConfigLoader().load(path)

    def test_non_mapping(self, tmp_path, clean_env):
        """Verify a YAML list is not a configuration"""
        from blackwell_mdp.config import ConfigError, ConfigLoader
        path = tmp_path / "settings.yaml"
        path.write_text("- a\n- b\n")
        with pytest.raises(ConfigError):
            ConfigLoader().load(path)

    @pytest.mark.parametrize("text", [
        "analysis:\n  policy_guard: 0\n",
        "analysis:\n  unknown_key: 1\n",
        "report:\n  format: pdf\n",
        "solvers:\n  float_tolerance: 0\n",
    ])
    def test_schema_violations(self, tmp_path, clean_env, text):
        """Verify out-of-range and unknown settings raise ConfigError"""
        from blackwell_mdp.config import ConfigError, ConfigLoader
        path = tmp_path / "settings.yaml"
        path.write_text(text)
        with pytest.raises(ConfigError):
            ConfigLoader().load(path)

    def test_validate_basic_reports_errors(self):
        """Verify validate_basic collects messages instead of raising"""
        from blackwell_mdp.config import AnalysisSettings, ToolkitConfig
        config = ToolkitConfig(analysis=AnalysisSettings(policy_guard=0, max_workers=0))
        errors = config.validate_basic()
        assert len(errors) == 2
        assert any("policy_guard" in e for e in errors)
