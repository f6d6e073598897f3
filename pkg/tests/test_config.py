"""
Unit tests for settings
"""
import pytest

from src.config import Settings, get_settings


class TestSettings:
    """Tests for environment-driven settings"""

    def test_defaults(self, monkeypatch):
        """Test defaults with no HP_* variables set"""
        for name in ('HP_ORACLE_MAX_LENGTH', 'HP_SURVEY_MAX_N', 'HP_STORE_LIMIT', 'HP_WORKERS', 'HP_LOG_LEVEL'):
            monkeypatch.delenv(name, raising=False)
        settings = Settings()
        assert settings.oracle_max_length == 14
        assert settings.survey_max_n == 20
        assert settings.store_limit == 16
        assert settings.workers == 1
        assert settings.log_level == 'WARNING'

    def test_environment(self, monkeypatch):
        """Test values come from the environment"""
        monkeypatch.setenv('HP_WORKERS', '4')
        monkeypatch.setenv('HP_LOG_LEVEL', 'debug')
        settings = Settings()
        assert settings.workers == 4
        assert settings.log_level == 'DEBUG'

    def test_arguments_win(self, monkeypatch):
        """Test explicit arguments override the environment"""
        monkeypatch.setenv('HP_BLOCK_SIZE', '64')
        assert Settings(block_size=32).block_size == 32

    def test_blank_variable_uses_default(self, monkeypatch):
        """Test a blank variable falls back to the default"""
        monkeypatch.setenv('HP_CHECKPOINT_EVERY', '  ')
        assert Settings().checkpoint_every == 8

    def test_non_integer(self, monkeypatch):
        """Test a non-integer variable is refused"""
        monkeypatch.setenv('HP_WORKERS', 'many')
        with pytest.raises(ValueError, match="HP_WORKERS must be an integer"):
            Settings()

    def test_ranges(self):
        """Test out-of-range values are refused"""
        with pytest.raises(ValueError, match="workers must be positive"):
            Settings(workers=0)
        with pytest.raises(ValueError, match="store_limit"):
            Settings(store_limit=-1)

    def test_cached(self):
        """Test get_settings returns one shared instance"""
        assert get_settings() is get_settings()
