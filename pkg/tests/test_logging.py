import logging

import pytest

from flowminer.config.settings import Settings
from flowminer.utils.logging import ROOT_LOGGER, configure_logger, initialize, timed

LOG_VARS = ("FLOWMINER_LOG_FILE", "FLOWMINER_LOG_FILE_ENABLED", "FLOWMINER_LOG_DIR", "FLOWMINER_LOG_LEVEL")


@pytest.fixture
def clean_env(monkeypatch):
    for var in LOG_VARS:
        monkeypatch.delenv(var, raising=False)
    return monkeypatch


@pytest.fixture
def restore_logging():
    yield
    initialize()


class TestSettings:
    def test_file_logging_off_by_default(self, clean_env):
        assert Settings().log_file_path() is None

    def test_explicit_log_file(self, clean_env, tmp_path):
        clean_env.setenv("FLOWMINER_LOG_FILE", str(tmp_path / "run.log"))
        assert Settings().log_file_path() == tmp_path / "run.log"

    def test_daily_file_in_log_dir(self, clean_env, tmp_path):
        clean_env.setenv("FLOWMINER_LOG_FILE_ENABLED", "yes")
        clean_env.setenv("FLOWMINER_LOG_DIR", str(tmp_path))
        path = Settings().log_file_path()
        assert path.parent == tmp_path
        assert path.name.startswith("flowminer_") and path.suffix == ".log"

    def test_level_override(self, clean_env):
        clean_env.setenv("FLOWMINER_LOG_LEVEL", "DEBUG")
        assert Settings().LOG_CONFIG["default_level"] == "DEBUG"

    def test_validate_jobs(self, clean_env):
        clean_env.setenv("FLOWMINER_JOBS", "0")
        with pytest.raises(ValueError, match="FLOWMINER_JOBS"):
            Settings().validate()

    def test_non_integer_jobs_reported_by_validate(self, clean_env):
        clean_env.setenv("FLOWMINER_JOBS", "four")
        loaded = Settings()
        assert loaded.JOBS == 1
        with pytest.raises(ValueError, match="must be an integer.*four"):
            loaded.validate()


class TestLogger:
    def test_file_handler(self, tmp_path, restore_logging):
        log_file = tmp_path / "logs" / "run.log"
        root = configure_logger(level=logging.DEBUG, log_file=log_file, console=False)
        assert root.name == ROOT_LOGGER
        logging.getLogger("flowminer.mining.core").debug("mined %d patterns", 3)
        for handler in root.handlers:
            handler.flush()
        assert "[DEBUG] flowminer.mining.core: mined 3 patterns" in log_file.read_text()

    def test_reconfigure_replaces_handlers(self, restore_logging):
        configure_logger()
        root = configure_logger()
        assert len(root.handlers) == 1

    def test_timed(self, caplog):
        @timed
        def stage(x):
            return x * 2

        with caplog.at_level(logging.INFO):
            assert stage(4) == 8
        assert any("stage completed in" in r.getMessage() for r in caplog.records)

    def test_timed_logs_on_error(self, caplog):
        @timed
        def failing():
            raise RuntimeError("boom")

        with caplog.at_level(logging.INFO), pytest.raises(RuntimeError):
            failing()
        assert any("failing completed in" in r.getMessage() for r in caplog.records)
