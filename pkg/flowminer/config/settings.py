import os
from datetime import date
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv
from .defaults import DEFAULT_CONFIG

_TRUTHY = ('true', '1', 'yes')


class Settings:
    def __init__(self):
        # Load environment variables from .env file if it exists
        env_path = Path.home() / '.flowminer' / '.env'
        load_dotenv(env_path)

        self._load_config()

    def _load_config(self):
        # Example flow library location (shipped with the package unless overridden)
        self.FLOW_LIBRARY_PATH = os.getenv('FLOWMINER_FLOW_LIBRARY')
        self.FLOW_LIBRARY_VERSION = os.getenv(
            'FLOWMINER_FLOW_LIBRARY_VERSION', DEFAULT_CONFIG['FLOWS']['library_version']
        )

        # Problems found while reading the environment, reported by validate()
        self._errors: list[str] = []

        # Default worker count for per-length model training
        jobs = os.getenv('FLOWMINER_JOBS', '1')
        try:
            self.JOBS = int(jobs)
        except ValueError:
            self.JOBS = 1
            self._errors.append(f"FLOWMINER_JOBS must be an integer, got {jobs!r}")

        # Logging: defaults first, then environment overrides
        self.LOG_CONFIG = DEFAULT_CONFIG['LOG_CONFIG'].copy()
        overrides = {
            'log_format': 'FLOWMINER_LOG_FORMAT',
            'log_datefmt': 'FLOWMINER_LOG_DATE_FORMAT',
            'default_level': 'FLOWMINER_LOG_LEVEL',
        }
        for key, var in overrides.items():
            if os.getenv(var):
                self.LOG_CONFIG[key] = os.getenv(var)

        self.LOG_FILE = os.getenv('FLOWMINER_LOG_FILE')
        self.LOG_FILE_ENABLED = os.getenv('FLOWMINER_LOG_FILE_ENABLED', 'false').lower() in _TRUTHY
        self.LOG_DIR = os.getenv('FLOWMINER_LOG_DIR')

    def library_dir(self, version: Optional[str] = None) -> Path:
        """Directory holding the example flow files for ``version``."""
        version = version or self.FLOW_LIBRARY_VERSION
        if self.FLOW_LIBRARY_PATH:
            return Path(self.FLOW_LIBRARY_PATH) / version
        return Path(__file__).resolve().parent.parent / 'flows' / 'library' / version

    def log_file_path(self) -> Optional[Path]:
        """Log file to write, or None when file logging is off.

        An explicit ``FLOWMINER_LOG_FILE`` wins; otherwise, when enabled, one
        file per day under ``FLOWMINER_LOG_DIR`` (default ``~/.flowminer/logs``).
        """
        if self.LOG_FILE:
            return Path(self.LOG_FILE)
        if not self.LOG_FILE_ENABLED:
            return None
        log_dir = Path(self.LOG_DIR) if self.LOG_DIR else Path.home() / '.flowminer' / 'logs'
        return log_dir / f"flowminer_{date.today():%Y%m%d}.log"

    def validate(self) -> bool:
        """Validate that the configured settings are usable"""
        if self._errors:
            raise ValueError('; '.join(self._errors))
        if self.JOBS < 1:
            raise ValueError(f"FLOWMINER_JOBS must be >= 1, got {self.JOBS}")
        if not self.library_dir().is_dir():
            raise ValueError(f"Flow library directory not found: {self.library_dir()}")
        return True


# Create a global settings instance
settings = Settings()
