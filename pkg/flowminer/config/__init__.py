"""Package settings (environment driven) and built-in defaults."""

from .defaults import DEFAULT_CONFIG
from .settings import settings

__all__ = ['DEFAULT_CONFIG', 'settings']
