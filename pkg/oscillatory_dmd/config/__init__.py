"""Configuration package for oscillatory-dmd."""

from oscillatory_dmd.config.config_loader import ConfigLoader, ConfigurationError, get_config_loader

__all__ = ["get_config_loader", "ConfigLoader", "ConfigurationError"]
