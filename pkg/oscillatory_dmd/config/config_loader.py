"""
Run configuration: a YAML file (the packaged default or one named with -c/--config) layered with
OSCI_DMD_SECTION__KEY environment variables. Numerical code never reads it; the CLI, the experiment
runner and the connectors pass the values down.
"""
import argparse
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

Config = Dict[str, Any]


class ConfigurationError(Exception):
    """Invalid or incomplete configuration, simulation file or experiment preset."""


def _nonnegative(value: Any) -> bool:
    return float(value) >= 0


def _positive_or_unset(value: Any) -> bool:
    return value is None or int(value) > 0


class ConfigLoader:
    """
    Loads and validates the run configuration.

    Required sections and keys are listed in REQUIRED_KEYS; CHECKS holds the value constraints
    applied after the environment overrides.
    """

    DEFAULT_CONFIG_PATH = Path(__file__).parent / "default_config.yaml"
    ENV_PREFIX = "OSCI_DMD_"

    REQUIRED_KEYS = {
        "paths": ["log_file", "output_dir"],
        "logging": ["level"],
        "numerics": ["tol", "seed", "pidmd_warn_dim", "pidmd_max_dim", "rank_rtol"],
        "parallelization": ["num_threads", "chunk_size"],
        "output": ["format", "float_format"],
    }

    CHECKS = {
        ("numerics", "tol"): (_nonnegative, "must be nonnegative"),
        ("numerics", "rank_rtol"): (_nonnegative, "must be nonnegative"),
        ("numerics", "pidmd_max_dim"): (_positive_or_unset, "must be positive or null"),
        ("parallelization", "num_threads"): (_positive_or_unset, "must be positive or null"),
        ("parallelization", "chunk_size"): (_positive_or_unset, "must be positive"),
        ("output", "format"): (lambda value: value == "csv", "must be 'csv'"),
    }

    using_default_config = False

    def __init__(self, config_path: Optional[Union[str, Path]] = None, read_cli: bool = True):
        """
        :param config_path: YAML file to load. When None, a -c/--config flag on the command line is used
                            (if read_cli), otherwise the packaged default_config.yaml.
        :param read_cli: Whether to look for -c/--config in sys.argv.
        """
        if config_path is None and read_cli:
            config_path = self._config_flag()
        self.using_default_config = config_path is None
        self.config_path = self.DEFAULT_CONFIG_PATH if config_path is None else Path(config_path)
        self.config = load_yaml_file(self.config_path)
        self._apply_env_overrides()
        self._validate()

    @staticmethod
    def _config_flag() -> Optional[str]:
        # add_help=False keeps -h for the real parser
        peek = argparse.ArgumentParser(add_help=False)
        peek.add_argument("-c", "--config", default=None)
        known, _ = peek.parse_known_args()
        return known.config

    def _apply_env_overrides(self) -> None:
        """OSCI_DMD_NUMERICS__TOL=1e-8 sets numerics.tol; values go through parse_scalar."""
        for name, raw in os.environ.items():
            if name.startswith(self.ENV_PREFIX):
                keys = name[len(self.ENV_PREFIX):].lower().split("__")
                set_nested_value(self.config, keys, parse_scalar(raw))

    def _validate(self) -> None:
        """
        :raises: ConfigurationError: On a missing section or key, or a value outside its allowed range.
        """
        if not isinstance(self.config, dict):
            raise ConfigurationError(f"Configuration root must be a mapping: {self.config_path}")
        for section, keys in self.REQUIRED_KEYS.items():
            values = self.config.get(section)
            if not isinstance(values, dict):
                raise ConfigurationError(f"Missing required configuration section: {section}")
            missing = [key for key in keys if key not in values]
            if missing:
                raise ConfigurationError(f"Missing required {section} parameter: {', '.join(missing)}")

        for (section, key), (check, message) in self.CHECKS.items():
            value = self.config[section][key]
            try:
                valid = check(value)
            except (TypeError, ValueError):
                valid = False
            if not valid:
                raise ConfigurationError(f"{section}.{key} {message}, got {value!r}")

    def get_config(self) -> Config:
        return self.config

    def get_cli_config(self) -> tuple[Config, bool]:
        """The configuration and whether it came from the packaged default file."""
        return self.config, self.using_default_config

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.config.get(section, {}).get(key, default)


def load_yaml_file(path: Union[str, Path]) -> Config:
    """
    Reads a YAML mapping from disk.
    :param path: The file to read.
    :return: The parsed mapping.
    :raises: ConfigurationError: If the file is missing or not valid YAML.
    """
    try:
        with open(path, "r") as f:
            return yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"Configuration file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Invalid YAML in configuration file: {e}")
    except Exception as e:
        raise ConfigurationError(f"Failed to load configuration from {path}: {e}")


def parse_scalar(value: str) -> Any:
    """
    Converts an override string (environment variable or --set value) to bool, None, int or float.
    Strings that are none of these are returned unchanged.
    """
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if lowered in ("null", "none"):
        return None
    try:
        return float(value) if any(c in value for c in ".eE") else int(value)
    except ValueError:
        return value


def set_nested_value(config: Dict[str, Any], key_path: List[str], value: Any) -> None:
    """
    Sets config[k0][k1]...[kn] = value, creating missing (or null) intermediate sections.
    :raises: ConfigurationError: If an intermediate key holds a non-mapping value.
    """
    if not key_path:
        return
    *parents, last = key_path
    node = config
    for key in parents:
        if node.get(key) is None:
            node[key] = {}
        if not isinstance(node[key], dict):
            raise ConfigurationError(f"Cannot set nested value for non-dict key: {key}")
        node = node[key]
    node[last] = value


_config_loader = None


def get_config_loader(config_path: Optional[Union[str, Path]] = None) -> ConfigLoader:
    """
    The process-wide loader, created on first use. Passing config_path reloads from that file.
    """
    global _config_loader
    if _config_loader is None or config_path is not None:
        _config_loader = ConfigLoader(config_path)
    return _config_loader
