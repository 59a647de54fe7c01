"""
Experiment and simulation settings parsed from YAML mappings (presets, config files, --set overrides).
"""
import copy
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import yaml

from oscillatory_dmd.config import ConfigurationError
from oscillatory_dmd.config.config_loader import load_yaml_file, parse_scalar, set_nested_value
from oscillatory_dmd.dmd.dispatch import METHODS
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.linalg.kernels import DEFAULT_TOL
from oscillatory_dmd.procrustes.solvers import DEFAULT_RANK_RTOL
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid
from oscillatory_dmd.solver.dtos.solver_config import SolverConfig
from oscillatory_dmd.solver.wkb import wkb_from_config, wkb_initial

PRESETS_PATH = Path(__file__).parent / "presets.yaml"

SOLVER_FIELDS = ("a", "b", "n_fine", "eps", "potential", "tau_e")


def _require(mapping: Dict[str, Any], key: str, where: str) -> Any:
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigurationError(f"Missing required {where} field: {key}")
    return mapping[key]


def potential_from_mapping(potential: Dict[str, Any]) -> PotentialSpec:
    kind = _require(potential, "kind", "potential")
    try:
        if kind == "tabulated":
            return PotentialSpec.tabulated(_require(potential, "values", "potential"))
        return PotentialSpec(kind, value=float(potential.get("value", 0.0)))
    except ValidationError as e:
        raise ConfigurationError(f"Invalid potential: {e}")


def solver_config_from_mapping(solver: Dict[str, Any], steps: int, eps: Optional[float] = None) -> SolverConfig:
    """
    Builds a SolverConfig from a mapping with the keys a, b, n_fine, eps, potential, tau_e and the
    optional beta, downsample_time, downsample_space.

    :param steps: Number of fine time steps.
    :param eps: Replaces the mapping's eps (parameter sweeps).
    :raises: ConfigurationError: If a field is missing or invalid.
    """
    for key in SOLVER_FIELDS:
        _require(solver, key, "simulation")
    try:
        grid = SpatialGrid(float(solver["a"]), float(solver["b"]), int(solver["n_fine"]))
        return SolverConfig(
            grid=grid,
            eps=float(solver["eps"] if eps is None else eps),
            potential=potential_from_mapping(solver["potential"]),
            tau_e=float(solver["tau_e"]),
            steps=int(steps),
            beta=float(solver.get("beta", 0.0)),
            downsample_time=int(solver.get("downsample_time", 1)),
            downsample_space=int(solver.get("downsample_space", 1)),
        )
    except ValidationError as e:
        raise ConfigurationError(f"Invalid simulation settings: {e}")


def initial_state(initial: Dict[str, Any], cfg: SolverConfig) -> np.ndarray:
    """WKB initial data on the fine grid."""
    try:
        return wkb_initial(wkb_from_config(initial or {}, cfg.grid, cfg.eps), cfg.grid)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid initial profile: {e}")


@dataclass(frozen=True)
class SweepSpec:
    """Grid of training lengths and Planck constants; each cell predicts horizon_factor * m columns."""
    train_columns: tuple
    eps: tuple
    horizon_factor: int = 10


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Fully resolved experiment: data generation, training window, methods and evaluation horizon.
    The training matrix holds columns train_start..train_start+train_columns-1 of the simulated
    trajectory; predictions and metrics cover horizon columns from train_start on.
    """
    name: str
    solver: Dict[str, Any]
    initial: Dict[str, Any]
    methods: tuple
    train_columns: int
    horizon: int
    train_start: int = 0
    tol: float = DEFAULT_TOL
    rank_rtol: float = DEFAULT_RANK_RTOL
    seed: int = 0
    noise_levels: tuple = (0.0,)
    delay_depths: tuple = (1,)
    pidmd_max_dim: Optional[int] = None
    pidmd_warn_dim: Optional[int] = None
    magnitude_grids: bool = False
    prediction_mode: str = "block"
    sweep: Optional[SweepSpec] = None
    description: str = ""
    output_dir: Optional[str] = None

    def __post_init__(self):
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigurationError(f"Unknown DMD method(s) {unknown}, expected a subset of {list(METHODS)}")
        if self.train_columns < 2:
            raise ConfigurationError(f"train_columns must be at least 2, got {self.train_columns}")
        if self.horizon < self.train_columns:
            raise ConfigurationError(f"horizon ({self.horizon}) must be at least train_columns ({self.train_columns})")
        if self.train_start < 0:
            raise ConfigurationError(f"train_start must be nonnegative, got {self.train_start}")
        if any(sigma < 0 for sigma in self.noise_levels):
            raise ConfigurationError("Noise levels must be nonnegative")
        if any(q < 1 or q >= self.train_columns for q in self.delay_depths):
            raise ConfigurationError(f"Delay depths must lie in [1, train_columns - 1], got {list(self.delay_depths)}")
        if not math.isfinite(self.tol) or self.tol < 0:
            raise ConfigurationError(f"tol must be finite and nonnegative, got {self.tol}")

    @property
    def total_columns(self) -> int:
        """Coarse columns the simulation must produce."""
        return self.train_start + self.horizon

    def solver_config(self, eps: Optional[float] = None, total_columns: Optional[int] = None) -> SolverConfig:
        columns = self.total_columns if total_columns is None else total_columns
        stride = int(self.solver.get("downsample_time", 1))
        return solver_config_from_mapping(self.solver, (columns - 1) * stride, eps)

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        for key in ("methods", "noise_levels", "delay_depths"):
            result[key] = list(result[key])
        if self.sweep is not None:
            result["sweep"] = {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self.sweep).items()}
        return result


def load_presets(path: Path = PRESETS_PATH) -> Dict[str, Any]:
    return load_yaml_file(path)


def apply_overrides(mapping: Dict[str, Any], overrides: Optional[list[str]]) -> Dict[str, Any]:
    """
    Applies key=value overrides with dotted keys to a copy of the mapping.
    Values starting with '[' or '{' are parsed as YAML, everything else like an environment override.
    """
    result = copy.deepcopy(mapping)
    for override in overrides or []:
        if "=" not in override:
            raise ConfigurationError(f"Override '{override}' is not of the form key=value")
        key, raw = override.split("=", 1)
        value = yaml.safe_load(raw) if raw.strip()[:1] in ("[", "{") else parse_scalar(raw.strip())
        set_nested_value(result, key.strip().split("."), value)
    return result


def experiment_from_mapping(name: str, mapping: Dict[str, Any], defaults: Optional[Dict[str, Any]] = None) -> ExperimentSpec:
    """
    :param name: Preset or experiment name.
    :param mapping: Preset mapping after overrides.
    :param defaults: Fallbacks for tol, rank_rtol, seed, pidmd_warn_dim (the numerics config section).
    :raises: ConfigurationError: On missing or invalid fields.
    """
    defaults = defaults or {}
    solver = _require(mapping, "solver", "experiment")
    for key in SOLVER_FIELDS:
        _require(solver, key, "solver")

    sweep = None
    if mapping.get("sweep"):
        raw = mapping["sweep"]
        sweep = SweepSpec(
            train_columns=tuple(int(m) for m in _require(raw, "train_columns", "sweep")),
            eps=tuple(float(e) for e in _require(raw, "eps", "sweep")),
            horizon_factor=int(raw.get("horizon_factor", 10)),
        )

    try:
        return ExperimentSpec(
            name=name,
            solver=solver,
            initial=mapping.get("initial", {}),
            methods=tuple(_require(mapping, "methods", "experiment")),
            train_columns=int(_require(mapping, "train_columns", "experiment")),
            horizon=int(_require(mapping, "horizon", "experiment")),
            train_start=int(mapping.get("train_start", 0)),
            tol=float(mapping.get("tol", defaults.get("tol", DEFAULT_TOL))),
            rank_rtol=float(mapping.get("rank_rtol", defaults.get("rank_rtol", DEFAULT_RANK_RTOL))),
            seed=int(mapping.get("seed", defaults.get("seed", 0))),
            noise_levels=tuple(float(s) for s in mapping.get("noise_levels", [0.0])),
            delay_depths=tuple(int(q) for q in mapping.get("delay_depths", [1])),
            pidmd_max_dim=mapping.get("pidmd_max_dim"),
            pidmd_warn_dim=mapping.get("pidmd_warn_dim", defaults.get("pidmd_warn_dim")),
            magnitude_grids=bool(mapping.get("magnitude_grids", False)),
            prediction_mode=str(mapping.get("prediction_mode", "block")),
            sweep=sweep,
            description=str(mapping.get("description", "")),
            output_dir=mapping.get("output_dir"),
        )
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid experiment '{name}': {e}")


def load_experiment(name: str, overrides: Optional[list[str]] = None,
                    defaults: Optional[Dict[str, Any]] = None) -> ExperimentSpec:
    """
    Resolves a preset by name, applies overrides and validates the result.
    :raises: ConfigurationError: If the preset is unknown or the result is invalid.
    """
    presets = load_presets()
    if name not in presets:
        raise ConfigurationError(f"Unknown preset '{name}'. Available presets: {', '.join(sorted(presets))}")
    return experiment_from_mapping(name, apply_overrides(presets[name], overrides), defaults)


def pidmd_stride(n: int, max_dim: Optional[int]) -> int:
    """Smallest spatial stride dividing n that brings the dimension to at most max_dim."""
    if max_dim is None or n <= max_dim:
        return 1
    for stride in range(math.ceil(n / max_dim), n + 1):
        if n % stride == 0:
            return stride
    return n
