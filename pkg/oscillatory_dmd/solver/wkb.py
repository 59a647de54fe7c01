"""
WKB initial data and the closed-form profiles used by the experiment presets.
"""
from functools import partial
from typing import Any, Dict

import numpy as np

from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.dtos.grid import SpatialGrid
from oscillatory_dmd.solver.dtos.wkb_spec import WkbSpec


def gaussian_density(x: np.ndarray, center: float, width: float) -> np.ndarray:
    """n0(x) = (exp(-width * (x - center)^2))^2"""
    return np.exp(-width * (x - center) ** 2) ** 2


def quadratic_phase(x: np.ndarray, a: float, b: float, scale: float = 1.0 / 50) -> np.ndarray:
    """S0(x) = -scale * (x - a)(x - b)"""
    return -scale * (x - a) * (x - b)


def logcosh_phase(x: np.ndarray, center: float, steepness: float = 5.0) -> np.ndarray:
    """S0(x) = -(1/steepness) * ln(exp(steepness (x - c)) + exp(-steepness (x - c)))"""
    return -np.logaddexp(steepness * (x - center), -steepness * (x - center)) / steepness


def constant_profile(x: np.ndarray, value: float) -> np.ndarray:
    return np.full(np.shape(x), float(value))


def wkb_initial(spec: WkbSpec, grid: SpatialGrid) -> np.ndarray:
    """
    Samples sqrt(n0(x_j)) * exp(i * s0(x_j) / eps) on the grid.

    :param spec: The WKB profiles.
    :param grid: The spatial grid.
    :return: Complex vector of length grid.n.
    :raises: ValidationError: If n0 is negative (or not finite) at any grid point.
    """
    x = grid.points
    density = np.asarray(spec.n0(x), dtype=np.float64)
    phase = np.asarray(spec.s0(x), dtype=np.float64)
    if density.shape != x.shape or phase.shape != x.shape:
        raise ValidationError("WKB profiles must return one value per grid point")
    if not np.all(np.isfinite(density)) or not np.all(np.isfinite(phase)):
        raise ValidationError("WKB profiles must be finite on the grid")
    if np.any(density < 0):
        raise ValidationError(f"n0 is negative at {int(np.count_nonzero(density < 0))} grid points")
    return np.sqrt(density) * np.exp(1j * phase / spec.eps)


def wkb_from_config(profile: Dict[str, Any], grid: SpatialGrid, eps: float) -> WkbSpec:
    """
    Builds a WkbSpec from a preset mapping such as
    {"density": "gaussian", "width": 25, "phase": "quadratic"}.
    Centers default to the domain midpoint (a + b) / 2.

    :raises: ValidationError: If a profile name is unknown.
    """
    center = 0.5 * (grid.a + grid.b)
    match profile.get("density", "gaussian"):
        case "gaussian":
            n0 = partial(gaussian_density, center=center, width=float(profile.get("width", 25.0)))
        case "constant":
            n0 = partial(constant_profile, value=float(profile.get("density_value", 1.0)))
        case other:
            raise ValidationError(f"Unknown density profile: {other}")

    match profile.get("phase", "quadratic"):
        case "quadratic":
            s0 = partial(quadratic_phase, a=grid.a, b=grid.b, scale=float(profile.get("phase_scale", 1.0 / 50)))
        case "logcosh":
            s0 = partial(logcosh_phase, center=center, steepness=float(profile.get("steepness", 5.0)))
        case "zero":
            s0 = partial(constant_profile, value=0.0)
        case other:
            raise ValidationError(f"Unknown phase profile: {other}")

    return WkbSpec(n0=n0, s0=s0, eps=eps)
