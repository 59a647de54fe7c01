"""
Discrete mass and energy of a wave function on a periodic grid.
"""
import numpy as np
import scipy.fft

from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid, wavenumbers


def _check_length(u: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (grid.n,):
        raise ValidationError(f"State has shape {u.shape}, grid has {grid.n} points")
    return u


def mass(u, grid: SpatialGrid) -> float:
    """
    h * sum |u_j|^2 (rectangle rule, exact for trigonometric data under periodicity).
    """
    u = _check_length(u, grid)
    return float(grid.h * np.sum(np.abs(u) ** 2))


def spectral_gradient(u: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Fourier derivative of a periodic grid function."""
    return scipy.fft.ifft(1j * wavenumbers(grid) * scipy.fft.fft(u))


def energy(u, grid: SpatialGrid, eps: float, potential: PotentialSpec) -> float:
    """
    h * sum [ (eps^2 / 2) |(grad u)_j|^2 + V(x_j) |u_j|^2 ] with a Fourier gradient.
    """
    u = _check_length(u, grid)
    gradient = spectral_gradient(u, grid)
    density = 0.5 * eps ** 2 * np.abs(gradient) ** 2 + potential.evaluate(grid) * np.abs(u) ** 2
    return float(grid.h * np.sum(density))
