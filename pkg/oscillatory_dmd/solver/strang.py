"""
Strang-splitting Fourier pseudospectral integrator for

    i eps u_t = -(eps^2 / 2) u_xx + V(x) u + beta |u|^2 u

with periodic boundary conditions. Every sub-step is a pointwise unit-modulus multiply
or a unitary transform, so the discrete mass is conserved to roundoff.
"""
import logging

import numpy as np
import scipy.fft
from tqdm import tqdm

from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.dtos.grid import wavenumbers
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix
from oscillatory_dmd.solver.dtos.solver_config import SolverConfig

logger = logging.getLogger(__name__)


class StrangPropagator:
    """
    A configured Strang stepper. The kinetic multiplier and, for the linear equation,
    the potential half-step multiplier are computed once at construction.
    """

    def __init__(self, cfg: SolverConfig):
        """
        :param cfg: Solver settings; the fine grid must have an even number of points.
        """
        if cfg.grid.n % 2 != 0:
            raise ValidationError(f"Strang splitting needs an even number of grid points, got n={cfg.grid.n}")
        self.cfg = cfg
        self.n = cfg.grid.n
        self.potential = cfg.potential.evaluate(cfg.grid)
        xi = wavenumbers(cfg.grid)
        self.kinetic_factor = np.exp(-0.5j * cfg.eps * cfg.tau_e * xi ** 2)
        self._linear_half_step = np.exp(-0.5j * cfg.tau_e * self.potential / cfg.eps)

    def _half_step(self, u: np.ndarray) -> np.ndarray:
        # |u| is unchanged by the multiply, so evaluating beta|u|^2 on the input is exact
        if self.cfg.beta == 0:
            return self._linear_half_step * u
        phase = self.potential + self.cfg.beta * np.abs(u) ** 2
        return np.exp(-0.5j * self.cfg.tau_e * phase / self.cfg.eps) * u

    def step(self, u: np.ndarray) -> np.ndarray:
        """
        Advances one fine time step tau_e.
        :param u: State of length n.
        :return: The new state.
        """
        u = self._half_step(u)
        u = scipy.fft.ifft(self.kinetic_factor * scipy.fft.fft(u))
        return self._half_step(u)


def strang_step(u, cfg: SolverConfig) -> np.ndarray:
    """
    One Strang step: potential half-step, exact kinetic step in Fourier space, potential half-step.

    :param u: Complex state of length cfg.grid.n.
    :param cfg: Solver settings.
    :return: The state after tau_e.
    :raises: ValidationError: On an odd grid size or a length mismatch.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (cfg.grid.n,):
        raise ValidationError(f"State has shape {u.shape}, grid has {cfg.grid.n} points")
    return StrangPropagator(cfg).step(u)


def simulate(u0, cfg: SolverConfig, show_progress: bool = False) -> SnapshotMatrix:
    """
    Integrates cfg.steps Strang steps from u0 and downsamples the trajectory.
    Kept time indices are 0, s, 2s, ...; kept grid points coincide with the coarse grid.

    :param u0: Initial state on the fine grid.
    :param cfg: Solver settings.
    :param show_progress: Show a tqdm progress bar over the fine steps.
    :return: Snapshots with tau = tau_e * downsample_time on the coarse grid.
    :raises: ValidationError: If strides do not divide the step count or the grid size.
    """
    cfg.validate_strides()
    u = np.asarray(u0, dtype=np.complex128)
    if u.shape != (cfg.grid.n,):
        raise ValidationError(f"Initial state has shape {u.shape}, fine grid has {cfg.grid.n} points")

    propagator = StrangPropagator(cfg)
    s_time, s_space = cfg.downsample_time, cfg.downsample_space
    kept = cfg.steps // s_time + 1
    data = np.empty((cfg.grid.n // s_space, kept), dtype=np.complex128)
    data[:, 0] = u[s_space - 1::s_space]

    logger.info(f"Simulating {cfg.steps} Strang steps on {cfg.grid.n} points (eps={cfg.eps:g}, beta={cfg.beta:g}).")
    for step in tqdm(range(1, cfg.steps + 1), disable=not show_progress, desc="strang"):
        u = propagator.step(u)
        if step % s_time == 0:
            data[:, step // s_time] = u[s_space - 1::s_space]

    return SnapshotMatrix(data=data, tau=cfg.tau, grid=cfg.grid.coarsen(s_space), eps=cfg.eps)
