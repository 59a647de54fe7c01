"""Shared fixtures: seeded generators, small toy systems and short reference trajectories."""
import numpy as np
import pytest

from oscillatory_dmd.diagnostics.dtos.toy_spec import ToySpec
from oscillatory_dmd.diagnostics.toy import toy_generate
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid
from oscillatory_dmd.solver.dtos.solver_config import SolverConfig
from oscillatory_dmd.solver.dtos.wkb_spec import WkbSpec
from oscillatory_dmd.solver.strang import simulate
from oscillatory_dmd.solver.wkb import gaussian_density, quadratic_phase, wkb_initial


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def cn_recurrence(a: np.ndarray, x0: np.ndarray, tau: float, steps: int) -> np.ndarray:
    """Exact Crank-Nicolson trajectory (I + i tau A / 2) x_{k+1} = (I - i tau A / 2) x_k."""
    identity = np.eye(a.shape[0])
    step = np.linalg.solve(identity + 0.5j * tau * a, identity - 0.5j * tau * a)
    data = np.empty((a.shape[0], steps + 1), dtype=np.complex128)
    data[:, 0] = x0
    for k in range(steps):
        data[:, k + 1] = step @ data[:, k]
    return data


@pytest.fixture
def toy():
    """Five unit-modulus modes in C^32, 21 snapshots."""
    spec = ToySpec(n=32, r=5, thetas=[0.3, -0.7, 1.1, 2.0, -2.5], b=[1.0, 0.8, 1.2, 0.5, 0.9], m=20, seed=7)
    return toy_generate(spec, tau=0.1)


@pytest.fixture
def forward_wave_config():
    """Constant-potential forward wave on [0, 2] with 200 points, 100 snapshots."""
    return SolverConfig(
        grid=SpatialGrid(0.0, 2.0, 200),
        eps=1e-2,
        potential=PotentialSpec.constant(10.0),
        tau_e=1e-2,
        steps=99,
    )


def forward_wave_initial(grid: SpatialGrid, eps: float) -> np.ndarray:
    spec = WkbSpec(
        n0=lambda x: gaussian_density(x, center=1.0, width=25.0),
        s0=lambda x: quadratic_phase(x, a=0.0, b=2.0),
        eps=eps,
    )
    return wkb_initial(spec, grid)


@pytest.fixture
def forward_wave(forward_wave_config):
    cfg = forward_wave_config
    return simulate(forward_wave_initial(cfg.grid, cfg.eps), cfg)
