import logging
from dataclasses import replace

import numpy as np

from oscillatory_dmd.diagnostics.dtos.noise_spec import NoiseSpec
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

logger = logging.getLogger(__name__)

NOISE_ALGORITHM = "numpy.random.Philox"


def noise_generator(seed: int) -> np.random.Generator:
    """Counter-based generator used for every seeded draw."""
    return np.random.Generator(np.random.Philox(seed))


def add_noise(snapshots: SnapshotMatrix, spec: NoiseSpec) -> SnapshotMatrix:
    """
    Adds eta = (sigma / sqrt(2)) (eta_1 + i eta_2) to every entry, eta_1 and eta_2 independent standard normals.
    Real parts are drawn for the whole matrix first, then imaginary parts, both in row-major order.
    """
    if spec.sigma == 0:
        return replace(snapshots, data=snapshots.data.copy())

    rng = noise_generator(spec.seed)
    shape = snapshots.data.shape
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    logger.info(f"Adding complex Gaussian noise sigma={spec.sigma:g} (seed {spec.seed}) to a {shape[0]} x {shape[1]} matrix")
    return replace(snapshots, data=snapshots.data + spec.sigma / np.sqrt(2) * (real + 1j * imag))
