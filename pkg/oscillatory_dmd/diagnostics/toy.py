import numpy as np
import scipy.linalg

from oscillatory_dmd.diagnostics.dtos.toy_spec import ToyFactors, ToySpec
from oscillatory_dmd.diagnostics.noise import noise_generator
from oscillatory_dmd.dmd.spectral import stable_power_table
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix


def toy_generate(spec: ToySpec, tau: float = 1.0) -> tuple[SnapshotMatrix, ToyFactors]:
    """
    Snapshots x_0..x_m of a unitary system restricted to r orthonormal modes.
    The modes are the Q factor of a seeded complex Gaussian n x r matrix.

    :raises: ValidationError: If two phases coincide.
    """
    if np.unique(spec.thetas).shape[0] != spec.r:
        raise ValidationError("Toy model phases must be mutually distinct")

    rng = noise_generator(spec.seed)
    gaussian = rng.standard_normal((spec.n, spec.r)) + 1j * rng.standard_normal((spec.n, spec.r))
    phi, _ = scipy.linalg.qr(gaussian, mode="economic")
    eigenvalues = np.exp(1j * spec.thetas)

    dynamics = stable_power_table(eigenvalues, np.arange(spec.m + 1))
    data = phi @ (spec.b[:, None] * dynamics)
    return SnapshotMatrix(data=data, tau=tau), ToyFactors(phi=phi, eigenvalues=eigenvalues, b=spec.b.copy())
