"""
Classical (projected) DMD: x_k ~ Phi Lambda^k b.
"""
import logging
import warnings

import numpy as np
import scipy.linalg

from oscillatory_dmd.dmd.dtos.models import ClassicalDmdModel
from oscillatory_dmd.dmd.spectral import principal_log, stable_power, stable_power_table
from oscillatory_dmd.errors import DegenerateDataError, UndefinedFrequencyWarning, ValidationError
from oscillatory_dmd.linalg.kernels import DEFAULT_TOL, as_complex_vector, least_squares_apply, truncated_svd
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

logger = logging.getLogger(__name__)


def frequencies(eigenvalues: np.ndarray, tau: float) -> np.ndarray:
    """
    omega = -i ln(lambda) / tau with the principal logarithm; NaN where lambda = 0.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    zero = eigenvalues == 0
    omega = np.full(eigenvalues.shape, np.nan + 1j * np.nan, dtype=np.complex128)
    omega[~zero] = -1j * principal_log(eigenvalues[~zero]) / tau
    if np.any(zero):
        message = f"{int(zero.sum())} DMD eigenvalue(s) are exactly zero; their frequencies are undefined (NaN)."
        logger.warning(message)
        warnings.warn(message, UndefinedFrequencyWarning, stacklevel=2)
    return omega


def fit_classical(snapshots: SnapshotMatrix, tol: float = DEFAULT_TOL) -> ClassicalDmdModel:
    """
    Classical DMD from the shifted pair X1 = [x_0..x_{m-1}], X2 = [x_1..x_m].

    :param snapshots: Training snapshots.
    :param tol: Relative singular value cutoff for the SVD of X1.
    :return: Modes sorted by eigenvalue modulus (descending), then phase.
    :raises: DegenerateDataError: If X1 has numerical rank 0.
    """
    if snapshots.columns < 2:
        raise ValidationError(f"Classical DMD needs at least 2 snapshots, got {snapshots.columns}")
    x = snapshots.data
    x1, x2 = x[:, :-1], x[:, 1:]

    svd = truncated_svd(x1, tol)
    if svd.rank == 0:
        raise DegenerateDataError("Degenerate data: the snapshot matrix X1 has numerical rank 0")

    lifted = (x2 @ svd.v) / svd.sigma
    reduced = svd.u.conj().T @ lifted
    eigenvalues, w = scipy.linalg.eig(reduced)

    order = np.lexsort((np.angle(eigenvalues), -np.abs(eigenvalues)))
    eigenvalues, w = eigenvalues[order], w[:, order]
    phi = lifted @ w
    b = least_squares_apply(phi, x[:, 0])

    logger.info(f"Classical DMD fitted with rank {svd.rank}, max |lambda| = {np.abs(eigenvalues).max():.6g}")
    return ClassicalDmdModel(phi=phi, eigenvalues=eigenvalues, b=b, tau=snapshots.tau,
                             omega=frequencies(eigenvalues, snapshots.tau))


def predict_classical(model: ClassicalDmdModel, steps: int) -> np.ndarray:
    """
    Phi diag(lambda^k) b, the powers taken with stable_power.
    """
    if steps < 0:
        raise ValidationError(f"Prediction step must be nonnegative, got {steps}")
    return model.phi @ (stable_power(model.eigenvalues, steps) * model.b)


def classical_trajectory(model: ClassicalDmdModel, steps: int, x0=None) -> np.ndarray:
    """
    Predictions for k = 0..steps. When x0 is given, the amplitudes are re-projected as b = Phi^+ x0.
    """
    if steps < 0:
        raise ValidationError(f"Prediction horizon must be nonnegative, got {steps}")
    amplitudes = model.b if x0 is None else least_squares_apply(model.phi, as_complex_vector(x0, "x0"))
    table = stable_power_table(model.eigenvalues, np.arange(steps + 1))
    return model.phi @ (table * amplitudes[:, None])
