"""
Physics-informed DMD with a unitary constraint: x_{k+1} ~ L x_k, L from the unitary Procrustes problem.
The full n x n operator is stored and applied directly.
"""
import logging
import warnings

import numpy as np

from oscillatory_dmd.dmd.dtos.models import UnitaryModel
from oscillatory_dmd.errors import LargeProblemWarning, ValidationError
from oscillatory_dmd.linalg.kernels import as_complex_vector
from oscillatory_dmd.procrustes.solvers import DEFAULT_RANK_RTOL, solve_unitary
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

logger = logging.getLogger(__name__)

PIDMD_WARN_DIM = 5000


def fit_pidmd(snapshots: SnapshotMatrix, rank_rtol: float = DEFAULT_RANK_RTOL,
              warn_dim: int = PIDMD_WARN_DIM) -> UnitaryModel:
    """
    :param snapshots: Training snapshots, at least 2 columns.
    :param rank_rtol: Relative rank threshold of X2 X1^* below which the solution is reported non-unique.
    :param warn_dim: Dimensions above this emit a LargeProblemWarning (the solve costs O(n^3)).
    """
    if snapshots.columns < 2:
        raise ValidationError(f"piDMD needs at least 2 snapshots, got {snapshots.columns}")
    if snapshots.n > warn_dim:
        message = (f"piDMD requested on {snapshots.n}-dimensional data: the full O(n^3) unitary solve "
                   f"and O(n^2) storage will be used.")
        logger.warning(message)
        warnings.warn(message, LargeProblemWarning, stacklevel=2)

    x = snapshots.data
    operator = solve_unitary(x[:, :-1], x[:, 1:], rank_rtol)
    logger.info(f"piDMD fitted a {snapshots.n} x {snapshots.n} unitary operator")
    return UnitaryModel(operator=operator, tau=snapshots.tau)


def _check_state(model: UnitaryModel, x0) -> np.ndarray:
    x0 = as_complex_vector(x0, "x0")
    if x0.shape[0] != model.n:
        raise ValidationError(f"x0 has length {x0.shape[0]}, model dimension is {model.n}")
    return x0


def predict_pidmd(model: UnitaryModel, x0, steps: int) -> np.ndarray:
    """L^k x0 by k matrix-vector products."""
    if steps < 0:
        raise ValidationError(f"Prediction step must be nonnegative, got {steps}")
    state = _check_state(model, x0).copy()
    for _ in range(steps):
        state = model.operator @ state
    return state


def pidmd_trajectory(model: UnitaryModel, x0, steps: int) -> np.ndarray:
    if steps < 0:
        raise ValidationError(f"Prediction horizon must be nonnegative, got {steps}")
    result = np.empty((model.n, steps + 1), dtype=np.complex128)
    result[:, 0] = _check_state(model, x0)
    for k in range(steps):
        result[:, k + 1] = model.operator @ result[:, k]
    return result
