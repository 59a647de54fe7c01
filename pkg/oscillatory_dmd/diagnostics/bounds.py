"""
Training residuals, the CN training error bound, and the periodic finite-difference reference operator

    A_hat = -(eps / 2) D2 + diag(V) / eps,

D2 being the [1, -2, 1] / h^2 Laplacian with wraparound.
"""
import logging
from typing import Callable

import numpy as np

from oscillatory_dmd.diagnostics.dtos.bound_report import BoundReport
from oscillatory_dmd.dmd.dtos.models import ReducedHermitianModel, Scheme
from oscillatory_dmd.dmd.structured import structured_trajectory
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-10


def training_residuals(snapshots: SnapshotMatrix, apply_operator: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """
    ||l_k|| = ||i (x_{k+1} - x_k) / tau - A (x_{k+1} + x_k) / 2|| for k = 0..m-1.

    :param snapshots: Data x_0..x_m.
    :param apply_operator: Applies A to every column of a matrix.
    :return: Residual norms, length m.
    """
    if snapshots.columns < 2:
        raise ValidationError(f"Residuals need at least 2 snapshots, got {snapshots.columns}")
    x = snapshots.data
    difference = 1j * (x[:, 1:] - x[:, :-1]) / snapshots.tau
    residual = difference - apply_operator((x[:, 1:] + x[:, :-1]) / 2)
    return np.linalg.norm(residual, axis=0)


def check_training_bound(snapshots: SnapshotMatrix, model: ReducedHermitianModel) -> BoundReport:
    """
    Checks ||e_{k+1}|| <= tau * sum_{i<=k} ||l_i(A)|| + 1e-10 ||x_0|| over the training window, where
    e_k is the gap between data and the model's prediction started from the data's x_0.
    """
    if model.scheme is not Scheme.CN:
        raise ValidationError("The training error bound applies to CN-DMD models")
    if snapshots.n != model.n:
        raise ValidationError(f"Snapshot dimension {snapshots.n} does not match model dimension {model.n}")

    x = snapshots.data
    pred = structured_trajectory(model, x[:, 0], steps=snapshots.m)
    lhs = np.linalg.norm(x[:, 1:] - pred[:, 1:], axis=0)
    residuals = training_residuals(snapshots, model.apply_operator)
    rhs = snapshots.tau * np.cumsum(residuals) + BOUND_SLACK * np.linalg.norm(x[:, 0])

    margins = rhs - lhs
    worst = int(np.argmin(margins))
    report = BoundReport(lhs=lhs, rhs=rhs, worst_k=worst + 1, margin=float(margins[worst]))
    if not report.holds:
        logger.error(f"Training error bound violated at step {report.worst_k} by {-report.margin:.3e}")
    return report


def _laplacian(n: int, h: float) -> np.ndarray:
    identity = np.eye(n)
    return (np.roll(identity, 1, axis=1) - 2 * identity + np.roll(identity, -1, axis=1)) / h ** 2


def build_reference_operator(grid: SpatialGrid, eps: float, potential: PotentialSpec) -> np.ndarray:
    """
    Dense A_hat as an n x n complex matrix, exactly Hermitian (real symmetric).
    """
    operator = -(eps / 2) * _laplacian(grid.n, grid.h) + np.diag(potential.evaluate(grid) / eps)
    return operator.astype(np.complex128)


def apply_reference_operator(x: np.ndarray, grid: SpatialGrid, eps: float, potential: PotentialSpec) -> np.ndarray:
    """
    Matrix-free A_hat x for a state or for the columns of a matrix.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != grid.n:
        raise ValidationError(f"State has {x.shape[0]} rows, grid has {grid.n} points")
    potential_values = potential.evaluate(grid)
    if x.ndim == 2:
        potential_values = potential_values[:, None]
    laplacian = (np.roll(x, -1, axis=0) - 2 * x + np.roll(x, 1, axis=0)) / grid.h ** 2
    return -(eps / 2) * laplacian + potential_values * x / eps


def reference_energy(x: np.ndarray, grid: SpatialGrid, eps: float, potential: PotentialSpec) -> float:
    """Re(x^* A_hat x)."""
    return float(np.real(np.vdot(x, apply_reference_operator(x, grid, eps, potential))))


def prediction_bound_terms(model: ReducedHermitianModel, reference: np.ndarray, u0) -> tuple[float, float]:
    """
    Spectral-norm gap ||A - A_hat||_2 between the fitted and a reference operator, and ||u0||_2.
    Forms A densely, so only meant for small n.
    """
    if reference.shape != (model.n, model.n):
        raise ValidationError(f"Reference operator shape {reference.shape} does not match model dimension {model.n}")
    operator = (model.u * model.eigenvalues) @ model.u.conj().T
    return float(np.linalg.norm(operator - reference, ord=2)), float(np.linalg.norm(u0))
