"""
Crank-Nicolson (CN) and semi-implicit (SI) DMD: Hermitian-constrained operator fits with
model order reduction and unit-modulus spectral prediction.
"""
import logging
from functools import partial
from multiprocessing.pool import ThreadPool
from typing import Optional

import numpy as np

from oscillatory_dmd.dmd.dtos.models import ReducedHermitianModel, Scheme
from oscillatory_dmd.dmd.spectral import spectral_factors, stable_power, stable_power_table
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.linalg.kernels import DEFAULT_TOL, as_complex_vector, hermitian_eig
from oscillatory_dmd.procrustes.solvers import solve_hermitian
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

logger = logging.getLogger(__name__)


def build_cn_matrices(snapshots: SnapshotMatrix) -> tuple[np.ndarray, np.ndarray]:
    """
    Midpoint averages and scaled forward differences,
    X1[:, k] = (x_k + x_{k+1}) / 2 and X2[:, k] = i (x_{k+1} - x_k) / tau for k = 0..m-1.
    """
    if snapshots.columns < 2:
        raise ValidationError(f"CN-DMD needs at least 2 snapshots, got {snapshots.columns}")
    x = snapshots.data
    x1 = (x[:, :-1] + x[:, 1:]) / 2
    x2 = 1j * (x[:, 1:] - x[:, :-1]) / snapshots.tau
    return x1, x2


def build_si_matrices(snapshots: SnapshotMatrix) -> tuple[np.ndarray, np.ndarray]:
    """
    Two-step averages and central differences,
    X1[:, k-1] = (x_{k+1} + x_{k-1}) / 2 and X2[:, k-1] = i (x_{k+1} - x_{k-1}) / (2 tau) for k = 1..m-1.
    """
    if snapshots.columns < 3:
        raise ValidationError(f"SI-DMD needs at least 3 snapshots, got {snapshots.columns}")
    x = snapshots.data
    x1 = (x[:, 2:] + x[:, :-2]) / 2
    x2 = 1j * (x[:, 2:] - x[:, :-2]) / (2 * snapshots.tau)
    return x1, x2


def fit_structured(snapshots: SnapshotMatrix, scheme: Scheme, tol: float = DEFAULT_TOL) -> ReducedHermitianModel:
    """
    Fits a reduced Hermitian operator to the scheme's augmented matrices.
    The Hermitian Procrustes core is truncated to the numerical rank r of X1 at tol, diagonalized and
    lifted to the basis U = U_X1 W. Rank-0 data give an r = 0 model that predicts the identity map.

    :param snapshots: Training snapshots x_0..x_m.
    :param scheme: Scheme.CN or Scheme.SI.
    :param tol: Relative singular value cutoff.
    :return: The fitted model.
    """
    builder = build_cn_matrices if scheme is Scheme.CN else build_si_matrices
    x1, x2 = builder(snapshots)
    solution = solve_hermitian(x1, x2, tol)
    eig = hermitian_eig(solution.h)
    basis = solution.u @ eig.w

    if eig.size == 0:
        logger.warning(f"{scheme.name}-DMD training data have numerical rank 0; the model predicts the identity map.")
    else:
        logger.info(f"{scheme.name}-DMD fitted with rank {eig.size}, "
                    f"eigenvalues in [{eig.eigenvalues[-1]:.6g}, {eig.eigenvalues[0]:.6g}]")

    return ReducedHermitianModel(
        u=basis,
        eigenvalues=eig.eigenvalues,
        d=spectral_factors(eig.eigenvalues, snapshots.tau, scheme),
        tau=snapshots.tau,
        scheme=scheme,
    )


def _check_state(model: ReducedHermitianModel, state, name: str) -> np.ndarray:
    state = as_complex_vector(state, name)
    if state.shape[0] != model.n:
        raise ValidationError(f"{name} has length {state.shape[0]}, model dimension is {model.n}")
    return state


def _stream(model: ReducedHermitianModel, x0: np.ndarray, x1: Optional[np.ndarray], step: int) -> tuple[np.ndarray, int]:
    """
    Start state and spectral power for a target step. SI advances two steps per factor,
    with even steps evolving from x0 and odd steps from x1.
    """
    if model.scheme is Scheme.CN:
        return x0, step
    if step % 2 == 0:
        return x0, step // 2
    if x1 is None:
        raise ValidationError(f"SI-DMD prediction of odd step {step} needs the second initial state x1")
    return x1, (step - 1) // 2


def predict_structured(model: ReducedHermitianModel, x0, x1=None, steps: int = 0) -> np.ndarray:
    """
    x_N = U diag(d^p) U^* s + (I - U U^*) s, where (s, p) = (x0, N) for CN, and for SI
    (x0, N/2) at even N or (x1, (N-1)/2) at odd N.

    :param model: A fitted CN or SI model.
    :param x0: Initial state.
    :param x1: Second initial state, needed by SI for odd steps.
    :param steps: Target step N >= 0.
    :return: The predicted state. N = 0 returns a copy of x0.
    """
    if steps < 0:
        raise ValidationError(f"Prediction step must be nonnegative, got {steps}")
    x0 = _check_state(model, x0, "x0")
    if x1 is not None:
        x1 = _check_state(model, x1, "x1")
    if steps == 0:
        return x0.copy()

    start, power = _stream(model, x0, x1, steps)
    z = model.u.conj().T @ start
    return model.u @ (stable_power(model.d, power) * z) + (start - model.u @ z)


def predict_block(model: ReducedHermitianModel, x0, x1=None, steps: int = 1) -> np.ndarray:
    """
    All predictions x_1..x_N as the columns of one n x N matrix.
    The projection U^* s and the complement s - U U^* s are computed once per stream; the
    reduced coefficients of every step are Hadamard products d^p * z, lifted by one product with U.
    """
    if steps < 0:
        raise ValidationError(f"Prediction horizon must be nonnegative, got {steps}")
    x0 = _check_state(model, x0, "x0")
    if x1 is not None:
        x1 = _check_state(model, x1, "x1")

    result = np.empty((model.n, steps), dtype=np.complex128)
    targets = np.arange(1, steps + 1)
    if model.scheme is Scheme.CN:
        streams = [(x0, targets, targets)]
    else:
        even, odd = targets[targets % 2 == 0], targets[targets % 2 == 1]
        if odd.size and x1 is None:
            raise ValidationError("SI-DMD prediction of odd steps needs the second initial state x1")
        streams = [(x0, even, even // 2), (x1, odd, (odd - 1) // 2)]

    for start, columns, powers in streams:
        if columns.size == 0:
            continue
        z = model.u.conj().T @ start
        complement = start - model.u @ z
        table = stable_power_table(model.d, powers)
        result[:, columns - 1] = model.u @ (table * z[:, None]) + complement[:, None]
    return result


def predict_parallel(model: ReducedHermitianModel, x0, x1=None, steps: int = 1,
                     num_threads: Optional[int] = None, chunk_size: int = 1) -> np.ndarray:
    """
    Same result as predict_block, with each target step evaluated independently by predict_structured
    in a thread pool. Columns do not depend on the schedule.
    """
    if steps < 0:
        raise ValidationError(f"Prediction horizon must be nonnegative, got {steps}")
    if steps == 0:
        return np.zeros((model.n, 0), dtype=np.complex128)

    worker = partial(predict_structured, model, x0, x1)
    with ThreadPool(processes=num_threads) as pool:
        columns = pool.map(worker, range(1, steps + 1), chunksize=chunk_size)
    return np.column_stack(columns)


PREDICTION_MODES = ("block", "single", "parallel")


def structured_trajectory(model: ReducedHermitianModel, x0, x1=None, steps: int = 0, mode: str = "block",
                          num_threads: Optional[int] = None) -> np.ndarray:
    """
    Trajectory x_0..x_N (N + 1 columns), column 0 being x0 itself.

    :param mode: "block" (predict_block), "single" (one predict_structured call per step) or "parallel".
    """
    x0 = _check_state(model, x0, "x0")
    if mode == "block":
        tail = predict_block(model, x0, x1, steps)
    elif mode == "single":
        tail = np.zeros((model.n, 0), dtype=np.complex128) if steps == 0 else \
            np.column_stack([predict_structured(model, x0, x1, k) for k in range(1, steps + 1)])
    elif mode == "parallel":
        tail = predict_parallel(model, x0, x1, steps, num_threads)
    else:
        raise ValidationError(f"Unknown prediction mode '{mode}', expected one of {PREDICTION_MODES}")
    return np.column_stack([x0, tail])


def discretized_energy(model: ReducedHermitianModel, x) -> float:
    """
    E(x) = x^* A x = sum_j lambda_j |(U^* x)_j|^2; the complement of range(U) carries zero energy.
    """
    z = model.u.conj().T @ _check_state(model, x, "x")
    return float(np.sum(model.eigenvalues * np.abs(z) ** 2))
