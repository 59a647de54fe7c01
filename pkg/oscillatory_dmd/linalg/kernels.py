"""
Dense complex linear-algebra primitives with fixed truncation and ordering semantics.
All functions are pure: inputs are never modified and results share no state.
"""
import logging
import warnings

import numpy as np
import scipy.linalg

from oscillatory_dmd.errors import RankDeficiencyWarning, ValidationError
from oscillatory_dmd.linalg.dtos.decompositions import HermitianEig, TruncatedSvd

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
HERMITIAN_RTOL = 1e-10
LSTSQ_RTOL = 1e-12


def as_complex_matrix(matrix, name: str = "matrix") -> np.ndarray:
    """
    Validates and converts input to a two-dimensional complex128 array.

    :param matrix: Array-like input.
    :param name: Name used in error messages.
    :return: A complex128 array with ndim == 2.
    :raises: ValidationError: If the input is not two-dimensional or has non-finite entries.
    """
    array = np.asarray(matrix, dtype=np.complex128)
    if array.ndim != 2:
        raise ValidationError(f"{name} must be two-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{name} contains non-finite entries")
    return array


def as_complex_vector(vector, name: str = "vector") -> np.ndarray:
    """
    Validates and converts input to a one-dimensional complex128 array.
    """
    array = np.asarray(vector, dtype=np.complex128)
    if array.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{name} contains non-finite entries")
    return array


def _svd(matrix: np.ndarray, full_matrices: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # gesdd is fast but can fail to converge on some inputs; gesvd is the robust fallback
    try:
        return scipy.linalg.svd(matrix, full_matrices=full_matrices, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.warning("gesdd did not converge, retrying SVD with gesvd.")
        return scipy.linalg.svd(matrix, full_matrices=full_matrices, lapack_driver="gesvd")


def full_svd(matrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Full SVD, M = u @ Sigma @ vh with square u (n x n) and vh (m x m).
    :return: u, singular values (length min(n, m), non-increasing), vh.
    """
    matrix = as_complex_matrix(matrix)
    return _svd(matrix, full_matrices=True)


def truncated_svd(matrix, tol: float = DEFAULT_TOL) -> TruncatedSvd:
    """
    Truncated singular value decomposition.
    Keeps the leading r = max{i : sigma_i > tol * sigma_1} triplets. tol = 0 keeps the full
    economy SVD, the zero matrix has rank 0.

    :param matrix: An n x m complex matrix with finite entries.
    :param tol: Nonnegative relative cutoff.
    :return: The truncated factors.
    """
    matrix = as_complex_matrix(matrix)
    if not np.isfinite(tol) or tol < 0:
        raise ValidationError(f"tol must be finite and nonnegative, got {tol}")
    n, m = matrix.shape

    if matrix.size == 0 or not np.any(matrix):
        return TruncatedSvd(
            u=np.zeros((n, 0), dtype=np.complex128),
            sigma=np.zeros(0),
            v=np.zeros((m, 0), dtype=np.complex128),
            rank=0,
            tol=tol,
        )

    u, sigma, vh = _svd(matrix, full_matrices=False)
    rank = sigma.shape[0] if tol == 0 else int(np.count_nonzero(sigma > tol * sigma[0]))
    return TruncatedSvd(
        u=u[:, :rank],
        sigma=sigma[:rank].copy(),
        v=vh[:rank, :].conj().T,
        rank=rank,
        tol=tol,
    )


def hermitian_eig(matrix) -> HermitianEig:
    """
    Eigendecomposition of a Hermitian matrix. The input is symmetrized as (H + H^*)/2
    before factorization, so the returned eigenvalues are exactly real.

    :param matrix: A square matrix with ||H - H^*||_F <= 1e-10 ||H||_F.
    :return: Unitary eigenvectors and real eigenvalues sorted descending.
    :raises: ValidationError: If the input is not square or grossly non-Hermitian.
    """
    matrix = as_complex_matrix(matrix)
    n, m = matrix.shape
    if n != m:
        raise ValidationError(f"Hermitian eigendecomposition needs a square matrix, got {matrix.shape}")

    scale = np.linalg.norm(matrix)
    if scale == 0:
        return HermitianEig(w=np.eye(n, dtype=np.complex128), eigenvalues=np.zeros(n))

    asymmetry = np.linalg.norm(matrix - matrix.conj().T)
    if asymmetry > HERMITIAN_RTOL * scale:
        raise ValidationError(
            f"Matrix is not Hermitian: ||H - H^*||_F = {asymmetry:.3e} exceeds {HERMITIAN_RTOL:g} * ||H||_F"
        )

    symmetrized = (matrix + matrix.conj().T) / 2
    eigenvalues, w = scipy.linalg.eigh(symmetrized)
    # eigh sorts ascending
    return HermitianEig(w=np.ascontiguousarray(w[:, ::-1]), eigenvalues=np.ascontiguousarray(eigenvalues[::-1]))


def least_squares_apply(phi, y) -> np.ndarray:
    """
    Minimal-norm least-squares solution b = phi^+ y.
    Singular values at or below 1e-12 * sigma_1 are discarded; if any are, a
    RankDeficiencyWarning is emitted.

    :param phi: An n x r matrix.
    :param y: A vector of length n.
    :return: The coefficient vector of length r.
    """
    phi = as_complex_matrix(phi, "phi")
    y = as_complex_vector(y, "y")
    if phi.shape[0] != y.shape[0]:
        raise ValidationError(f"Dimension mismatch: phi has {phi.shape[0]} rows, y has length {y.shape[0]}")
    if phi.shape[1] == 0:
        return np.zeros(0, dtype=np.complex128)

    u, sigma, vh = _svd(phi, full_matrices=False)
    if sigma[0] == 0:
        message = "Least-squares matrix is zero; returning the zero solution."
        logger.warning(message)
        warnings.warn(message, RankDeficiencyWarning, stacklevel=2)
        return np.zeros(phi.shape[1], dtype=np.complex128)

    keep = sigma > LSTSQ_RTOL * sigma[0]
    if not np.all(keep):
        message = (f"Least-squares matrix is rank-deficient: kept {int(keep.sum())} of {sigma.shape[0]} "
                   f"singular values above {LSTSQ_RTOL:g} * sigma_1.")
        logger.warning(message)
        warnings.warn(message, RankDeficiencyWarning, stacklevel=2)

    coefficients = (u[:, keep].conj().T @ y) / sigma[keep]
    return vh[keep, :].conj().T @ coefficients
