"""
Closed-form solvers for the constrained least-squares problems

    min ||X2 - L X1||_F  over unitary L      (orthogonal Procrustes, Schönemann)
    min ||X2 - A X1||_F  over Hermitian A    (Hermitian Procrustes, Higham)
"""
import logging
import warnings

import numpy as np

from oscillatory_dmd.errors import NonUniqueSolutionWarning, ValidationError
from oscillatory_dmd.linalg.kernels import as_complex_matrix, full_svd, truncated_svd
from oscillatory_dmd.procrustes.dtos.solution import HermitianProcrustesSolution

logger = logging.getLogger(__name__)

DEFAULT_RANK_RTOL = 1e-10


def _check_pair(x1, x2) -> tuple[np.ndarray, np.ndarray]:
    x1 = as_complex_matrix(x1, "X1")
    x2 = as_complex_matrix(x2, "X2")
    if x1.shape != x2.shape:
        raise ValidationError(f"X1 and X2 must have the same shape, got {x1.shape} and {x2.shape}")
    return x1, x2


def _polar_factor(matrix: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition (nearest unitary matrix)."""
    if matrix.size == 0:
        return matrix.copy()
    u, _, vh = full_svd(matrix)
    return u @ vh


def solve_unitary(x1, x2, rank_rtol: float = DEFAULT_RANK_RTOL) -> np.ndarray:
    """
    Unitary Procrustes solution L = U V^* from the full SVD of X2 X1^*.

    The minimizer is unique only when X2 X1^* has full rank. Otherwise the part of L acting on the
    null space of X2 X1^* is free; it is fixed here as the unitary closest to the identification
    of the two orthogonal complements, which is the orthogonal projector when the range and
    co-range coincide (L = Phi Lambda Phi^* + Phi_perp Phi_perp^* for unitary-generated data).

    :param x1: n x m snapshot matrix.
    :param x2: n x m advanced snapshot matrix.
    :param rank_rtol: Singular values of X2 X1^* at or below rank_rtol * sigma_1 count as zero.
    :return: An n x n unitary matrix.
    """
    x1, x2 = _check_pair(x1, x2)
    if not np.isfinite(rank_rtol) or rank_rtol < 0:
        raise ValidationError(f"rank_rtol must be finite and nonnegative, got {rank_rtol}")
    n = x1.shape[0]
    cross = x2 @ x1.conj().T
    u, sigma, vh = full_svd(cross)

    rank = 0 if sigma[0] == 0 else int(np.count_nonzero(sigma > rank_rtol * sigma[0]))
    if rank == n:
        return u @ vh

    message = (f"X2 X1^* has numerical rank {rank} < n = {n}; the unitary Procrustes solution is not unique. "
               f"Completing on the null space with the rotation closest to the identity.")
    logger.warning(message)
    warnings.warn(message, NonUniqueSolutionWarning, stacklevel=2)

    v = vh.conj().T
    u_range, v_range = u[:, :rank], v[:, :rank]
    u_null, v_null = u[:, rank:], v[:, rank:]
    completion = _polar_factor(u_null.conj().T @ v_null)
    return u_range @ v_range.conj().T + u_null @ completion @ v_null.conj().T


def _hermitian_core(c: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """
    H_ij = (sigma_i conj(C_ji) + sigma_j C_ij) / (sigma_i^2 + sigma_j^2), or 0 when the denominator vanishes.
    H_ji is the exact conjugate of H_ij: both are formed from the same two products.
    """
    numerator = sigma[:, None] * c.conj().T + sigma[None, :] * c
    denominator = sigma[:, None] ** 2 + sigma[None, :] ** 2
    h = np.zeros_like(numerator)
    nonzero = denominator != 0
    h[nonzero] = numerator[nonzero] / denominator[nonzero]
    return h


def solve_hermitian(x1, x2, tol: float = 0.0) -> HermitianProcrustesSolution:
    """
    Hermitian Procrustes solution A = U H U^* with U the left singular vectors of X1.

    tol = 0 returns the full n x n factors, with C = [U^* X2 V, 0] zero-padded to n columns and
    singular values at roundoff level (<= max(n, m) * eps_mach * sigma_1) treated as exact zeros.
    tol > 0 returns the leading r x r block of H and the r leading columns of U, r being the
    numerical rank of X1 at tol; only the r x r block of C is formed.

    :param x1: n x m matrix.
    :param x2: n x m matrix.
    :param tol: Relative truncation tolerance.
    :return: The (possibly truncated) solution.
    """
    x1, x2 = _check_pair(x1, x2)
    if not np.isfinite(tol) or tol < 0:
        raise ValidationError(f"tol must be finite and nonnegative, got {tol}")
    n, m = x1.shape

    if tol > 0:
        svd = truncated_svd(x1, tol)
        c = svd.u.conj().T @ x2 @ svd.v
        return HermitianProcrustesSolution(u=svd.u, h=_hermitian_core(c, svd.sigma), sigma=svd.sigma, truncated=True)

    u, sigma, vh = full_svd(x1)
    k = sigma.shape[0]
    floor = max(n, m) * np.finfo(np.float64).eps * (sigma[0] if k else 0.0)
    sigma = np.where(sigma > floor, sigma, 0.0)

    sigma_full = np.zeros(n)
    sigma_full[:k] = sigma
    c = np.zeros((n, n), dtype=np.complex128)
    c[:, :k] = u.conj().T @ x2 @ vh[:k, :].conj().T
    return HermitianProcrustesSolution(u=u, h=_hermitian_core(c, sigma_full), sigma=sigma_full, truncated=False)


def assemble_full(solution: HermitianProcrustesSolution) -> np.ndarray:
    """
    Forms A = U H U^* from an untruncated solution.
    :raises: ValidationError: For truncated solutions, whose product is not the full minimizer.
    """
    if solution.truncated:
        raise ValidationError("Cannot assemble the full operator from a truncated Hermitian Procrustes solution")
    a = solution.u @ solution.h @ solution.u.conj().T
    return (a + a.conj().T) / 2
