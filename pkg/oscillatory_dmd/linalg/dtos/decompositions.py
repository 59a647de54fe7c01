from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TruncatedSvd:
    """
    Leading singular triplets of a matrix, M ~ u @ diag(sigma) @ v^*.
    """
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    rank: int
    tol: float

    def reconstruct(self) -> np.ndarray:
        """
        Rebuilds the rank-r approximation u diag(sigma) v^*.
        :return: The approximated matrix.
        """
        return (self.u * self.sigma) @ self.v.conj().T


@dataclass(frozen=True)
class HermitianEig:
    """
    Eigendecomposition H = w @ diag(eigenvalues) @ w^* with real eigenvalues sorted descending.
    """
    w: np.ndarray
    eigenvalues: np.ndarray

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]
