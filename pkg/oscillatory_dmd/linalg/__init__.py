from oscillatory_dmd.linalg.dtos.decompositions import HermitianEig, TruncatedSvd
from oscillatory_dmd.linalg.kernels import (
    DEFAULT_TOL,
    full_svd,
    hermitian_eig,
    least_squares_apply,
    truncated_svd,
)

__all__ = [
    "DEFAULT_TOL",
    "HermitianEig",
    "TruncatedSvd",
    "full_svd",
    "hermitian_eig",
    "least_squares_apply",
    "truncated_svd",
]
