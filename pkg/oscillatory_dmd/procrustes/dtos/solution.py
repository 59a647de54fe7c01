from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HermitianProcrustesSolution:
    """
    A = u @ h @ u^* minimizes ||X2 - A X1||_F over Hermitian A.
    truncated solutions keep only the leading r x r block of h and r columns of u.
    """
    u: np.ndarray
    h: np.ndarray
    sigma: np.ndarray
    truncated: bool

    @property
    def rank(self) -> int:
        return self.h.shape[0]
