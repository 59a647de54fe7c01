from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BoundReport:
    """
    Training error bound ||e_{k+1}|| <= tau * sum_{i<=k} ||l_i|| + slack, evaluated for k = 0..m-1.
    lhs[k] and rhs[k] belong to step k + 1; worst_k is the step with the smallest margin rhs - lhs.
    """
    lhs: np.ndarray
    rhs: np.ndarray
    worst_k: int
    margin: float

    @property
    def holds(self) -> bool:
        return bool(np.all(self.lhs <= self.rhs))
