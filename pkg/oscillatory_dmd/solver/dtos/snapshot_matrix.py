from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.linalg.kernels import as_complex_matrix
from oscillatory_dmd.solver.dtos.grid import SpatialGrid


@dataclass(frozen=True)
class SnapshotMatrix:
    """
    Wave-function samples, column k holding the state at t_k = k*tau.
    grid and eps are None for data that do not come from a spatial discretization (e.g. toy models).
    embedding_depth > 1 marks time-delay embedded data with grid.n * depth rows.
    """
    data: np.ndarray
    tau: float
    grid: Optional[SpatialGrid] = None
    eps: Optional[float] = None
    embedding_depth: int = 1

    def __post_init__(self):
        object.__setattr__(self, "data", as_complex_matrix(self.data, "snapshot data"))
        if not self.tau > 0:
            raise ValidationError(f"tau must be positive, got {self.tau}")
        if self.grid is not None and self.data.shape[0] != self.grid.n * self.embedding_depth:
            raise ValidationError(
                f"Snapshot rows {self.data.shape[0]} do not match grid size {self.grid.n} "
                f"x embedding depth {self.embedding_depth}"
            )

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        """Index of the last snapshot: the matrix holds x_0..x_m."""
        return self.data.shape[1] - 1

    @property
    def columns(self) -> int:
        return self.data.shape[1]

    def column(self, k: int) -> np.ndarray:
        return self.data[:, k]

    def window(self, start: int, count: int) -> "SnapshotMatrix":
        """
        Columns start..start+count-1, re-based so that the first kept column is x_0.
        """
        if start < 0 or count < 1 or start + count > self.columns:
            raise ValidationError(f"Window [{start}, {start + count}) outside {self.columns} columns")
        return replace(self, data=self.data[:, start:start + count].copy())

    def subsample_space(self, stride: int) -> "SnapshotMatrix":
        """
        Keeps every stride-th grid point (fine indices stride-1, 2*stride-1, ...).
        """
        if self.embedding_depth != 1 or self.grid is None:
            raise ValidationError("Only plain gridded snapshots can be subsampled in space")
        coarse = self.grid.coarsen(stride)
        return replace(self, data=self.data[stride - 1::stride, :].copy(), grid=coarse)
