from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.fft

from oscillatory_dmd.errors import ValidationError


@dataclass(frozen=True)
class SpatialGrid:
    """
    Periodic grid on [a, b) with points x_j = a + j*h, j = 1..n (x_n = b is identified with a).
    """
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValidationError(f"Grid needs b > a, got a={self.a}, b={self.b}")
        if self.n < 2:
            raise ValidationError(f"Grid needs at least 2 points, got n={self.n}")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.a + self.h * np.arange(1, self.n + 1)

    def coarsen(self, stride: int) -> "SpatialGrid":
        """
        The grid formed by every stride-th point. The kept points coincide with the coarse grid points.
        :param stride: A positive divisor of n.
        :return: The coarse grid.
        """
        if stride < 1 or self.n % stride != 0:
            raise ValidationError(f"Spatial stride {stride} does not divide n={self.n}")
        return SpatialGrid(self.a, self.b, self.n // stride)


@dataclass(frozen=True)
class PotentialSpec:
    """
    External potential V(x): a constant c, a harmonic well q*x^2, or values tabulated on a grid.
    """
    kind: str
    value: float = 0.0
    values: Optional[np.ndarray] = field(default=None, compare=False)

    KINDS = ("constant", "harmonic", "tabulated")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValidationError(f"Unknown potential kind '{self.kind}', expected one of {self.KINDS}")
        if self.kind == "tabulated":
            if self.values is None:
                raise ValidationError("Tabulated potential needs values")
            values = np.asarray(self.values, dtype=np.float64)
            if values.ndim != 1 or not np.all(np.isfinite(values)):
                raise ValidationError("Tabulated potential values must be a finite real vector")
            object.__setattr__(self, "values", values)
        elif not np.isfinite(self.value):
            raise ValidationError(f"Potential coefficient must be finite, got {self.value}")

    @classmethod
    def constant(cls, c: float) -> "PotentialSpec":
        return cls("constant", value=float(c))

    @classmethod
    def harmonic(cls, q: float) -> "PotentialSpec":
        return cls("harmonic", value=float(q))

    @classmethod
    def tabulated(cls, values) -> "PotentialSpec":
        return cls("tabulated", values=np.asarray(values, dtype=np.float64))

    def evaluate(self, grid: SpatialGrid) -> np.ndarray:
        """
        Samples the potential on the grid points.
        :param grid: The spatial grid.
        :return: Real vector of length grid.n.
        """
        match self.kind:
            case "constant":
                return np.full(grid.n, self.value)
            case "harmonic":
                return self.value * grid.points ** 2
            case "tabulated":
                if self.values.shape[0] != grid.n:
                    raise ValidationError(
                        f"Tabulated potential has {self.values.shape[0]} values, grid has {grid.n} points"
                    )
                return self.values.copy()

    def subsample(self, stride: int) -> "PotentialSpec":
        """
        The potential on the grid kept by SpatialGrid.coarsen(stride). Analytic kinds are unchanged;
        tabulated values keep fine indices stride-1, 2*stride-1, ...
        """
        if stride < 1:
            raise ValidationError(f"Spatial stride must be positive, got {stride}")
        if self.kind != "tabulated" or stride == 1:
            return self
        if self.values.shape[0] % stride != 0:
            raise ValidationError(f"Spatial stride {stride} does not divide {self.values.shape[0]} tabulated values")
        return PotentialSpec.tabulated(self.values[stride - 1::stride])

    def to_dict(self) -> dict:
        if self.kind == "tabulated":
            return {"kind": self.kind, "values": self.values.tolist()}
        return {"kind": self.kind, "value": self.value}


def wavenumbers(grid: SpatialGrid) -> np.ndarray:
    """
    Periodic wavenumbers 2*pi*k/(b - a) in FFT order k = 0..n/2-1, -n/2..-1.
    """
    return 2 * np.pi * scipy.fft.fftfreq(grid.n, d=grid.h)
