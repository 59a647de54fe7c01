from dataclasses import dataclass
from enum import Enum

import numpy as np

from oscillatory_dmd.errors import ValidationError


class Scheme(Enum):
    """Time discretization behind a structured (Hermitian) DMD model."""
    CN = "cn"
    SI = "si"


class ModelTag(Enum):
    """One-byte tag identifying a model type in the binary model format."""
    CLASSICAL = 0
    PIDMD = 1
    CN = 2
    SI = 3


@dataclass(frozen=True)
class ClassicalDmdModel:
    """
    x_k ~ phi @ diag(eigenvalues^k) @ b, with continuous frequencies omega = -i ln(lambda) / tau.
    """
    phi: np.ndarray
    eigenvalues: np.ndarray
    b: np.ndarray
    tau: float
    omega: np.ndarray

    def __post_init__(self):
        if self.phi.shape[1] < 1:
            raise ValidationError("A classical DMD model needs at least one mode")

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    @property
    def rank(self) -> int:
        return self.phi.shape[1]

    @property
    def tag(self) -> ModelTag:
        return ModelTag.CLASSICAL


@dataclass(frozen=True)
class UnitaryModel:
    """
    Full n x n unitary one-step operator x_{k+1} ~ L x_k.
    """
    operator: np.ndarray
    tau: float

    @property
    def n(self) -> int:
        return self.operator.shape[0]

    @property
    def rank(self) -> int:
        return self.operator.shape[0]

    @property
    def tag(self) -> ModelTag:
        return ModelTag.PIDMD


@dataclass(frozen=True)
class ReducedHermitianModel:
    """
    Reduced Hermitian operator A ~ u @ diag(eigenvalues) @ u^* with Cayley spectral factors d.
    For CN, d advances one step; for SI, d advances two steps (one per parity stream).
    """
    u: np.ndarray
    eigenvalues: np.ndarray
    d: np.ndarray
    tau: float
    scheme: Scheme

    def __post_init__(self):
        if self.u.shape[1] != self.eigenvalues.shape[0] or self.d.shape != self.eigenvalues.shape:
            raise ValidationError("Basis, eigenvalues and spectral factors must have matching rank")
        if np.any(np.abs(np.abs(self.d) - 1) > 1e-12):
            raise ValidationError("Spectral factors must have unit modulus")

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def rank(self) -> int:
        return self.u.shape[1]

    @property
    def tag(self) -> ModelTag:
        return ModelTag.CN if self.scheme is Scheme.CN else ModelTag.SI

    def apply_operator(self, x: np.ndarray) -> np.ndarray:
        """
        A x = U diag(lambda) U^* x for a vector or for each column of a matrix.
        """
        z = self.u.conj().T @ x
        if z.ndim == 1:
            return self.u @ (self.eigenvalues * z)
        return self.u @ (self.eigenvalues[:, None] * z)


@dataclass(frozen=True)
class DelayEmbedding:
    """
    Stacking of depth consecutive states of dimension base_dim.
    """
    depth: int
    base_dim: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValidationError(f"Embedding depth must be at least 1, got {self.depth}")

    @property
    def embedded_dim(self) -> int:
        return self.depth * self.base_dim
