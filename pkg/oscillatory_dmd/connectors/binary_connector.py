"""
Little-endian binary formats.

Snapshots: b"OSCIDMD1", u64 n, u64 columns, f64 a, b, tau, eps, then the complex128 entries in
column-major order (interleaved re, im). Snapshots without a physical grid (toy data, delay-embedded
data) are stored with a = b = 0; a missing eps is stored as NaN.

Models: b"OSCIMDL1", u8 tag, u64 n, u64 r, f64 tau, then the factors in column-major order:
    classical (0): Phi (n x r), lambda (r, complex), b (r, complex)
    piDMD (1):     L (n x n, r = n)
    CN (2), SI (3): U (n x r), lambda (r, float64), d (r, complex)
"""
import logging
import os
import struct

import numpy as np

from oscillatory_dmd.connectors.base import Connector
from oscillatory_dmd.dmd.classical import frequencies
from oscillatory_dmd.dmd.dispatch import DmdModel
from oscillatory_dmd.dmd.dtos.models import ClassicalDmdModel, ModelTag, ReducedHermitianModel, Scheme, UnitaryModel
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.dtos.grid import SpatialGrid
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix

logger = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b"OSCIDMD1"
MODEL_MAGIC = b"OSCIMDL1"

_SNAPSHOT_HEADER = struct.Struct("<8sQQdddd")
_MODEL_HEADER = struct.Struct("<8sBQQd")

_COMPLEX = np.dtype("<c16")
_REAL = np.dtype("<f8")


def _matrix_bytes(matrix: np.ndarray) -> bytes:
    return np.asarray(matrix, dtype=_COMPLEX).tobytes(order="F")


def _vector_bytes(vector: np.ndarray, dtype: np.dtype) -> bytes:
    return np.asarray(vector, dtype=dtype).tobytes()


class _Reader:
    """Sequential reader over a byte payload that fails loudly on truncation."""

    def __init__(self, payload: bytes, path: str):
        self.payload = payload
        self.path = path
        self.offset = 0

    def take(self, dtype: np.dtype, count: int) -> np.ndarray:
        end = self.offset + dtype.itemsize * count
        if end > len(self.payload):
            raise ValidationError(f"File {self.path} is truncated")
        values = np.frombuffer(self.payload, dtype=dtype, count=count, offset=self.offset)
        self.offset = end
        return values.astype(dtype.newbyteorder("="))

    def matrix(self, rows: int, cols: int) -> np.ndarray:
        return np.ascontiguousarray(self.take(_COMPLEX, rows * cols).reshape((rows, cols), order="F"))

    def finish(self):
        if self.offset != len(self.payload):
            raise ValidationError(f"File {self.path} has {len(self.payload) - self.offset} unexpected trailing bytes")


class BinaryConnector(Connector):
    """
    Reads and writes snapshot and model files at one path.
    """

    def __init__(self, file_path: str) -> None:
        self.file_path = file_path

    def _read_bytes(self) -> bytes:
        if not os.path.isfile(self.file_path):
            raise ValidationError(f"File not found: {self.file_path}")
        with open(self.file_path, "rb") as handle:
            return handle.read()

    def _write_bytes(self, payload: bytes):
        directory = os.path.dirname(self.file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(self.file_path, "wb") as handle:
            handle.write(payload)
        logger.info(f"Wrote {len(payload)} bytes to {self.file_path}")

    # ------------------------------------ snapshots ------------------------------------

    def write_snapshots(self, snapshots: SnapshotMatrix):
        gridded = snapshots.grid is not None and snapshots.embedding_depth == 1
        a, b = (snapshots.grid.a, snapshots.grid.b) if gridded else (0.0, 0.0)
        eps = np.nan if snapshots.eps is None else snapshots.eps
        header = _SNAPSHOT_HEADER.pack(SNAPSHOT_MAGIC, snapshots.n, snapshots.columns, a, b, snapshots.tau, eps)
        self._write_bytes(header + _matrix_bytes(snapshots.data))

    def read_snapshots(self) -> SnapshotMatrix:
        payload = self._read_bytes()
        if len(payload) < _SNAPSHOT_HEADER.size:
            raise ValidationError(f"File {self.file_path} is too short for a snapshot header")
        magic, n, columns, a, b, tau, eps = _SNAPSHOT_HEADER.unpack_from(payload)
        if magic != SNAPSHOT_MAGIC:
            raise ValidationError(f"File {self.file_path} is not a snapshot file (magic {magic!r})")

        reader = _Reader(payload, self.file_path)
        reader.offset = _SNAPSHOT_HEADER.size
        data = reader.matrix(n, columns)
        reader.finish()

        grid = None if a == 0 and b == 0 else SpatialGrid(a, b, n)
        return SnapshotMatrix(data=data, tau=tau, grid=grid, eps=None if np.isnan(eps) else eps)

    # ------------------------------------ models ------------------------------------

    def write_model(self, model: DmdModel):
        header = _MODEL_HEADER.pack(MODEL_MAGIC, model.tag.value, model.n, model.rank, model.tau)
        if isinstance(model, ClassicalDmdModel):
            body = _matrix_bytes(model.phi) + _vector_bytes(model.eigenvalues, _COMPLEX) + _vector_bytes(model.b, _COMPLEX)
        elif isinstance(model, UnitaryModel):
            body = _matrix_bytes(model.operator)
        else:
            body = _matrix_bytes(model.u) + _vector_bytes(model.eigenvalues, _REAL) + _vector_bytes(model.d, _COMPLEX)
        self._write_bytes(header + body)

    def read_model(self) -> DmdModel:
        payload = self._read_bytes()
        if len(payload) < _MODEL_HEADER.size:
            raise ValidationError(f"File {self.file_path} is too short for a model header")
        magic, tag, n, r, tau = _MODEL_HEADER.unpack_from(payload)
        if magic != MODEL_MAGIC:
            raise ValidationError(f"File {self.file_path} is not a model file (magic {magic!r})")
        try:
            tag = ModelTag(tag)
        except ValueError:
            raise ValidationError(f"Unknown model tag {tag} in {self.file_path}")

        reader = _Reader(payload, self.file_path)
        reader.offset = _MODEL_HEADER.size
        match tag:
            case ModelTag.CLASSICAL:
                phi = reader.matrix(n, r)
                eigenvalues = reader.take(_COMPLEX, r)
                b = reader.take(_COMPLEX, r)
                model = ClassicalDmdModel(phi=phi, eigenvalues=eigenvalues, b=b, tau=tau,
                                          omega=frequencies(eigenvalues, tau))
            case ModelTag.PIDMD:
                model = UnitaryModel(operator=reader.matrix(n, n), tau=tau)
            case _:
                u = reader.matrix(n, r)
                eigenvalues = reader.take(_REAL, r)
                d = reader.take(_COMPLEX, r)
                scheme = Scheme.CN if tag is ModelTag.CN else Scheme.SI
                model = ReducedHermitianModel(u=u, eigenvalues=eigenvalues, d=d, tau=tau, scheme=scheme)
        reader.finish()
        return model
