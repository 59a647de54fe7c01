"""
Time-delay (Hankel) embedding of snapshot matrices and the map back to physical states.
"""
import numpy as np

from oscillatory_dmd.dmd.dtos.models import DelayEmbedding
from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.linalg.kernels import as_complex_matrix
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix


def delay_embed(snapshots: SnapshotMatrix, depth: int) -> SnapshotMatrix:
    """
    Column j of the result stacks [x_j; x_{j+1}; ...; x_{j+q-1}], giving q n rows and m + 2 - q columns.

    :param snapshots: Plain (not yet embedded) snapshots x_0..x_m.
    :param depth: Delay depth q, 1 <= q <= m.
    """
    embedding = DelayEmbedding(depth=depth, base_dim=snapshots.n)
    if snapshots.embedding_depth != 1:
        raise ValidationError("Snapshots are already delay-embedded")
    if depth == 1:
        return snapshots
    if depth > snapshots.m:
        raise ValidationError(f"Delay depth {depth} exceeds the last snapshot index m = {snapshots.m}")

    columns = snapshots.columns - depth + 1
    data = np.vstack([snapshots.data[:, j:j + columns] for j in range(depth)])
    return SnapshotMatrix(data=data, tau=snapshots.tau, grid=snapshots.grid, eps=snapshots.eps,
                          embedding_depth=depth)


def unembed(trajectory, embedding: DelayEmbedding) -> np.ndarray:
    """
    Physical states from embedded ones. Embedded column j holds times j..j+q-1, so times 0..q-2 are
    read from the leading blocks of column 0 and time j+q-1 from the trailing block of column j.

    :param trajectory: q n x K matrix of embedded states, column j at embedded time j.
    :return: n x (K + q - 1) matrix of physical states at times 0..K+q-2.
    """
    trajectory = as_complex_matrix(trajectory, "embedded trajectory")
    n, q = embedding.base_dim, embedding.depth
    if trajectory.shape[0] != embedding.embedded_dim:
        raise ValidationError(f"Embedded states have {trajectory.shape[0]} rows, expected {embedding.embedded_dim}")
    if trajectory.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.complex128)

    head = trajectory[:n * (q - 1), 0].reshape(q - 1, n).T
    tail = trajectory[n * (q - 1):, :]
    return np.column_stack([head, tail])
