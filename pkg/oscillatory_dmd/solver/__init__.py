from oscillatory_dmd.solver.conservation import energy, mass
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix
from oscillatory_dmd.solver.dtos.solver_config import SolverConfig
from oscillatory_dmd.solver.dtos.wkb_spec import WkbSpec
from oscillatory_dmd.solver.strang import simulate, strang_step
from oscillatory_dmd.solver.wkb import wkb_initial

__all__ = [
    "PotentialSpec",
    "SnapshotMatrix",
    "SolverConfig",
    "SpatialGrid",
    "WkbSpec",
    "energy",
    "mass",
    "simulate",
    "strang_step",
    "wkb_initial",
]
