from functools import partial
from typing import Optional

from oscillatory_dmd.diagnostics.bounds import reference_energy
from oscillatory_dmd.diagnostics.metrics import EnergyEvaluator
from oscillatory_dmd.dmd.dtos.models import ReducedHermitianModel
from oscillatory_dmd.dmd.structured import discretized_energy
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid


def energy_evaluator(model=None, grid: Optional[SpatialGrid] = None, eps: Optional[float] = None,
                     potential: Optional[PotentialSpec] = None) -> Optional[EnergyEvaluator]:
    """
    Energy used for dE_k: a CN/SI model's own discretized energy x^* A x, otherwise the finite-difference
    reference energy on the grid (classical DMD and piDMD have no Hermitian operator of their own).
    Returns None when neither is available.
    """
    if isinstance(model, ReducedHermitianModel):
        return partial(discretized_energy, model)
    if grid is None or eps is None or potential is None:
        return None
    return partial(reference_energy, grid=grid, eps=eps, potential=potential)
