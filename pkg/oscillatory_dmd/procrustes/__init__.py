from oscillatory_dmd.procrustes.dtos.solution import HermitianProcrustesSolution
from oscillatory_dmd.procrustes.solvers import assemble_full, solve_hermitian, solve_unitary

__all__ = ["HermitianProcrustesSolution", "assemble_full", "solve_hermitian", "solve_unitary"]
