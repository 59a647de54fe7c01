from dataclasses import dataclass

from oscillatory_dmd.errors import ValidationError
from oscillatory_dmd.solver.dtos.grid import PotentialSpec, SpatialGrid


@dataclass(frozen=True)
class SolverConfig:
    """
    Settings of one Strang-splitting run on the fine grid, followed by downsampling.
    beta is the strength of the cubic term (0 for the linear equation, eps for the defocusing GPE).
    """
    grid: SpatialGrid
    eps: float
    potential: PotentialSpec
    tau_e: float
    steps: int
    beta: float = 0.0
    downsample_time: int = 1
    downsample_space: int = 1

    def __post_init__(self):
        if not self.eps > 0:
            raise ValidationError(f"eps must be positive, got {self.eps}")
        if not self.tau_e > 0:
            raise ValidationError(f"tau_e must be positive, got {self.tau_e}")
        if self.steps < 0:
            raise ValidationError(f"steps must be nonnegative, got {self.steps}")
        if self.downsample_time < 1 or self.downsample_space < 1:
            raise ValidationError("Downsampling strides must be positive integers")

    @property
    def tau(self) -> float:
        """Time step between kept snapshots."""
        return self.tau_e * self.downsample_time

    def validate_strides(self) -> None:
        """
        :raises: ValidationError: If a stride does not divide the trajectory length or the grid.
        """
        if self.steps % self.downsample_time != 0:
            raise ValidationError(
                f"Time stride {self.downsample_time} does not divide the step count {self.steps}"
            )
        if self.grid.n % self.downsample_space != 0:
            raise ValidationError(
                f"Spatial stride {self.downsample_space} does not divide n={self.grid.n}"
            )

    def potential_on(self, grid: SpatialGrid) -> PotentialSpec:
        """
        The potential matched to a coarsened copy of the fine grid (downsampled snapshots, piDMD subgrids).
        :raises: ValidationError: If grid is not the fine grid coarsened by an integer stride.
        """
        fine = self.grid
        if (grid.a, grid.b) != (fine.a, fine.b) or fine.n % grid.n != 0:
            raise ValidationError(f"Grid with {grid.n} points on [{grid.a}, {grid.b}) is not a coarsening "
                                  f"of the fine grid with {fine.n} points on [{fine.a}, {fine.b})")
        return self.potential.subsample(fine.n // grid.n)

    def to_dict(self) -> dict:
        return {
            "a": self.grid.a,
            "b": self.grid.b,
            "n": self.grid.n,
            "eps": self.eps,
            "potential": self.potential.to_dict(),
            "beta": self.beta,
            "tau_e": self.tau_e,
            "steps": self.steps,
            "downsample_time": self.downsample_time,
            "downsample_space": self.downsample_space,
        }
