from dataclasses import dataclass

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class MetricSeries:
    """
    Per-step relative error err_k, mass variation dM_k and energy variation dE_k, plus the
    relative Frobenius error e_rel over the whole horizon.
    err_k is NaN where the true state is zero; dE_k is NaN when no energy evaluator was used.
    """
    err: np.ndarray
    dm: np.ndarray
    de: np.ndarray
    e_rel: float

    @property
    def horizon(self) -> int:
        return self.err.shape[0]

    @property
    def dm_final(self) -> float:
        return float(self.dm[-1])

    @property
    def de_final(self) -> float:
        return float(self.de[-1])

    @property
    def err_final(self) -> float:
        """Last defined err_k (NaN sentinels are skipped)."""
        defined = self.err[~np.isnan(self.err)]
        return float(defined[-1]) if defined.size else float("nan")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "k": np.arange(self.horizon),
            "err": self.err,
            "dM": self.dm,
            "dE": self.de,
        })
