"""
Experiment outputs: per-run metric CSVs, summary tables, magnitude grids and the manifest.
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
import yaml

from oscillatory_dmd.diagnostics.dtos.metric_series import MetricSeries

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["method", "e_rel", "dM_final", "dE_final", "fit_seconds", "predict_seconds"]
SWEEP_COLUMNS = ["method", "m", "eps", "e_rel"]
DEFAULT_FLOAT_FORMAT = "%.17g"


@dataclass
class ExperimentReport:
    """
    Results of one experiment. Runs are grouped (one group per noise level, "" when there is only one);
    each group maps run labels to metric series and keeps its summary rows in run order.
    """
    name: str
    output_dir: str
    series: Dict[str, Dict[str, MetricSeries]] = field(default_factory=dict)
    summary_rows: Dict[str, list] = field(default_factory=dict)
    sweep: Optional[pd.DataFrame] = None
    files: list = field(default_factory=list)

    def add_run(self, label: str, series: MetricSeries, fit_seconds: float, predict_seconds: float, group: str = ""):
        self.series.setdefault(group, {})[label] = series
        self.summary_rows.setdefault(group, []).append({
            "method": label,
            "e_rel": series.e_rel,
            "dM_final": series.dm_final,
            "dE_final": series.de_final,
            "fit_seconds": fit_seconds,
            "predict_seconds": predict_seconds,
        })

    def summary(self, group: str = "") -> pd.DataFrame:
        return pd.DataFrame(self.summary_rows.get(group, []), columns=SUMMARY_COLUMNS)

    @property
    def groups(self) -> list[str]:
        return list(self.summary_rows)


class ReportWriter:
    """
    Writes report artifacts below the report's output directory, recording every file written.
    """

    def __init__(self, report: ExperimentReport, float_format: str = DEFAULT_FLOAT_FORMAT):
        self.report = report
        self.float_format = float_format
        os.makedirs(report.output_dir, exist_ok=True)

    def _path(self, *parts: str) -> str:
        path = os.path.join(self.report.output_dir, *parts)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        self.report.files.append(os.path.relpath(path, self.report.output_dir))
        return path

    def write_frame(self, frame: pd.DataFrame, *parts: str, index: bool = False):
        frame.to_csv(self._path(*parts), index=index, float_format=self.float_format)

    def write_series(self, label: str, series: MetricSeries, group: str = ""):
        self.write_frame(series.to_frame(), group, f"{label}_metrics.csv")

    def write_magnitude(self, label: str, states: np.ndarray, group: str = ""):
        """|u| with one row per grid point and one column per time step (heat-map layout)."""
        frame = pd.DataFrame(np.abs(states), columns=[f"t{k}" for k in range(states.shape[1])])
        self.write_frame(frame, group, f"{label}_magnitude.csv")

    def write_summary(self, group: str = ""):
        self.write_frame(self.report.summary(group), group, "summary.csv")

    def write_sweep(self):
        sweep = self.report.sweep
        self.write_frame(sweep, "sweep.csv")
        for method, rows in sweep.groupby("method", sort=False):
            table = rows.pivot(index="m", columns="eps", values="e_rel")
            self.write_frame(table, f"sweep_{method}.csv", index=True)

    def write_manifest(self, manifest: Dict[str, Any]):
        path = self._path("manifest.yaml")
        manifest = dict(manifest, files=sorted(self.report.files))
        with open(path, "w") as handle:
            yaml.safe_dump(manifest, handle, sort_keys=True)
        logger.info(f"Wrote manifest for experiment {self.report.name} to {path}")
