"""
End-to-end experiment pipeline: simulate -> optional noise -> fit -> predict -> metrics -> timings.
"""
import logging
import os
from functools import partial
from importlib.metadata import PackageNotFoundError, version
from multiprocessing import Pool
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from oscillatory_dmd.config import get_config_loader
from oscillatory_dmd.diagnostics.bench import timed
from oscillatory_dmd.diagnostics.dtos.noise_spec import NoiseSpec
from oscillatory_dmd.diagnostics.energy import energy_evaluator
from oscillatory_dmd.diagnostics.metrics import metrics
from oscillatory_dmd.diagnostics.noise import NOISE_ALGORITHM, add_noise
from oscillatory_dmd.dmd.dispatch import fit_model, predict_trajectory
from oscillatory_dmd.dmd.dtos.models import DelayEmbedding
from oscillatory_dmd.dmd.embedding import delay_embed, unembed
from oscillatory_dmd.experiments.report import SWEEP_COLUMNS, ExperimentReport, ReportWriter
from oscillatory_dmd.experiments.spec import ExperimentSpec, initial_state, pidmd_stride
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix
from oscillatory_dmd.solver.dtos.solver_config import SolverConfig
from oscillatory_dmd.solver.strang import simulate

logger = logging.getLogger(__name__)


def _package_version() -> str:
    try:
        return version("oscillatory-dmd")
    except PackageNotFoundError:
        return "unknown"


def _sweep_column(spec: ExperimentSpec, eps: float) -> list[dict]:
    """
    All sweep cells for one eps. The trajectory is simulated once, long enough for the largest
    training length, and every cell uses a prefix of it.
    """
    sweep = spec.sweep
    longest = max(sweep.train_columns) * sweep.horizon_factor
    cfg = spec.solver_config(eps=eps, total_columns=spec.train_start + longest)
    trajectory = simulate(initial_state(spec.initial, cfg), cfg)

    rows = []
    for m in sweep.train_columns:
        truth = trajectory.window(spec.train_start, m * sweep.horizon_factor)
        train = truth.window(0, m)
        for method in spec.methods:
            model = fit_model(train, method, spec.tol, spec.rank_rtol)
            pred = predict_trajectory(model, train.data[:, 0], train.data[:, 1], truth.columns - 1)
            e_rel = float(np.linalg.norm(pred - truth.data) / np.linalg.norm(truth.data))
            rows.append({"method": method, "m": m, "eps": eps, "e_rel": e_rel})
    return rows


class ExperimentRunner:
    """
    Runs one ExperimentSpec and writes its report.
    """

    def __init__(self,
                 spec: ExperimentSpec,
                 output_dir: Optional[str] = None,
                 num_threads: Optional[int] = None,
                 chunk_size: Optional[int] = None,
                 show_progress: bool = True):
        """
        :param spec: The resolved experiment.
        :param output_dir: Report directory; defaults to <paths.output_dir>/<experiment name>.
        :param num_threads: Worker count for sweeps and parallel prediction.
        :param chunk_size: Tasks per worker submission.
        :param show_progress: Show tqdm progress bars.
        """
        config = get_config_loader().get_config()
        self.spec = spec
        self.output_dir = output_dir or spec.output_dir or os.path.join(config["paths"]["output_dir"], spec.name)
        self.num_threads = num_threads or config["parallelization"]["num_threads"]
        self.chunk_size = chunk_size or config["parallelization"]["chunk_size"]
        self.float_format = config["output"]["float_format"]
        self.pidmd_warn_dim = spec.pidmd_warn_dim or config["numerics"]["pidmd_warn_dim"]
        self.show_progress = show_progress
        self.solver_cfg: Optional[SolverConfig] = None

    def run(self) -> ExperimentReport:
        report = ExperimentReport(name=self.spec.name, output_dir=self.output_dir)
        writer = ReportWriter(report, self.float_format)
        logger.info(f"Running experiment {self.spec.name}: {self.spec.description}")
        if self.spec.sweep is not None:
            self._run_sweep(report, writer)
        else:
            self._run_pipeline(report, writer)
        writer.write_manifest(self._manifest())
        logger.info(f"Experiment {self.spec.name} finished; report in {self.output_dir}")
        return report

    # ------------------------------------ single pipeline ------------------------------------

    def _run_pipeline(self, report: ExperimentReport, writer: ReportWriter):
        spec = self.spec
        self.solver_cfg = spec.solver_config()
        trajectory = simulate(initial_state(spec.initial, self.solver_cfg), self.solver_cfg, self.show_progress)
        truth = trajectory.window(spec.train_start, spec.horizon)
        if spec.magnitude_grids:
            writer.write_magnitude("truth", truth.data)

        for sigma in spec.noise_levels:
            group = "" if len(spec.noise_levels) == 1 else f"sigma-{sigma:.0e}"
            train = truth.window(0, spec.train_columns)
            if sigma > 0:
                train = add_noise(train, NoiseSpec(sigma=sigma, seed=spec.seed))

            for depth in spec.delay_depths:
                for method in spec.methods:
                    self._run_method(method, depth, train, truth, report, writer, group)
                    if method == "pidmd" and pidmd_stride(truth.n, spec.pidmd_max_dim) > 1 and "cn" in spec.methods:
                        self._run_method("cn", depth, train, truth, report, writer, group, reduce_like_pidmd=True)
            writer.write_summary(group)

    def _run_method(self, method: str, depth: int, train: SnapshotMatrix, truth: SnapshotMatrix,
                    report: ExperimentReport, writer: ReportWriter, group: str, reduce_like_pidmd: bool = False):
        """
        Fits one method on the training window and evaluates its prediction over the whole horizon.
        piDMD (and the CN-DMD run timed against it) is trained on a spatially subsampled grid when the
        dimension exceeds pidmd_max_dim.
        """
        spec = self.spec
        label = method if depth == 1 else f"{method}-q{depth}"
        if method == "pidmd" or reduce_like_pidmd:
            stride = pidmd_stride(truth.n, spec.pidmd_max_dim)
            if stride > 1:
                train, truth = train.subsample_space(stride), truth.subsample_space(stride)
                label = f"{label}@n{truth.n}"

        fit_data = delay_embed(train, depth)
        model, fit_seconds = timed(fit_model, fit_data, method, spec.tol, spec.rank_rtol, self.pidmd_warn_dim)
        x = fit_data.data
        pred, predict_seconds = timed(predict_trajectory, model, x[:, 0], x[:, 1], spec.horizon - depth,
                                      spec.prediction_mode, self.num_threads)
        if depth > 1:
            pred = unembed(pred, DelayEmbedding(depth=depth, base_dim=train.n))

        energy = energy_evaluator(model if depth == 1 else None, truth.grid, self.solver_cfg.eps,
                                  self.solver_cfg.potential_on(truth.grid))
        series = metrics(pred, truth.data, energy, streams=2 if method == "si" and depth == 1 else 1)
        report.add_run(label, series, fit_seconds, predict_seconds, group)
        writer.write_series(label, series, group)
        if spec.magnitude_grids:
            writer.write_magnitude(label, pred, group)
        logger.info(f"{label}: e_rel={series.e_rel:.3e}, dM_final={series.dm_final:.3e}, "
                    f"fit {fit_seconds:.3f} s, predict {predict_seconds:.3f} s")

    # ------------------------------------ parameter sweep ------------------------------------

    def _run_sweep(self, report: ExperimentReport, writer: ReportWriter):
        sweep = self.spec.sweep
        rows = []
        worker = partial(_sweep_column, self.spec)
        with Pool(processes=self.num_threads) as pool:
            for column in tqdm(pool.imap(worker, sweep.eps, chunksize=self.chunk_size), total=len(sweep.eps),
                               disable=not self.show_progress, desc="sweep"):
                rows.extend(column)
        report.sweep = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
        writer.write_sweep()

    def _manifest(self) -> Dict[str, Any]:
        manifest = {
            "experiment": self.spec.to_dict(),
            "noise_algorithm": NOISE_ALGORITHM,
            "package_version": _package_version(),
            "float_format": self.float_format,
        }
        if self.solver_cfg is not None:
            coarse = self.solver_cfg.grid.coarsen(self.solver_cfg.downsample_space)
            manifest["derived"] = {
                "fine_steps": self.solver_cfg.steps,
                "tau": self.solver_cfg.tau,
                "h": coarse.h,
                "n": coarse.n,
            }
        return manifest
