from oscillatory_dmd.experiments.report import ExperimentReport, ReportWriter
from oscillatory_dmd.experiments.runner import ExperimentRunner
from oscillatory_dmd.experiments.spec import ExperimentSpec, load_experiment

__all__ = ["ExperimentReport", "ExperimentRunner", "ExperimentSpec", "ReportWriter", "load_experiment"]
