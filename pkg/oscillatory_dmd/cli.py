"""Command-line interface for oscillatory-dmd."""

import argparse
import logging
import os
import sys

from oscillatory_dmd.config import ConfigurationError
from oscillatory_dmd.config.config_loader import get_config_loader, load_yaml_file

config, is_using_default_config = get_config_loader().get_cli_config()
log_level = config["logging"]["level"]
log_path = config["paths"]["log_file"]
output_dir = config["paths"]["output_dir"]
default_tol = config["numerics"]["tol"]
default_seed = config["numerics"]["seed"]
pidmd_warn_dim = config["numerics"]["pidmd_warn_dim"]
rank_rtol = config["numerics"]["rank_rtol"]
num_threads = config["parallelization"]["num_threads"]
output_format = config["output"]["format"]
float_format = config["output"]["float_format"]

from oscillatory_dmd.connectors.factory import get_connector
from oscillatory_dmd.diagnostics.bench import bench, timed
from oscillatory_dmd.diagnostics.energy import energy_evaluator
from oscillatory_dmd.diagnostics.metrics import metrics
from oscillatory_dmd.dmd.dispatch import fit_model, method_name, predict_trajectory
from oscillatory_dmd.dmd.dtos.models import ReducedHermitianModel, Scheme
from oscillatory_dmd.dmd.structured import PREDICTION_MODES
from oscillatory_dmd.errors import DegenerateDataError, ValidationError
from oscillatory_dmd.experiments.runner import ExperimentRunner
from oscillatory_dmd.experiments.spec import initial_state, load_experiment, solver_config_from_mapping
from oscillatory_dmd.solver.conservation import energy, mass
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix
from oscillatory_dmd.solver.strang import simulate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3


def setup_logging(log_path=log_path, log_level=log_level):
    """Set up the logging configuration."""
    logging.basicConfig(filename=log_path, level=log_level)
    root = logging.getLogger()
    root.setLevel(log_level)
    if not any(type(handler) is logging.StreamHandler for handler in root.handlers):
        root.addHandler(logging.StreamHandler())
    return logging.getLogger(__name__)


def _add_global_arguments(parser, suppress: bool = False):
    """
    Flags accepted before or after the subcommand. The subcommand copies use SUPPRESS defaults so
    that they never overwrite a value given before the subcommand.
    """
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument('-c', '--config', type=str, default=default(None),
                        help='Path to a custom configuration file.')
    parser.add_argument("--tol", type=float, default=default(default_tol),
                        help=f"Relative SVD truncation tolerance (default: {default_tol})")
    parser.add_argument("--seed", type=int, default=default(default_seed),
                        help=f"Seed of the noise generator (default: {default_seed})")
    parser.add_argument("--out", default=default(output_dir),
                        help=f"Output directory (default: {output_dir})")
    parser.add_argument("--threads", type=int, default=default(num_threads),
                        help="Worker threads/processes (default: all cores)")
    parser.add_argument("--format", choices=["csv"], default=default(output_format),
                        help="Tabular output format (default: %(default)s)")
    parser.add_argument("--log", default=default(log_path),
                        help=f"Log file path (default: {log_path})")
    parser.add_argument("--log-level", type=int, default=default(log_level),
                        help=f"Logging level (default: {log_level})")


def parse_args(argv=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Structure-preserving DMD (CN-DMD, SI-DMD), classical DMD and piDMD for semiclassical "
                    "Schrödinger dynamics."
    )
    _add_global_arguments(parser)
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate_parser = subparsers.add_parser("simulate", help="Generate reference snapshots with the Strang solver.")
    _add_global_arguments(simulate_parser, suppress=True)
    simulate_parser.add_argument("simulation_config", nargs="?", default=None,
                                 help="YAML file with a 'simulation' section.")
    simulate_parser.add_argument("--preset", default=None, help="Simulate the full trajectory of an experiment preset.")
    simulate_parser.add_argument("-o", "--output", default=None, help="Snapshot file (default: <out>/snapshots.osd)")
    simulate_parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                                 help="Preset override (with --preset).")

    fit_parser = subparsers.add_parser("fit", help="Fit a DMD model to a snapshot file.")
    _add_global_arguments(fit_parser, suppress=True)
    fit_parser.add_argument("snapshots", help="Snapshot file (.osd).")
    fit_parser.add_argument("--method", "-m", required=True, help="cn, si, classical or pidmd")
    fit_parser.add_argument("--train-start", type=int, default=0, help="First training column (default: 0)")
    fit_parser.add_argument("--train-columns", type=int, default=None, help="Number of training columns (default: all)")
    fit_parser.add_argument("-o", "--output", default=None, help="Model file (default: <out>/model.osm)")

    predict_parser = subparsers.add_parser("predict", help="Predict with a fitted model.")
    _add_global_arguments(predict_parser, suppress=True)
    predict_parser.add_argument("model", help="Model file (.osm).")
    predict_parser.add_argument("--initial", required=True,
                                help="Snapshot file holding x0 (and x1 for SI) as its first columns.")
    predict_parser.add_argument("--initial-offset", type=int, default=0, help="Column of x0 in the initial file.")
    predict_parser.add_argument("--steps", "-N", type=int, required=True, help="Prediction horizon N.")
    predict_parser.add_argument("--mode", choices=PREDICTION_MODES, default="block",
                                help="Prediction path (default: %(default)s)")
    predict_parser.add_argument("--truth", default=None,
                                help="Snapshot file with reference states x0..xN for metrics.")
    predict_parser.add_argument("-o", "--output", default=None,
                                help="Prediction snapshot file (default: <out>/prediction.osd)")

    experiment_parser = subparsers.add_parser("experiment", help="Run a preset experiment.")
    _add_global_arguments(experiment_parser, suppress=True)
    experiment_parser.add_argument("preset", help="exp-4.1, exp-4.2, exp-4.3, exp-4.4 or exp-4.5")
    experiment_parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                                   help="Override a preset field (dotted keys for nested fields).")
    experiment_parser.add_argument("--sigma", type=float, default=None, help="Single noise level to use.")
    experiment_parser.add_argument("--full-pidmd", action="store_true",
                                   help="Fit piDMD on the full grid instead of a subsampled one.")
    experiment_parser.add_argument("--no-progress", action="store_true", help="Hide progress bars.")

    bench_parser = subparsers.add_parser("bench", help="Time fit and predict phases on a preset's data.")
    _add_global_arguments(bench_parser, suppress=True)
    bench_parser.add_argument("preset", help="Experiment preset providing data and methods.")
    bench_parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                              help="Override a preset field.")
    bench_parser.add_argument("--methods", nargs="+", default=None, help="Methods to time (default: preset's)")
    bench_parser.add_argument("--phase", choices=["fit", "predict", "both"], default="both")
    bench_parser.add_argument("--repeats", type=int, default=1)

    return parser.parse_args(argv)


def _numerics_defaults(args) -> dict:
    return {"tol": args.tol, "seed": args.seed, "rank_rtol": rank_rtol, "pidmd_warn_dim": pidmd_warn_dim}


def run_simulate(args, logger):
    """Generate snapshots from a simulation config or a preset."""
    if (args.simulation_config is None) == (args.preset is None):
        raise ConfigurationError("simulate needs exactly one of a simulation config file or --preset")

    if args.preset is not None:
        spec = load_experiment(args.preset, args.set, _numerics_defaults(args))
        cfg, initial = spec.solver_config(), spec.initial
    else:
        mapping = load_yaml_file(args.simulation_config)
        if not isinstance(mapping, dict) or "simulation" not in mapping:
            raise ConfigurationError(f"Missing required section 'simulation' in {args.simulation_config}")
        simulation = mapping["simulation"]
        if "steps" not in simulation:
            raise ConfigurationError("Missing required simulation field: steps")
        cfg = solver_config_from_mapping(simulation, int(simulation["steps"]))
        initial = simulation.get("initial", {})

    logger.info("Starting simulation.")
    snapshots = simulate(initial_state(initial, cfg), cfg, show_progress=True)
    output = args.output or os.path.join(args.out, "snapshots.osd")
    get_connector(output).write_snapshots(snapshots)

    first, last = snapshots.column(0), snapshots.column(snapshots.m)
    print(f"n={snapshots.n} m={snapshots.m} tau={snapshots.tau:.6g} h={snapshots.grid.h:.6g} eps={snapshots.eps:.6g}")
    print(f"mass={mass(first, snapshots.grid):.17g} -> {mass(last, snapshots.grid):.17g}")
    potential = cfg.potential_on(snapshots.grid)
    print(f"energy={energy(first, snapshots.grid, cfg.eps, potential):.17g} -> "
          f"{energy(last, snapshots.grid, cfg.eps, potential):.17g}")
    print(f"wrote {output}")


def run_fit(args, logger):
    """Fit one model to a snapshot file."""
    snapshots = get_connector(args.snapshots).read_snapshots()
    columns = args.train_columns or snapshots.columns - args.train_start
    snapshots = snapshots.window(args.train_start, columns)

    logger.info(f"Fitting {args.method} on {snapshots.n} x {snapshots.columns} snapshots.")
    model, seconds = timed(fit_model, snapshots, args.method, args.tol, rank_rtol, pidmd_warn_dim)
    output = args.output or os.path.join(args.out, "model.osm")
    get_connector(output).write_model(model)

    print(f"method={method_name(model)} n={model.n} r={model.rank} fit_seconds={seconds:.6f}")
    if isinstance(model, ReducedHermitianModel):
        if model.rank:
            print(f"eigenvalues: min={model.eigenvalues.min():.10g} max={model.eigenvalues.max():.10g}")
    elif hasattr(model, "eigenvalues"):
        for value in model.eigenvalues[:10]:
            print(f"lambda={value.real:.10g}{value.imag:+.10g}i |lambda|={abs(value):.10g}")
    print(f"wrote {output}")


def run_predict(args, logger):
    """Predict from initial states and optionally compare against a reference."""
    model = get_connector(args.model).read_model()
    initial = get_connector(args.initial).read_snapshots()
    if initial.n != model.n:
        raise ValidationError(f"Initial states have dimension {initial.n}, model has {model.n}")
    offset = args.initial_offset
    if offset >= initial.columns:
        raise ValidationError(f"Initial file has {initial.columns} column(s), offset {offset} is out of range")
    x0 = initial.column(offset)
    x1 = initial.column(offset + 1) if offset + 1 < initial.columns else None
    if isinstance(model, ReducedHermitianModel) and model.scheme is Scheme.SI and x1 is None and args.steps > 0:
        raise ValidationError("SI-DMD prediction needs two initial states (x0 and x1)")

    logger.info(f"Predicting {args.steps} steps in {args.mode} mode.")
    pred, seconds = timed(predict_trajectory, model, x0, x1, args.steps, args.mode, args.threads)
    prediction = SnapshotMatrix(data=pred, tau=model.tau, grid=initial.grid, eps=initial.eps)
    output = args.output or os.path.join(args.out, "prediction.osd")
    get_connector(output).write_snapshots(prediction)
    print(f"steps={args.steps} mode={args.mode} predict_seconds={seconds:.6f}")

    if args.truth:
        truth = get_connector(args.truth).read_snapshots()
        if truth.columns < pred.shape[1] or truth.n != model.n:
            raise ValidationError(f"Reference needs {pred.shape[1]} columns of dimension {model.n}")
        streams = 2 if isinstance(model, ReducedHermitianModel) and model.scheme is Scheme.SI else 1
        series = metrics(pred, truth.data[:, :pred.shape[1]], energy_evaluator(model), streams)
        metrics_path = os.path.join(args.out, "prediction_metrics.csv")
        os.makedirs(args.out, exist_ok=True)
        series.to_frame().to_csv(metrics_path, index=False, float_format=float_format)
        print(f"{'method':<12}{'runtime':>12}{'e_rel':>14}{'dM_final':>14}")
        print(f"{method_name(model):<12}{seconds:>12.4f}{series.e_rel:>14.4e}{series.dm_final:>14.4e}")
    print(f"wrote {output}")


def run_experiment(args, logger):
    """Run a preset experiment."""
    overrides = list(args.set)
    if args.sigma is not None:
        overrides.append(f"noise_levels=[{args.sigma!r}]")
    if args.full_pidmd:
        overrides.append("pidmd_max_dim=null")
    spec = load_experiment(args.preset, overrides, _numerics_defaults(args))

    runner = ExperimentRunner(spec, output_dir=os.path.join(args.out, spec.name), num_threads=args.threads,
                              show_progress=not args.no_progress)
    report = runner.run()
    if report.sweep is not None:
        print(report.sweep.pivot_table(index=["method", "m"], columns="eps", values="e_rel").to_string())
    for group in report.groups:
        summary = report.summary(group)
        if group:
            print(f"[{group}]")
        print(f"{'method':<16}{'runtime':>12}{'e_rel':>14}{'dM_final':>14}")
        for row in summary.itertuples(index=False):
            runtime = row.fit_seconds + row.predict_seconds
            print(f"{row.method:<16}{runtime:>12.4f}{row.e_rel:>14.4e}{row.dM_final:>14.4e}")
    print(f"report written to {runner.output_dir}")


def run_bench(args, logger):
    """Time fit and predict on a preset's training data."""
    spec = load_experiment(args.preset, args.set, _numerics_defaults(args))
    cfg = spec.solver_config()
    trajectory = simulate(initial_state(spec.initial, cfg), cfg, show_progress=True)
    train = trajectory.window(spec.train_start, spec.train_columns)

    phases = ("fit", "predict") if args.phase == "both" else (args.phase,)
    frame = bench(train, args.methods or spec.methods, spec.horizon - 1, spec.tol, phases, args.repeats,
                  rank_rtol=spec.rank_rtol, pidmd_warn_dim=pidmd_warn_dim)
    os.makedirs(args.out, exist_ok=True)
    output = os.path.join(args.out, f"{spec.name}_bench.csv")
    frame.to_csv(output, index=False, float_format=float_format)
    print(frame.to_string(index=False))
    print(f"wrote {output}")


COMMANDS = {
    "simulate": run_simulate,
    "fit": run_fit,
    "predict": run_predict,
    "experiment": run_experiment,
    "bench": run_bench,
}


def main(argv=None):
    """Main entry point for the CLI."""
    args = parse_args(argv)
    logger = setup_logging(args.log, args.log_level)
    if is_using_default_config:
        logger.info("Using default configuration, as no other configuration was provided.")

    try:
        COMMANDS[args.command](args, logger)
    except (ConfigurationError, ValidationError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDataError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
