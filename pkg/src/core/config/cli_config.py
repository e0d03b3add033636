"""
CLI configuration for the intrinsic dimension toolkit
"""
import argparse
import logging
from typing import Any, Dict, Optional, Tuple

from intdim.bench import BENCH_SUITES
from intdim.config import TLE_AGGREGATIONS, FisherSConfig, KnnConfig, parse_alpha_grid
from intdim.errors import ConfigError
from intdim.estimators import EstimatorSpec, available_estimators
from intdim.imbalance import TRANSFORM_MODES, WEIGHT_KINDS
from intdim.io import DATASET_FORMATS, PIXEL_SCALES

logger = logging.getLogger(__name__)

COVARIANCE_ALIASES = {
    "identity": "identity",
    "spherical": "spherical",
    "diagonal": "diagonal_fixed_trace",
    "full": "full_fixed_det",
}


def _estimator_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("estimator")
    group.add_argument("--estimator", choices=available_estimators(), default="fishers",
                       help="ID estimator (default: fishers)")
    group.add_argument("--alpha-grid", type=str,
                       help="FisherS α grid as a:b:step, inclusive (default: 0.6:0.98:0.02)")
    group.add_argument("--cond-number", type=float, default=10.0,
                       help="FisherS conditional number C (default: 10)")
    group.add_argument("--selection-factor", type=float, default=0.9,
                       help="α* is the valid α closest to this factor times the largest valid α")
    group.add_argument("--dedupe", action="store_true",
                       help="Drop duplicate rows before FisherS preprocessing")
    group.add_argument("--k", type=int, default=20, help="Neighbors for mle/tle (default: 20)")
    group.add_argument("--no-correction", action="store_true",
                       help="MLE: average per-point estimates instead of their inverses")
    group.add_argument("--tle-epsilon", type=float, default=1e-4,
                       help="TLE: drop measurements below this fraction of the radius")
    group.add_argument("--tle-aggregation", choices=TLE_AGGREGATIONS, default="harmonic")
    return parent


def _input_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("input")
    group.add_argument("--input", required=True,
                       help="Dataset path (cifar10: comma-separated batch files)")
    group.add_argument("--format", choices=DATASET_FORMATS, default="csv", dest="fmt")
    group.add_argument("--has-header", action="store_true", help="CSV: skip the first line")
    group.add_argument("--pixel-scale", choices=PIXEL_SCALES, default="unit",
                       help="cifar10: unit divides bytes by 255, raw keeps them")
    return parent


def create_argument_parser() -> argparse.ArgumentParser:
    """Create and configure the argument parser for the CLI"""
    parser = argparse.ArgumentParser(
        prog="intdim",
        description="Class-wise intrinsic dimension estimation and imbalance mitigation artifacts",
    )
    parser.add_argument("--log-level", type=str, help="Console log level (default: INTDIM_LOG_LEVEL or INFO)")
    parser.add_argument("--log-dir", type=str, help="Also write a timestamped log file here")
    subparsers = parser.add_subparsers(dest="command", required=True)

    estimator = _estimator_parent()
    source = _input_parent()

    est = subparsers.add_parser("estimate", parents=[source, estimator],
                                help="Estimate the ID of a whole point cloud")
    est.add_argument("--labeled", action="store_true", help="CSV: last column holds labels (ignored)")
    est.add_argument("--seed", type=int, help="Recorded in the output")
    est.add_argument("--out", type=str, help="JSON output path (default: stdout)")

    cls = subparsers.add_parser("classwise", parents=[source, estimator],
                                help="Per-class IDs of a labeled dataset as a JSON report")
    cls.add_argument("--seed", type=int, default=0, help="Seed for noise and shuffled transforms")
    cls.add_argument("--out", type=str, help="Report path (default: stdout)")
    cls.add_argument("--fallback", action="store_true",
                     help="Impute the mean ID for classes whose estimation fails")
    cls.add_argument("--max-workers", type=int, help="Classes estimated in parallel")
    cls.add_argument("--noise-sigma", type=float, default=0.0,
                     help="Add clipped Gaussian noise of this std before estimation")
    cls.add_argument("--transform", choices=TRANSFORM_MODES, default="none")
    cls.add_argument("--weights-kind", choices=WEIGHT_KINDS, nargs="+",
                     help="Also derive these artifacts into the report")
    cls.add_argument("--dro-scale", type=float, default=0.5)

    wts = subparsers.add_parser("weights", help="Derive mitigation artifacts from a stored report")
    wts.add_argument("--report", required=True, help="Report written by classwise")
    wts.add_argument("--weights-kind", choices=WEIGHT_KINDS, required=True)
    wts.add_argument("--dro-scale", type=float, default=0.5, help="DRO margin total C (default: 0.5)")
    wts.add_argument("--ldam-scale", type=float, default=0.5,
                     help="Constant of the cardinality LDAM baseline C/N^(1/4)")
    wts.add_argument("--blend", type=str, help="Progressive sampling position t/T")
    wts.add_argument("--baseline", action="store_true", help="Emit the cardinality-based counterpart")
    wts.add_argument("--transform", choices=TRANSFORM_MODES, default="none")
    wts.add_argument("--seed", type=int, help="Seed for the shuffled transform")
    wts.add_argument("--out", type=str, help="Output path (default: stdout)")

    syn = subparsers.add_parser("synth", help="Write synthetic data with known ID")
    syn.add_argument("--intrinsic-d", type=int, default=5)
    syn.add_argument("--extrinsic-D", type=int, default=10, dest="extrinsic_D")
    syn.add_argument("--n", type=int, default=1000)
    syn.add_argument("--covariance", choices=sorted(COVARIANCE_ALIASES), default="identity")
    syn.add_argument("--cov-param", type=float, help="σ, total variance or generalized variance")
    syn.add_argument("--no-rotate", action="store_true")
    syn.add_argument("--rotation-passes", type=int, default=1)
    syn.add_argument("--uniform-cube", action="store_true", help="Uniform [0,1]^d block instead of a Gaussian")
    syn.add_argument("--noise-sigma", type=float, default=0.0)
    syn.add_argument("--class-dims", type=str, help="Comma-separated per-class IDs for a labeled dataset")
    syn.add_argument("--counts", type=str, help="Comma-separated per-class counts")
    syn.add_argument("--n-max", type=int, help="Long-tail head count (with --rho)")
    syn.add_argument("--rho", type=float, help="Long-tail imbalance ratio")
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--format", choices=("csv", "idm1"), default="csv", dest="fmt")
    syn.add_argument("--out", type=str, required=True)

    bench = subparsers.add_parser("bench", parents=[estimator], help="Run robustness sweeps to CSV")
    bench.add_argument("--suite", choices=BENCH_SUITES + ("all",), nargs="+", required=True)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--repeats", type=int, default=1, help="Seeds seed..seed+r-1 per sweep point")
    bench.add_argument("--rotation-passes", type=int, default=1)
    bench.add_argument("--max-workers", type=int)
    bench.add_argument("--out", type=str, default="bench", help="Output directory (default: bench)")
    bench.add_argument("--resume", action="store_true", help="Reuse checkpointed sweep points")
    bench.add_argument("--checkpoint-dir", type=str)

    return parser


def estimator_from_args(args: argparse.Namespace) -> EstimatorSpec:
    if args.estimator == "fishers":
        grid = parse_alpha_grid(args.alpha_grid) if args.alpha_grid else None
        config = FisherSConfig(
            conditional_number=args.cond_number,
            selection_factor=args.selection_factor,
            dedupe=args.dedupe,
            **({"alpha_grid": grid} if grid else {}),
        )
    else:
        config = KnnConfig(
            k=args.k,
            apply_correction=not args.no_correction,
            tle_epsilon=args.tle_epsilon,
            tle_aggregation=args.tle_aggregation,
        )
    return EstimatorSpec(args.estimator, config)


def parse_blend(text: Optional[str]) -> Optional[Tuple[float, float]]:
    if text is None:
        return None
    try:
        t, total = (float(part) for part in text.split("/"))
    except ValueError:
        raise ConfigError(f"--blend must look like t/T, got {text!r}") from None
    return t, total


def parse_int_list(text: Optional[str], name: str) -> Optional[list]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{name} must be comma-separated integers, got {text!r}") from None


def args_to_config(args: argparse.Namespace) -> Dict[str, Any]:
    """Convert parsed arguments to the configuration dictionary echoed into outputs"""
    config = {"command": args.command}
    if hasattr(args, "estimator"):
        spec = estimator_from_args(args)
        config["estimator"] = spec.name
        config["estimator_config"] = spec.config.to_dict()
    for key in ("seed", "repeats", "rotation_passes", "fallback", "noise_sigma", "transform",
                "weights_kind", "dro_scale", "ldam_scale", "blend", "baseline", "fmt", "pixel_scale"):
        if hasattr(args, key):
            config[key] = getattr(args, key)
    if args.command == "bench":
        suites = list(BENCH_SUITES) if "all" in args.suite else list(dict.fromkeys(args.suite))
        config["suite"] = suites
    return config


def print_configuration_summary(config: Dict[str, Any]):
    """Log a summary of the current configuration"""
    logger.info("🚀 Running %s", config["command"])
    if config.get("estimator"):
        settings = ", ".join(
            f"{key}={value}" for key, value in config["estimator_config"].items() if key != "alpha_grid"
        )
        logger.info("📋 Estimator %s (%s)", config["estimator"], settings)
        grid = config["estimator_config"].get("alpha_grid")
        if grid:
            logger.info("📋 α grid: %s .. %s (%d values)", grid[0], grid[-1], len(grid))
    if config.get("suite"):
        logger.info("📋 Suites: %s", ", ".join(config["suite"]))
    if config.get("seed") is not None:
        logger.info("🎲 Seed: %s", config["seed"])
    if config.get("transform") not in (None, "none"):
        logger.info("🔀 Profile transform: %s", config["transform"])


def print_run_summary(checkpoint_manager):
    """Log a summary of the current bench run"""
    summary = checkpoint_manager.get_run_summary()
    logger.info("📊 Current run summary:")
    logger.info("   Run ID: %s", summary.get("run_id", "Unknown"))
    logger.info("   Status: %s", summary.get("status", "Unknown"))
    for suite, info in summary.get("suites", {}).items():
        status_emoji = {"completed": "✅", "in_progress": "🔄", "failed": "❌"}.get(info["status"], "❓")
        logger.info("  %s %s: %s (%d/%d points, %d failed)", status_emoji, suite, info["status"],
                    info["processed_count"], info["total_items"], info["failure_count"])
