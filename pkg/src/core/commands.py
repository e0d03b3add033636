"""
Command implementations for the intrinsic dimension CLI.

Each ``cli_*`` function takes the parsed arguments plus environment settings, writes its
outputs and returns a process exit code. Library errors propagate to ``main`` which maps
them to exit codes.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from core.checkpoint import CheckpointManager, make_run_id
from core.config.cli_config import (
    COVARIANCE_ALIASES, args_to_config, estimator_from_args, parse_blend, parse_int_list,
    print_configuration_summary, print_run_summary
)
from core.config.settings import Settings
from intdim.bench import run_bench
from intdim.errors import ConfigError, DegenerateClass
from intdim.imbalance import (
    derive_report, id_imbalance_ratio, imbalance_ratio, run_classwise, stamp, transform_profile
)
from intdim.io import build_report, dumps_report, read_dataset, read_report, write_csv, write_idm1
from intdim.models import LabeledDataset
from intdim.synth import (
    CovarianceKind, GaussianSpec, LongTailSpec, NoiseSpec, add_noise, longtail_counts,
    make_labeled_synthetic, minmax_scale, sample_gaussian, sample_uniform_cube
)
from intdim.version import __version__
from utils.helpers import atomic_write_text

logger = logging.getLogger(__name__)


def _emit(text: str, out: Optional[str]):
    """Write ``text`` atomically to ``out``, or to stdout when no path is given."""
    if out:
        atomic_write_text(out, text)
        logger.info("📝 Output written to %s", out)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _source_info(args: argparse.Namespace, data: np.ndarray) -> Dict[str, Any]:
    return {
        "path": str(args.input),
        "format": args.fmt,
        "n": int(data.shape[0]),
        "D": int(data.shape[1]),
    }


def cli_estimate(args: argparse.Namespace, settings: Settings) -> int:
    config = args_to_config(args)
    print_configuration_summary(config)
    spec = estimator_from_args(args)

    loaded = read_dataset(args.input, args.fmt, labeled=args.labeled,
                          has_header=args.has_header, pixel_scale=args.pixel_scale)
    data = loaded.data if isinstance(loaded, LabeledDataset) else loaded
    logger.info("🔄 Estimating ID of %d x %d samples with %s", data.shape[0], data.shape[1], spec.name)

    estimate = spec.estimate(data)
    logger.info("✅ Estimated ID: %.4f", estimate.value)
    payload = {
        "schema_version": 1,
        "tool_version": __version__,
        "estimator": spec.tag(),
        "seed": args.seed,
        "source": _source_info(args, data),
        "estimate": estimate.to_dict(),
        "timestamp": settings.provenance_timestamp(),
    }
    _emit(_dumps(payload), args.out)
    return 0


def cli_classwise(args: argparse.Namespace, settings: Settings) -> int:
    config = args_to_config(args)
    print_configuration_summary(config)
    spec = estimator_from_args(args)

    dataset = read_dataset(args.input, args.fmt, labeled=True,
                           has_header=args.has_header, pixel_scale=args.pixel_scale)
    if not isinstance(dataset, LabeledDataset):
        raise ConfigError(f"{args.input} carries no labels; classwise needs a labeled dataset")
    if args.noise_sigma > 0:
        logger.info("🔊 Adding noise σ=%s before estimation", args.noise_sigma)
        noisy = add_noise(dataset.data, NoiseSpec(sigma=args.noise_sigma, seed=args.seed))
        dataset = LabeledDataset(data=noisy, labels=dataset.labels, label_space=dataset.label_space)

    max_workers = args.max_workers or settings.max_workers
    logger.info("🔄 Estimating %d classes with %s", dataset.num_classes, spec.name)
    run = run_classwise(dataset, spec, fallback=args.fallback, max_workers=max_workers)
    profile = transform_profile(run.profile, args.transform, seed=args.seed)

    timestamp = settings.provenance_timestamp()
    artifacts = [
        stamp(derive_report(kind, profile, dro_scale=args.dro_scale), timestamp)
        for kind in (args.weights_kind or [])
    ]
    try:
        id_ratio = id_imbalance_ratio(profile)
    except DegenerateClass:
        id_ratio = None
    source = _source_info(args, dataset.data)
    source["noise_sigma"] = args.noise_sigma
    report = build_report(
        profile,
        estimates=run.estimates,
        artifacts=artifacts,
        seed=args.seed,
        measures={"imbalance_ratio": imbalance_ratio(profile.counts), "id_imbalance_ratio": id_ratio},
        source=source,
        timestamp=timestamp,
    )
    for record in report.classes:
        logger.info("   class %d: n=%d ID=%.4f share=%.4f%s", record.label, record.count,
                    record.id_raw, record.id_norm, " (imputed)" if record.imputed else "")
    _emit(dumps_report(report), args.out)
    return 0


def cli_weights(args: argparse.Namespace, settings: Settings) -> int:
    report = read_report(args.report)
    profile = transform_profile(report.profile(), args.transform, seed=args.seed)
    artifact = derive_report(
        args.weights_kind,
        profile,
        dro_scale=args.dro_scale,
        ldam_scale=args.ldam_scale,
        baseline=args.baseline,
        blend=parse_blend(args.blend),
    )
    artifact = stamp(artifact, settings.provenance_timestamp())
    logger.info("✅ %s: %s", artifact.kind.value, ", ".join(f"{v:.5g}" for v in artifact.values))
    _emit(_dumps(artifact.to_dict()), args.out)
    return 0


def _covariance_from_args(args: argparse.Namespace) -> CovarianceKind:
    name = COVARIANCE_ALIASES[args.covariance]
    return CovarianceKind(name, args.cov_param) if name != "identity" else CovarianceKind.identity()


def cli_synth(args: argparse.Namespace, settings: Settings) -> int:
    labels = None
    class_dims = parse_int_list(args.class_dims, "--class-dims")
    if class_dims:
        counts = parse_int_list(args.counts, "--counts")
        if counts is None and args.rho is not None:
            counts = list(longtail_counts(LongTailSpec(len(class_dims), args.n_max or args.n, args.rho)))
        if counts is None:
            counts = [args.n] * len(class_dims)
        logger.info("🔄 Generating %d classes with IDs %s and counts %s", len(class_dims), class_dims, counts)
        dataset = make_labeled_synthetic(class_dims, counts, args.extrinsic_D, seed=args.seed,
                                         rotate=not args.no_rotate)
        data, labels = dataset.data, dataset.labels
    elif args.uniform_cube:
        data = sample_uniform_cube(args.intrinsic_d, args.extrinsic_D, args.n, seed=args.seed,
                                   rotate=not args.no_rotate)
    else:
        spec = GaussianSpec(
            intrinsic_d=args.intrinsic_d,
            extrinsic_D=args.extrinsic_D,
            n=args.n,
            covariance=_covariance_from_args(args),
            rotate=not args.no_rotate,
            seed=args.seed,
            rotation_passes=args.rotation_passes,
        )
        data = sample_gaussian(spec)

    if args.noise_sigma > 0:
        data = add_noise(minmax_scale(data), NoiseSpec(sigma=args.noise_sigma, seed=args.seed))

    if args.fmt == "idm1":
        write_idm1(args.out, data, labels)
    else:
        write_csv(args.out, data, labels)
    logger.info("✅ Wrote %d x %d samples to %s", data.shape[0], data.shape[1], args.out)
    return 0


def cli_bench(args: argparse.Namespace, settings: Settings) -> int:
    config = args_to_config(args)
    print_configuration_summary(config)
    spec = estimator_from_args(args)
    max_workers = args.max_workers or settings.max_workers

    manager = CheckpointManager(args.checkpoint_dir or settings.checkpoint_dir)
    run_id = make_run_id(config)
    resumed = args.resume and manager.resume_run(run_id) is not None
    if resumed and not manager.validate_config_compatibility(config):
        logger.error("❌ Configuration mismatch with stored run %s; rerun without --resume", run_id)
        return 1
    if not resumed:
        manager.start_new_run(run_id, f"Bench {', '.join(config['suite'])}", config)
    else:
        print_run_summary(manager)

    try:
        run_bench(
            config["suite"],
            seed=args.seed,
            out_dir=Path(args.out),
            estimator=spec,
            repeats=args.repeats,
            max_workers=max_workers,
            rotation_passes=args.rotation_passes,
            manager=manager,
        )
    except KeyboardInterrupt:
        logger.warning("⏹️ Process interrupted by user")
        logger.warning("💾 Progress has been saved. You can resume with --resume")
        return 1
    manager.complete_run()
    return 0


COMMANDS = {
    "estimate": cli_estimate,
    "classwise": cli_classwise,
    "weights": cli_weights,
    "synth": cli_synth,
    "bench": cli_bench,
}

__all__ = ['COMMANDS', 'cli_bench', 'cli_classwise', 'cli_estimate', 'cli_synth', 'cli_weights']
