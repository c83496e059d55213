"""Command-line front end.

Exit status: 0 on success, 1 if some tasks failed, 2 on invalid
configuration or arguments.
"""

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import baseline_from_spectrogram
from .config import ExperimentConfig, load_config, parse_config_text
from .degradation import degrade, plan_gaps
from .exceptions import (
    CannotPlaceGapsError,
    InconsistentMaskError,
    InvalidParameterError,
    UnsupportedFormatError,
)
from .experiment import read_results, run_experiment, write_aggregate
from .fileio import load_mask, load_wav, save_mask, save_wav
from .metrics import METHODS, snr
from .solver import AdmmConfig, janssen_tf
from .stft import StftParams, istft, stft

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_INVALID = 2

logger = logging.getLogger("tfinpaint")


def _add_stft_args(parser):
    parser.add_argument("--win-len", type=int, default=2048)
    parser.add_argument("--hop", type=int, default=512)
    parser.add_argument("--n-channels", type=int, default=2048)
    parser.add_argument("--frame-offset", type=int, default=0)


def _stft_params(args):
    return StftParams(
        win_len=args.win_len, hop=args.hop, n_channels=args.n_channels, frame_offset=args.frame_offset
    )


def cmd_degrade(args):
    sig = load_wav(args.input)
    params = _stft_params(args)
    spec = stft(sig.samples, params)
    margin = args.margin if args.margin is not None else params.frames_per_window
    separation = args.separation if args.separation is not None else 2 * params.frames_per_window
    plan = plan_gaps(spec.n_columns, args.gap_len, args.n_gaps, args.seed, margin, separation)
    observed, _ = degrade(spec, plan)
    save_mask(args.mask_out, plan, params, sig.samples.size)
    if args.output:
        save_wav(args.output, istft(observed, sig.samples.size), sig.sample_rate)
    print(f"{args.mask_out}: gaps of {plan.gap_len_columns} columns at {list(plan.starts)}")
    return EXIT_OK


def cmd_inpaint(args):
    sig = load_wav(args.input)
    plan, params, length = load_mask(args.mask)
    if length != sig.samples.size:
        raise InconsistentMaskError(f"mask is for {length} samples, {args.input} has {sig.samples.size}")
    observed, mask = degrade(stft(sig.samples, params), plan)
    if args.method == "gapwise_janssen":
        x_hat, _ = baseline_from_spectrogram(
            observed, mask, args.baseline_order, args.baseline_iters, args.baseline_context
        )
    else:
        cfg = AdmmConfig(
            rho=args.rho, inner_iters=args.inner_iters,
            outer_iters=args.outer_iters, ar_order=args.ar_order,
        )
        result = janssen_tf(observed, mask, cfg)
        x_hat = result.signal if args.method == "janssen_tf_raw" else result.signal_context()
    save_wav(args.output, x_hat, sig.sample_rate)
    print(f"{args.output}: SNR against the input {snr(sig.samples, x_hat):.3f} dB")
    return EXIT_OK


def cmd_evaluate(args):
    if args.results:
        records = read_results(args.results)
        out = Path(args.output_dir or Path(args.results).parent)
        out.mkdir(parents=True, exist_ok=True)
        rows = write_aggregate(out, records, args.alpha, args.n_resamples, args.seed)
        print("method,gap_len,mean_snr_db,ci_lo,ci_hi,n")
        for r in rows:
            print(f"{r.method},{r.gap_len},{r.mean_snr_db:.3f},{r.ci_lo:.3f},{r.ci_hi:.3f},{r.n}")
        return EXIT_OK
    if not (args.reference and args.estimate):
        raise InvalidParameterError("give --reference and --estimate, or --results")
    ref = load_wav(args.reference).samples
    est = load_wav(args.estimate).samples
    n = min(ref.size, est.size)
    if ref.size != est.size:
        logger.warning("length mismatch (%d vs %d), comparing the first %d samples", ref.size, est.size, n)
    value = snr(ref[:n], est[:n])
    print("inf" if math.isinf(value) else f"{value:.6f}")
    return EXIT_OK


def cmd_run_experiment(args):
    overrides = list(args.set or [])
    for key in ("corpus_dir", "output_dir", "workers", "seed"):
        value = getattr(args, key)
        if value is not None:
            overrides.append(f"{key} = {value}")
    if args.config:
        config = load_config(args.config, overrides)
    else:
        config = ExperimentConfig(**parse_config_text("\n".join(overrides)))
    result = run_experiment(config)
    print(f"{len(result.records)} records written to {result.output_dir}")
    if result.failures:
        print(f"{len(result.failures)} task(s) failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_version(args):
    print(__version__)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="tfinpaint", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degrade", help="drop spectrogram columns and write a mask file")
    p.add_argument("input")
    p.add_argument("--gap-len", type=int, required=True, help="columns per gap")
    p.add_argument("--n-gaps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--margin", type=int, default=None, help="columns kept free at both ends")
    p.add_argument("--separation", type=int, default=None, help="observed columns between gaps")
    p.add_argument("--mask-out", required=True)
    p.add_argument("--output", help="write the synthesis of the degraded spectrogram")
    _add_stft_args(p)
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("inpaint", help="reconstruct the columns listed in a mask file")
    p.add_argument("input", help="signal whose spectrogram is degraded by the mask")
    p.add_argument("--mask", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--method", choices=METHODS, default="janssen_tf_raw")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--inner-iters", type=int, default=20)
    p.add_argument("--outer-iters", type=int, default=10)
    p.add_argument("--ar-order", type=int, default=512)
    p.add_argument("--baseline-order", type=int, default=512)
    p.add_argument("--baseline-iters", type=int, default=10)
    p.add_argument("--baseline-context", type=int, default=None)
    p.set_defaults(func=cmd_inpaint)

    p = sub.add_parser("evaluate", help="SNR of a reconstruction, or aggregate a results CSV")
    p.add_argument("--reference")
    p.add_argument("--estimate")
    p.add_argument("--results", help="results.csv to aggregate")
    p.add_argument("--output-dir")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--n-resamples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run-experiment", help="degrade and reconstruct a whole WAV corpus")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--corpus-dir")
    p.add_argument("--output-dir")
    p.add_argument("--workers", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_run_experiment)

    p = sub.add_parser("version", help="print the package version")
    p.set_defaults(func=cmd_version)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    np.seterr(all="ignore")
    try:
        return args.func(args)
    except (InvalidParameterError, CannotPlaceGapsError, InconsistentMaskError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UnsupportedFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
