"""Corpus-level degradation and evaluation runs.

For every WAV file of the corpus and every gap length, a seeded plan of
missing columns is drawn, the spectrogram is degraded and each requested
method reconstructs the signal. Output layout under ``output_dir``::

    masks/<signal>_g<gap>.json                       gap placement
    reconstructions/<signal>_<method>_g<gap>_s<seed>.wav
    results.csv       signal_id,method,gap_len,snr_db,runtime_s
    gap_snr.csv       SNR restricted to the samples under missing columns
    aggregate.csv     method,gap_len,mean_snr_db,ci_lo,ci_hi,n
    aggregate.json    the same table with counts of exact reconstructions
    plot/<method>.dat gap length vs. mean SNR and interval bounds
    timings.csv       wall-clock time of every reconstruction
    config.txt        the effective configuration

Everything except ``timings.csv`` is a deterministic function of the
configuration and the corpus. Wall-clock runtimes go to ``results.csv`` only
when ``record_runtime`` is enabled.
"""

import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baseline import baseline_from_spectrogram
from .config import config_to_text
from .degradation import degrade, derive_seed, plan_gaps
from .fileio import load_wav, save_mask, save_wav
from .metrics import METHODS, MetricsRecord, aggregate, snr, snr_region
from .solver import janssen_tf
from .stft import affected_samples, stft

__all__ = ["ExperimentResult", "run_experiment", "write_aggregate", "read_results", "synthesize_ar_corpus"]

logger = logging.getLogger(__name__)

RESULTS_HEADER = ["signal_id", "method", "gap_len", "snr_db", "runtime_s"]
AGGREGATE_HEADER = ["method", "gap_len", "mean_snr_db", "ci_lo", "ci_hi", "n"]


@dataclass
class ExperimentResult:
    records: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    output_dir: Path | None = None

    @property
    def ok(self):
        return not self.failures


def _fmt(value):
    return repr(float(value))


def _run_task(config, path, gap_len):
    """Degrade one signal at one gap length and run every method on it."""
    out = Path(config.output_dir)
    signal_id = path.stem
    sig = load_wav(path)
    params = config.stft_params()
    spec = stft(sig.samples, params)
    seed = derive_seed(config.seed, signal_id, gap_len)
    plan = plan_gaps(
        spec.n_columns, gap_len, config.n_gaps, seed, config.margin, config.separation
    )
    observed, mask = degrade(spec, plan)
    save_mask(out / "masks" / f"{signal_id}_g{gap_len}.json", plan, params, sig.samples.size)
    region = ~affected_samples(mask, params, sig.samples.size)

    estimates = {}
    if {"janssen_tf_raw", "janssen_tf_context"} & set(config.methods):
        start = time.perf_counter()
        result = janssen_tf(observed, mask, config.admm_config())
        elapsed = time.perf_counter() - start
        estimates["janssen_tf_raw"] = (result.signal, elapsed)
        estimates["janssen_tf_context"] = (result.signal_context(), elapsed)
    if "gapwise_janssen" in config.methods:
        start = time.perf_counter()
        x_hat, _ = baseline_from_spectrogram(
            observed, mask, config.baseline_order, config.baseline_iters, config.context
        )
        estimates["gapwise_janssen"] = (x_hat, time.perf_counter() - start)

    records = []
    for method in config.methods:
        x_hat, elapsed = estimates[method]
        if config.save_reconstructions:
            name = f"{signal_id}_{method}_g{gap_len}_s{seed}.wav"
            save_wav(out / "reconstructions" / name, x_hat, sig.sample_rate)
        gap_snr = snr_region(sig.samples, x_hat, region) if region.any() else math.nan
        records.append(MetricsRecord(
            signal_id, method, gap_len, snr(sig.samples, x_hat), elapsed, seed, gap_snr,
        ))
    return records


def _safe_task(args):
    config, path, gap_len = args
    try:
        return _run_task(config, path, gap_len), None
    except Exception as exc:  # noqa: BLE001 - one bad signal must not stop the batch
        logger.exception("%s, gap length %d failed", path.name, gap_len)
        return [], f"{path.name} gap_len={gap_len}: {type(exc).__name__}: {exc}"


def _sort_key(rec):
    return (rec.signal_id, METHODS.index(rec.method), rec.gap_len)


def write_results(path, records, record_runtime):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for rec in records:
            runtime = _fmt(rec.runtime_s) if record_runtime else ""
            writer.writerow([rec.signal_id, rec.method, rec.gap_len, _fmt(rec.snr_db), runtime])


def read_results(path):
    """Load ``results.csv`` rows as metrics records."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            runtime = float(row["runtime_s"]) if row.get("runtime_s") else 0.0
            records.append(MetricsRecord(
                row["signal_id"], row["method"], int(row["gap_len"]), float(row["snr_db"]), runtime,
            ))
    return records


def write_aggregate(out_dir, records, alpha=0.05, n_resamples=10000, seed=0):
    """Write the aggregate table (CSV and JSON) and per-method plot series."""
    out_dir = Path(out_dir)
    rows = aggregate(records, alpha, n_resamples, seed)
    with open(out_dir / "aggregate.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGGREGATE_HEADER)
        for r in rows:
            writer.writerow([r.method, r.gap_len, _fmt(r.mean_snr_db), _fmt(r.ci_lo), _fmt(r.ci_hi), r.n])
    doc = {
        "alpha": alpha,
        "n_resamples": n_resamples,
        "rows": [
            {
                "method": r.method, "gap_len": r.gap_len, "mean_snr_db": r.mean_snr_db,
                "ci_lo": r.ci_lo, "ci_hi": r.ci_hi, "n": r.n, "n_infinite": r.n_infinite,
                "degenerate": r.degenerate,
            }
            for r in rows
        ],
    }
    with open(out_dir / "aggregate.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
    plot_dir = out_dir / "plot"
    plot_dir.mkdir(exist_ok=True)
    for method in sorted({r.method for r in rows}):
        with open(plot_dir / f"{method}.dat", "w", encoding="utf-8") as fh:
            fh.write("# gap_len mean_snr_db ci_lo ci_hi\n")
            for r in rows:
                if r.method == method:
                    fh.write(f"{r.gap_len} {_fmt(r.mean_snr_db)} {_fmt(r.ci_lo)} {_fmt(r.ci_hi)}\n")
    return rows


def run_experiment(config):
    """Run the whole protocol on a corpus directory.

    Failures of single (signal, gap length) tasks are logged and reported in
    the returned :class:`ExperimentResult`; the remaining tasks still run.
    """
    corpus = Path(config.corpus_dir)
    if not corpus.is_dir():
        raise FileNotFoundError(f"corpus directory {corpus} does not exist")
    out = Path(config.output_dir)
    for sub in ("masks", "reconstructions"):
        (out / sub).mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(config_to_text(config), encoding="utf-8")

    files = sorted(p for p in corpus.iterdir() if p.suffix.lower() == ".wav" and p.is_file())
    if not files:
        logger.warning("no WAV files in %s", corpus)
    tasks = [(config, path, g) for path in files for g in sorted(set(config.gap_lengths))]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_safe_task, tasks))
    else:
        outcomes = [_safe_task(t) for t in tasks]

    result = ExperimentResult(output_dir=out)
    for records, failure in outcomes:
        result.records.extend(records)
        if failure:
            result.failures.append(failure)
    result.records.sort(key=_sort_key)

    write_results(out / "results.csv", result.records, config.record_runtime)
    with open(out / "gap_snr.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["signal_id", "method", "gap_len", "seed", "snr_gap_db"])
        for rec in result.records:
            writer.writerow([rec.signal_id, rec.method, rec.gap_len, rec.seed, _fmt(rec.snr_gap_db)])
    with open(out / "timings.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["signal_id", "method", "gap_len", "runtime_s"])
        for rec in result.records:
            writer.writerow([rec.signal_id, rec.method, rec.gap_len, f"{rec.runtime_s:.3f}"])
    if result.records:
        write_aggregate(out, result.records, config.alpha, config.n_resamples, config.seed)
    for failure in result.failures:
        logger.error("failed: %s", failure)
    return result


def synthesize_ar_corpus(directory, n_signals, seconds=5.0, sample_rate=16000, seed=0):
    """Write WAV files of stable random AR(4) processes, for smoke tests and demos."""
    from scipy.signal import lfilter

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    n = int(round(seconds * sample_rate))
    paths = []
    for i in range(n_signals):
        freqs = rng.uniform(200.0, 3000.0, size=2)
        radii = rng.uniform(0.95, 0.995, size=2)
        poles = np.concatenate([r * np.exp(1j * 2 * np.pi * f / sample_rate * np.array([1, -1]))
                                for r, f in zip(radii, freqs)])
        a = np.real(np.poly(poles))
        x = lfilter([1.0], a, rng.standard_normal(n + 4000))[4000:]
        x *= 0.5 / np.max(np.abs(x))
        path = directory / f"ar4_{i:02d}.wav"
        save_wav(path, x, sample_rate)
        paths.append(path)
    return paths
