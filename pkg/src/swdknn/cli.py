"""Command-line pipeline: synth -> extract -> train -> classify -> evaluate.

Exit codes: 0 success, 2 usage or input error, 3 every fit failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from . import signal_io
from .exceptions import (
    DegenerateSample,
    KTooLarge,
    LengthMismatch,
    MissingFile,
    NotConverged,
    SchemaViolation,
    SwdError,
)
from .knn import KnnConfig, LabeledDataset, classify_batch, fit_scaling
from .metrics import confusion, rates
from .optimizer import SimplexConfig
from .signal_io import FeatureTable, fmt
from .synth import DEFAULT_BACKGROUND, SwdEvent, SynthSpec, generate, make_corpus
from .tls_model import TlsParams, fit_mle
from .windowing import WindowSpec, label_segment, segment_channel

log = logging.getLogger("swdknn")

EXIT_OK, EXIT_INPUT, EXIT_FIT = 0, 2, 3

PAIRS = {
    "mu-sigma": (0, 1, "mu", "sigma"),
    "mu-nu": (0, 2, "mu", "nu"),
    "sigma-nu": (1, 2, "sigma", "nu"),
}


class UsageError(Exception):
    pass


def _fit_one(samples, config):
    try:
        return fit_mle(samples, config).params
    except (DegenerateSample, NotConverged, ValueError) as exc:
        return exc


def extract_features(recording, annotations=None, window_samples: Optional[int] = 256,
                     overlap_threshold: float = 0.5, config: Optional[SimplexConfig] = None,
                     jobs: int = 1):
    """Fit every segment of every channel; returns ``(table, n_failed)``.

    ``window_samples=None`` fits each channel as one whole-epoch segment.
    Rows are channel-major and time-ascending whatever ``jobs`` is.
    """
    w = recording.n_samples if window_samples is None else window_samples
    spec = WindowSpec(w)
    if annotations is not None:
        signal_io.check_annotations(annotations, recording)
    segments = [s for ch in recording.channels for s in segment_channel(recording, ch, spec)]
    samples = [s.samples for s in segments]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fits = list(pool.map(_fit_one, samples, [config] * len(samples), chunksize=8))
    else:
        fits = [_fit_one(x, config) for x in samples]

    table = FeatureTable()
    failed = 0
    for seg, fit in zip(segments, fits):
        if isinstance(fit, Exception):
            failed += 1
            log.warning("fit failed for %s@%d: %s", seg.channel, seg.start_index, fit)
            continue
        label = None
        if annotations is not None:
            label = label_segment(seg, annotations, recording.sample_rate_hz, overlap_threshold)
        table.append(seg.channel, seg.start_index, (fit.mu, fit.sigma, fit.nu), label)
    return table, failed


# --- subcommands ---------------------------------------------------------

def cmd_extract(args) -> int:
    rec = signal_io.load_recording(args.recording)
    ann = signal_io.load_annotations(args.annotations) if args.annotations else None
    window = None if args.whole_epoch else args.window_samples
    config = SimplexConfig(args.tol_x, args.tol_f, args.max_iter)
    table, failed = extract_features(rec, ann, window, args.overlap_threshold, config, args.jobs)
    print(f"extracted {len(table)} feature rows, {failed} failed fits", file=sys.stderr)
    if len(table) == 0:
        return EXIT_FIT
    signal_io.save_feature_table(table, args.out)
    return EXIT_OK


def train_model(table: FeatureTable, k: int = 1, scaling: str = "none"):
    if len(table) == 0:
        raise UsageError("feature table is empty")
    if not table.is_labeled:
        raise UsageError("training needs a label on every feature row")
    dataset = LabeledDataset(table.matrix(), table.labels)
    counts = dataset.class_counts()
    if min(counts.values()) == 0:
        raise UsageError(f"training data holds a single class {counts}")
    if len(dataset) < max(k, 2):
        raise KTooLarge(f"k={k} needs at least {max(k, 2)} training rows, got {len(dataset)}")
    spec = fit_scaling(dataset.features, scaling)
    return dataset, KnnConfig(k=k, scaling=spec)


def cmd_train(args) -> int:
    table = signal_io.load_feature_table(args.features)
    dataset, config = train_model(table, args.k, args.scaling)
    signal_io.save_model(dataset, config.scaling, config, args.out)
    counts = dataset.class_counts()
    print(f"stored {len(dataset)} vectors (label 1: {counts[1]}, label 0: {counts[0]}), "
          f"k={config.k}, metric={config.metric}")
    if config.scaling.mode == "zscore":
        print("zscore means " + " ".join(fmt(v) for v in config.scaling.means))
        print("zscore stds " + " ".join(fmt(v) for v in config.scaling.stds))
    else:
        print("scaling none")
    return EXIT_OK


PREDICTION_COLUMNS = ("channel", "start_index", "label", "nearest_distance")


def cmd_classify(args) -> int:
    dataset, _, config = signal_io.load_model(args.model)
    table = signal_io.load_feature_table(args.features)
    if len(table) == 0:
        raise UsageError("feature table is empty")
    preds = classify_batch(table.features, dataset, config)
    lines = [",".join(PREDICTION_COLUMNS)]
    for ch, start, p in zip(table.channels, table.start_indices, preds):
        lines.append(f"{ch},{start},{p.label},{fmt(p.neighbor_distances[0])}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"classified {len(preds)} rows", file=sys.stderr)
    return EXIT_OK


def load_predictions(path):
    """Rows of ``(channel, start_index, label)`` from a predictions file."""
    if not Path(path).is_file():
        raise MissingFile(f"no such file: {path}")
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or tuple(lines[0].split(",")) != PREDICTION_COLUMNS:
        raise SchemaViolation(f"{path}: expected header {','.join(PREDICTION_COLUMNS)}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(PREDICTION_COLUMNS) or cells[2] not in ("0", "1"):
            raise SchemaViolation(f"{path}:{lineno}: malformed prediction row")
        rows.append((cells[0], int(cells[1]), int(cells[2])))
    return rows


def _rate_text(v) -> str:
    return "undefined" if v is None else fmt(v)


def _report_block(name, cm) -> List[str]:
    r = rates(cm)
    return [
        f"[{name}]",
        f"tp={cm.tp}", f"tn={cm.tn}", f"fp={cm.fp}", f"fn={cm.fn}",
        f"accuracy={_rate_text(r.accuracy)}",
        f"sensitivity={_rate_text(r.sensitivity)}",
        f"specificity={_rate_text(r.specificity)}",
    ]


def evaluate(predictions, truth: FeatureTable) -> str:
    """Report text for per-segment and per-signal scoring.

    A signal (channel) counts as positive when at least one of its segments
    is positive, both for predictions and for ground truth.
    """
    if not truth.is_labeled:
        raise UsageError("truth table must be fully labeled")
    if len(predictions) != len(truth):
        raise LengthMismatch(f"{len(predictions)} predictions but {len(truth)} truth rows")
    for (ch, start, _), tch, tstart in zip(predictions, truth.channels, truth.start_indices):
        if (ch, start) != (tch, tstart):
            raise LengthMismatch(f"prediction row {ch}@{start} is aligned with truth row {tch}@{tstart}")
    pred = [p[2] for p in predictions]
    seg_cm = confusion(pred, truth.labels)

    sig_pred, sig_true = {}, {}
    for p, ch, t in zip(pred, truth.channels, truth.labels):
        sig_pred[ch] = max(sig_pred.get(ch, 0), p)
        sig_true[ch] = max(sig_true.get(ch, 0), t)
    order = list(sig_pred)
    sig_cm = confusion([sig_pred[c] for c in order], [sig_true[c] for c in order])
    return "\n".join(_report_block("segment", seg_cm) + _report_block("signal", sig_cm)) + "\n"


def cmd_evaluate(args) -> int:
    predictions = load_predictions(args.predictions)
    truth = signal_io.load_feature_table(args.truth)
    report = evaluate(predictions, truth)
    if args.out:
        Path(args.out).write_text(report)
    sys.stdout.write(report)
    return EXIT_OK


def scatter_rows(table: FeatureTable, pair: str) -> str:
    if pair not in PAIRS:
        raise UsageError(f"unknown pair {pair!r}; choose from {', '.join(PAIRS)}")
    if not table.is_labeled:
        raise UsageError("scatter export needs a labeled feature table")
    i, j, a, b = PAIRS[pair]
    lines = [f"{a},{b},label"]
    lines.extend(f"{fmt(f[i])},{fmt(f[j])},{lab}" for f, lab in zip(table.features, table.labels))
    return "\n".join(lines) + "\n"


def cmd_scatter(args) -> int:
    text = scatter_rows(signal_io.load_feature_table(args.features), args.pair)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_event(text: str) -> SwdEvent:
    parts = text.split(",")
    if len(parts) not in (2, 3, 4):
        raise argparse.ArgumentTypeError("event must be onset_s,duration_s[,cycle_hz[,amplitude_mv]]")
    try:
        return SwdEvent(*(float(p) for p in parts))
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric event field in {text!r}") from None


def _parse_params(text: str) -> TlsParams:
    try:
        mu, sigma, nu = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected mu,sigma,nu") from None
    return TlsParams(mu, sigma, nu)


def cmd_synth(args) -> int:
    if args.corpus:
        rec, ann = make_corpus(args.n_swd, args.n_background, args.seed, args.epoch_s,
                               args.sample_rate, args.background, prefix=args.prefix)
    else:
        if args.duration is None:
            raise UsageError("--duration is required unless --corpus is given")
        spec = SynthSpec(args.duration, tuple(args.event), args.sample_rate, args.background,
                         args.seed, tuple(args.channels.split(",")))
        rec, ann = generate(spec)
    signal_io.save_recording(rec, args.out_recording)
    signal_io.save_annotations(ann, args.out_annotations)
    print(f"wrote {rec.n_samples} samples x {len(rec.channels)} channels, "
          f"{len(ann)} annotations", file=sys.stderr)
    return EXIT_OK


# --- parser --------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("pipeline options")
    g.add_argument("--window-samples", type=int, default=256,
                   help="segment length W in samples (default 256)")
    g.add_argument("--overlap-threshold", type=float, default=0.5,
                   help="label-1 coverage needed to label a segment 1 (default 0.5)")
    g.add_argument("--k", type=int, default=1, help="number of neighbors (default 1)")
    g.add_argument("--scaling", choices=("none", "zscore"), default="none")
    g.add_argument("--tol-x", type=float, default=1e-8)
    g.add_argument("--tol-f", type=float, default=1e-8)
    g.add_argument("--max-iter", type=int, default=None,
                   help="simplex iteration cap (default 200 * 3)")
    g.add_argument("--seed", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="swdknn",
        description="Spike-and-wave detection with t-location-scale features and kNN.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common], help="fit (mu, sigma, nu) per segment")
    p.add_argument("recording")
    p.add_argument("--annotations")
    p.add_argument("--whole-epoch", action="store_true",
                   help="fit each channel as a single segment (W = N)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", parents=[common], help="build a kNN model from labeled features")
    p.add_argument("features")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", parents=[common], help="label feature rows with a model")
    p.add_argument("model")
    p.add_argument("features")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", parents=[common], help="score predictions against labels")
    p.add_argument("predictions")
    p.add_argument("truth", help="labeled feature table aligned with the predictions")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("scatter", parents=[common], help="export a parameter pair with labels")
    p.add_argument("features")
    p.add_argument("--pair", required=True, help="mu-sigma, mu-nu or sigma-nu")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic recording")
    p.add_argument("--out-recording", required=True)
    p.add_argument("--out-annotations", required=True)
    p.add_argument("--sample-rate", type=float, default=256.0)
    p.add_argument("--background", type=_parse_params, default=DEFAULT_BACKGROUND,
                   help="background noise as mu,sigma,nu (default 0,20,4)")
    p.add_argument("--duration", type=float, help="seconds")
    p.add_argument("--channels", default="Cz", help="comma-separated channel names")
    p.add_argument("--event", type=_parse_event, action="append", default=[],
                   help="onset_s,duration_s[,cycle_hz[,amplitude_mv]]; repeatable")
    p.add_argument("--corpus", action="store_true",
                   help="one epoch per column instead of a single recording")
    p.add_argument("--n-swd", type=int, default=96)
    p.add_argument("--n-background", type=int, default=96)
    p.add_argument("--epoch-s", type=float, default=60.0)
    p.add_argument("--prefix", default="S")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (SwdError, UsageError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
