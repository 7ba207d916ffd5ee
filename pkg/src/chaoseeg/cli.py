"""Command-line interface.

Subcommands: synth, extract, train, eval, hist, summary. Every command
is deterministic for a given argument vector; outputs embed or are
accompanied by the resolved configuration. Exit codes: 0 success (with
possible warnings on stderr), 1 runtime failure, 2 usage or validation
error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .classifiers import KMeansSvmClassifier, MlpClassifier, evaluate
from .errors import ChaosEegError, FileFormatError
from .features import (
    FEATURE_NAMES,
    FeatureVector,
    IndexParams,
    extract_features,
    histogram,
    summarize,
    trial_sort_key,
)
from .preprocessing import FeatureScaler
from .systems import SYSTEMS, SystemSpec, generate
from .timeseries import TimeSeries

_SYSTEM_PARAM_FLAGS = {
    "r": float, "a": float, "b": float, "sigma": float, "rho": float,
    "beta": float, "dt": float, "period": float, "phi": float, "seed": int,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaoseeg",
        description="Chaos indices of windowed series, with training and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic recording")
    p.add_argument("--system", required=True, choices=[s.replace("_", "-") for s in SYSTEMS])
    p.add_argument("--n", type=int, required=True, help="number of samples kept")
    p.add_argument("--transient", type=int, default=0, help="samples discarded first")
    p.add_argument("--x0", type=str, default=None, help="initial state, comma-separated")
    for flag, typ in _SYSTEM_PARAM_FLAGS.items():
        p.add_argument(f"--{flag}", type=typ, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("extract", help="compute per-trial features")
    p.add_argument("--recording", required=True)
    p.add_argument("--trials", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rate", type=float, default=1000.0, help="sampling rate in Hz")
    p.add_argument("--channel", default=None, help="override every trial's channel")
    p.add_argument(
        "--aggregate-channels", action="store_true",
        help="average each index over all channels",
    )
    p.add_argument("--bins", type=int, default=16)
    p.add_argument("--lag", type=int, default=None, help="fixed delay; default: per-window selection")
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--saturation-tol", type=float, default=0.05)
    p.add_argument("--unsaturated", choices=["max", "skip"], default="max")
    p.add_argument("--n-radii", type=int, default=24)
    p.add_argument("--theiler", type=int, default=None)
    p.add_argument("--norm", choices=["chebyshev", "euclidean"], default="chebyshev")

    p = sub.add_parser("train", help="fit a classifier on a feature file")
    p.add_argument("--features", required=True)
    p.add_argument("--model", required=True, choices=list(io.MODEL_KINDS))
    p.add_argument("--out", required=True)
    p.add_argument("--scale", choices=["minmax", "zscore", "none"], default="minmax")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=None, help="mlp: 2000, km-svm lloyd: 300")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--k-per-class", type=int, default=4)
    p.add_argument("--kernel", choices=["rbf", "linear"], default="rbf")
    p.add_argument("--C", type=float, default=10.0)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--clusters", choices=["per-class", "total"], default="per-class")

    p = sub.add_parser("eval", help="score a model file on a feature file")
    p.add_argument("--features", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("hist", help="per-class relative-frequency histogram")
    p.add_argument("--features", required=True)
    p.add_argument("--index", required=True, choices=list(FEATURE_NAMES))
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--out", required=True)

    p = sub.add_parser("summary", help="per-class mean (std) table")
    p.add_argument("--features", required=True)
    p.add_argument("--scale", choices=["none", "minmax", "zscore"], default="none")
    p.add_argument("--out", default=None, help="write here instead of stdout")
    return parser


def _cmd_synth(args) -> int:
    params = {}
    for flag in _SYSTEM_PARAM_FLAGS:
        value = getattr(args, flag)
        if value is not None:
            params[flag] = value
    x0 = None
    if args.x0 is not None:
        parts = [float(p) for p in args.x0.split(",")]
        x0 = parts[0] if len(parts) == 1 else tuple(parts)
    spec = SystemSpec(
        name=args.system.replace("-", "_"),
        n=args.n,
        params=params,
        x0=x0,
        transient=args.transient,
    )
    series = generate(spec)
    io.write_recording(args.out, series.samples)
    io.write_run_config(args.out, {
        "command": "synth",
        "system": spec.name,
        "n": args.n,
        "transient": args.transient,
        "x0": None if x0 is None else (list(x0) if isinstance(x0, tuple) else x0),
        "params": params,
        "sampling_rate": series.sampling_rate,
    })
    return 0


def _index_params(args) -> IndexParams:
    return IndexParams(
        bins=args.bins,
        lag=args.lag,
        max_lag=args.max_lag,
        m_max=args.m_max,
        saturation_tol=args.saturation_tol,
        unsaturated=args.unsaturated,
        n_radii=args.n_radii,
        theiler=args.theiler,
        norm=args.norm,
    )


def _cmd_extract(args) -> int:
    data, names = io.read_recording(args.recording)
    trials = io.read_trials(args.trials)
    params = _index_params(args)
    seen = set()
    for i, (_, w) in enumerate(trials):
        if w.trial_id in seen:
            # header is line 1, so row i sits on line i + 2
            raise FileFormatError(f"duplicate trial_id {w.trial_id!r}", line=i + 2)
        seen.add(w.trial_id)

    channels = {
        name: TimeSeries(data[:, i], sampling_rate=args.rate)
        for i, name in enumerate(names)
    }
    if args.channel is not None and args.channel not in channels:
        raise ValueError(
            f"channel {args.channel!r} not in recording (has {names})"
        )

    vectors: list[FeatureVector] = []
    skipped = []
    if args.aggregate_channels:
        for channel, w in trials:
            per_channel = []
            failure = None
            for name in names:
                result = extract_features(channels[name], [w], params)
                if result.vectors:
                    per_channel.append(result.vectors[0])
                else:
                    failure = result.skipped[0]
                    break
            if failure is not None:
                skipped.append(failure)
                continue
            stack = np.array([v.values for v in per_channel])
            mean = stack.mean(axis=0)
            vectors.append(FeatureVector(
                trial_id=str(w.trial_id), label=w.label,
                lle=float(mean[0]), mi=float(mean[1]),
                med=float(mean[2]), d2=float(mean[3]),
            ))
    else:
        by_channel: dict[str, list] = {}
        for channel, w in trials:
            name = args.channel if args.channel is not None else channel
            if name not in channels:
                raise ValueError(
                    f"trial {w.trial_id!r} names channel {name!r} "
                    f"not in recording (has {names})"
                )
            by_channel.setdefault(name, []).append(w)
        for name in sorted(by_channel):
            result = extract_features(channels[name], by_channel[name], params)
            vectors.extend(result.vectors)
            skipped.extend(result.skipped)
    vectors.sort(key=lambda v: trial_sort_key(v.trial_id))
    skipped.sort(key=lambda s: trial_sort_key(s.trial_id))

    io.write_features(args.out, vectors)
    io.write_run_config(args.out, {
        "command": "extract",
        "recording": args.recording,
        "trials": args.trials,
        "rate": args.rate,
        "channel": args.channel,
        "aggregate_channels": bool(args.aggregate_channels),
        "index_params": {
            "bins": params.bins, "lag": params.lag, "max_lag": params.max_lag,
            "m_max": params.m_max, "saturation_tol": params.saturation_tol,
            "unsaturated": params.unsaturated, "n_radii": params.n_radii,
            "theiler": params.theiler, "norm": params.norm,
        },
    })
    for s in skipped:
        print(f"warning: skipped trial {s.trial_id}: {s.reason}", file=sys.stderr)
    print(
        f"extracted {len(vectors)} of {len(trials)} trials"
        f" ({len(skipped)} skipped)",
        file=sys.stderr,
    )
    return 0


def _train_config(args) -> dict:
    return {
        "command": "train",
        "features": args.features,
        "model": args.model,
        "scale": args.scale,
        "seed": args.seed,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "k_per_class": args.k_per_class,
        "kernel": args.kernel,
        "C": args.C,
        "gamma": args.gamma,
        "restarts": args.restarts,
        "clusters": args.clusters,
    }


def _load_xy(path):
    vectors = io.read_features(path)
    if not vectors:
        raise ValueError(f"feature file {path} has no rows")
    x = np.array([v.values for v in vectors])
    y = np.array([v.label for v in vectors], dtype=np.int64)
    return vectors, x, y


def _cmd_train(args) -> int:
    _, x, y = _load_xy(args.features)
    if not ((y == 1).any() and (y == -1).any()):
        raise ValueError("training features must contain both classes")
    scaler = None
    if args.scale != "none":
        scaler = FeatureScaler(mode=args.scale).fit(x)
        x = scaler.transform(x)
    if args.model == "mlp":
        model = MlpClassifier(
            max_iters=2000 if args.max_iters is None else args.max_iters,
            tol=args.tol,
            seed=args.seed,
        ).fit(x, y)
    else:
        model = KMeansSvmClassifier(
            k_per_class=args.k_per_class,
            kernel=args.kernel,
            C=args.C,
            gamma=args.gamma,
            seed=args.seed,
            restarts=args.restarts,
            max_iters=300 if args.max_iters is None else args.max_iters,
            clusters=args.clusters,
        ).fit(x, y)
    io.write_model(args.out, args.model, model, scaler, _train_config(args))
    return 0


def _cmd_eval(args) -> int:
    _, x, y = _load_xy(args.features)
    kind, model, scaler, model_config = io.read_model(args.model)
    if scaler is not None:
        x = scaler.transform(x)
    predicted = model.predict(x)
    report = evaluate(predicted, y)
    io.write_report(args.out, report, {
        "command": "eval",
        "features": args.features,
        "model": args.model,
        "model_kind": kind,
        "model_config": model_config,
    })
    return 0


def _cmd_hist(args) -> int:
    vectors = io.read_features(args.features)
    if not vectors:
        raise ValueError(f"feature file {args.features} has no rows")
    hist = histogram(vectors, args.index, args.bins)
    io.write_histogram(args.out, hist)
    io.write_run_config(args.out, {
        "command": "hist",
        "features": args.features,
        "index": args.index,
        "bins": args.bins,
    })
    return 0


def _cmd_summary(args) -> int:
    vectors = io.read_features(args.features)
    if not vectors:
        raise ValueError(f"feature file {args.features} has no rows")
    if args.scale != "none":
        x = np.array([v.values for v in vectors])
        scaled = FeatureScaler(mode=args.scale).fit(x).transform(x)
        vectors = [
            FeatureVector(
                trial_id=v.trial_id, label=v.label,
                lle=float(r[0]), mi=float(r[1]), med=float(r[2]), d2=float(r[3]),
            )
            for v, r in zip(vectors, scaled)
        ]
    text = summarize(vectors).render()
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
        io.write_run_config(args.out, {
            "command": "summary",
            "features": args.features,
            "scale": args.scale,
        })
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "extract": _cmd_extract,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "hist": _cmd_hist,
    "summary": _cmd_summary,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ChaosEegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
