"""File formats: recordings, trial annotations, features, histograms,
model documents, and evaluation reports.

All writers are deterministic (stable key order, full-precision float
rendering via repr, no timestamps), so identical inputs give byte-
identical files. Parsers report the offending line number on malformed
input.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .classifiers.hybrid import KMeansSvmClassifier
from .classifiers.metrics import EvalReport
from .classifiers.mlp import MlpClassifier
from .errors import FileFormatError
from .features import FEATURE_NAMES, FeatureVector, HistogramResult
from .preprocessing import FeatureScaler
from .timeseries import WindowSpec

FEATURES_HEADER = "trial_id,label," + ",".join(FEATURE_NAMES)
TRIALS_HEADER = "trial_id,channel,onset_sample,offset_sample,label"
HISTOGRAM_HEADER = "bin_center,freq_pos,freq_neg"


def _fmt(x: float) -> str:
    """Full-precision decimal: repr of a float round-trips exactly."""
    return repr(float(x))


# ---------------------------------------------------------------- recordings


def write_recording(path, data, channel_names=None) -> None:
    """Write samples as CSV: one column per channel, no time column.

    1-D data gets the single column name "value".
    """
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
        names = ["value"] if channel_names is None else list(channel_names)
    else:
        names = (
            [f"ch{i + 1}" for i in range(arr.shape[1])]
            if channel_names is None
            else list(channel_names)
        )
    if len(names) != arr.shape[1]:
        raise ValueError(f"{len(names)} names for {arr.shape[1]} channels")
    lines = [",".join(names)]
    for row in arr:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_recording(path) -> tuple[np.ndarray, list[str]]:
    """Read a recording CSV; returns (samples as n x channels, names)."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise FileFormatError("empty recording file", line=1)
    names = [c.strip() for c in lines[0].split(",")]
    if any(not n for n in names):
        raise FileFormatError("empty channel name in header", line=1)
    n_ch = len(names)
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != n_ch:
            raise FileFormatError(
                f"expected {n_ch} values, got {len(parts)}", line=i
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise FileFormatError(f"non-numeric value in {line!r}", line=i) from None
    if not rows:
        raise FileFormatError("recording has no data rows", line=1)
    return np.array(rows, dtype=np.float64), names


# -------------------------------------------------------------------- trials


def write_trials(path, trials) -> None:
    """Write (trial_id, channel, WindowSpec) rows."""
    lines = [TRIALS_HEADER]
    for channel, w in trials:
        lines.append(f"{w.trial_id},{channel},{w.onset},{w.offset},{w.label}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_trials(path) -> list[tuple[str, WindowSpec]]:
    """Read trial annotations; returns (channel, WindowSpec) per row."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != TRIALS_HEADER:
        raise FileFormatError(
            f"expected header {TRIALS_HEADER!r}", line=1
        )
    out = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise FileFormatError(f"expected 5 fields, got {len(parts)}", line=i)
        tid, channel, onset_s, offset_s, label_s = (p.strip() for p in parts)
        if not tid:
            raise FileFormatError("empty trial_id", line=i)
        try:
            onset, offset = int(onset_s), int(offset_s)
        except ValueError:
            raise FileFormatError(
                f"non-integer window bounds {onset_s!r}, {offset_s!r}", line=i
            ) from None
        if label_s not in ("1", "-1"):
            raise FileFormatError(f"label must be 1 or -1, got {label_s!r}", line=i)
        try:
            w = WindowSpec(
                onset=onset, offset=offset, label=int(label_s), trial_id=tid
            )
        except ValueError as exc:
            raise FileFormatError(str(exc), line=i) from None
        out.append((channel, w))
    return out


# ------------------------------------------------------------------ features


def write_features(path, vectors) -> None:
    lines = [FEATURES_HEADER]
    for v in vectors:
        lines.append(
            f"{v.trial_id},{v.label},{_fmt(v.lle)},{_fmt(v.mi)},"
            f"{_fmt(v.med)},{_fmt(v.d2)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_features(path) -> list[FeatureVector]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != FEATURES_HEADER:
        raise FileFormatError(f"expected header {FEATURES_HEADER!r}", line=1)
    out = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise FileFormatError(f"expected 6 fields, got {len(parts)}", line=i)
        tid, label_s = parts[0].strip(), parts[1].strip()
        if label_s not in ("1", "-1"):
            raise FileFormatError(f"label must be 1 or -1, got {label_s!r}", line=i)
        try:
            lle, mi, med, d2 = (float(p) for p in parts[2:])
        except ValueError:
            raise FileFormatError(f"non-numeric feature in {line!r}", line=i) from None
        try:
            out.append(
                FeatureVector(
                    trial_id=tid, label=int(label_s), lle=lle, mi=mi, med=med, d2=d2
                )
            )
        except ValueError as exc:
            raise FileFormatError(str(exc), line=i) from None
    return out


# ----------------------------------------------------------------- histogram


def write_histogram(path, hist: HistogramResult) -> None:
    lines = [HISTOGRAM_HEADER]
    for c, fp, fn in zip(hist.bin_centers, hist.freq_pos, hist.freq_neg):
        lines.append(f"{_fmt(c)},{_fmt(fp)},{_fmt(fn)}")
    Path(path).write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------- reports, models


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report(path, report: EvalReport, config: dict) -> None:
    """Evaluation report with rendered and machine-precision fields."""
    doc = {
        "accuracy": report.accuracy,
        "accuracy_percent": report.accuracy_percent(),
        "mse": report.mse,
        "mse_rendered": report.mse_rendered(),
        "confusion": [[int(v) for v in row] for row in report.confusion],
        "confusion_layout": "rows decided class (+1, -1); columns real class (+1, -1)",
        "n_test": report.n_test,
        "config": config,
    }
    Path(path).write_text(_dump_json(doc))


def read_report(path) -> dict:
    return json.loads(Path(path).read_text())


MODEL_KINDS = ("mlp", "km-svm")


def write_model(path, kind: str, model, scaler: FeatureScaler | None, config: dict) -> None:
    """Self-describing model document: kind, scaler, parameters, config."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"kind must be one of {MODEL_KINDS}, got {kind!r}")
    doc = {
        "kind": kind,
        "scaler": None if scaler is None else scaler.to_doc(),
        "model": model.to_doc(),
        "config": config,
    }
    Path(path).write_text(_dump_json(doc))


def read_model(path):
    """Load a model document; returns (kind, classifier, scaler, config)."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"not a valid model document: {exc}", line=exc.lineno)
    kind = doc.get("kind")
    if kind not in MODEL_KINDS:
        raise FileFormatError(f"unknown model kind {kind!r}", line=1)
    scaler = None if doc["scaler"] is None else FeatureScaler.from_doc(doc["scaler"])
    if kind == "mlp":
        model = MlpClassifier.from_doc(doc["model"])
    else:
        model = KMeansSvmClassifier.from_doc(doc["model"])
    return kind, model, scaler, doc.get("config", {})


def write_run_config(out_path, config: dict) -> None:
    """Sidecar provenance for CSV outputs: <out>.run.json."""
    Path(str(out_path) + ".run.json").write_text(_dump_json(config))
