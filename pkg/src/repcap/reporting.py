"""Canonical JSON/CSV emission and run manifests."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
import os
from pathlib import Path

import numpy as np

SIG_DIGITS = 12
OUT_DIR_ENV = "REPCAP_OUT_DIR"


def tool_version() -> str:
    from . import __version__
    return __version__


def _round(x: float) -> float:
    return float(f"{x:.{SIG_DIGITS}g}")


def to_plain(obj, warnings: list | None = None, path: str = "$"):
    """Recursively convert to JSON-ready values; non-finite floats become None.

    Each replaced value appends a note to ``warnings`` naming where it was.
    """
    if warnings is None:
        warnings = []
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = obj.to_dict() if hasattr(obj, "to_dict") else {f.name: getattr(obj, f.name)
                                                             for f in dataclasses.fields(obj)}
    elif hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): to_plain(v, warnings, f"{path}.{k}") for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v, warnings, f"{path}[{i}]") for i, v in enumerate(obj)]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist(), warnings, path)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            warnings.append(f"{path}: non-finite value {x!r} written as null")
            return None
        return _round(x)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "symbols"):
        return to_plain(list(obj.symbols), warnings, path)
    if hasattr(obj, "probs"):
        return to_plain(obj.probs, warnings, path)
    return str(obj)


def canonical_json(report) -> str:
    """Sorted keys, floats at 12 significant digits, NaN/inf as null with a warning."""
    warnings: list[str] = []
    plain = to_plain(report, warnings)
    if warnings:
        if isinstance(plain, dict):
            plain["warnings"] = list(plain.get("warnings") or []) + warnings
        else:
            plain = {"value": plain, "warnings": warnings}
    return json.dumps(plain, sort_keys=True, indent=2, allow_nan=False) + "\n"


def curve_csv(rows) -> str:
    """Plot-ready CSV with columns rate, value, ci."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rate", "value", "ci"])
    for r in rows:
        w.writerow([_fmt(r.get("rate")), _fmt(r.get("value")), _fmt(r.get("ci"))])
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return "" if not math.isfinite(x) else f"{x:.{SIG_DIGITS}g}"


def resolve_output(path) -> Path:
    """Relative output paths land under $REPCAP_OUT_DIR when it is set."""
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def write_text(path, text: str) -> Path:
    p = resolve_output(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {p}: {exc.strerror or exc}") from exc
    return p


def file_digest(path) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


@dataclasses.dataclass
class RunManifest:
    subcommand: str
    config: dict
    seed: int | None
    version: str
    inputs: dict
    outputs: list

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def manifest_path(out_path) -> Path:
    p = Path(out_path)
    return p.with_name(p.name + ".manifest.json")


def emit(subcommand: str, config: dict, seed, inputs: dict, files: dict) -> list[Path]:
    """Write ``files`` ({path: text}) plus one manifest beside the first file.

    ``inputs`` maps a label to an input path; its sha256 covers the bytes read.
    """
    written = [write_text(path, text) for path, text in files.items()]
    manifest = RunManifest(subcommand, config, seed, tool_version(),
                           {k: {"path": str(v), "sha256": file_digest(v)} for k, v in sorted(inputs.items())},
                           [str(p) for p in written])
    written.append(write_text(manifest_path(written[0]), canonical_json(manifest)))
    return written
