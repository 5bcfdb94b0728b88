"""Text formats: PSET v1 point sets, LAYERS v1 layerings, SWEEP v1 CSV."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .geom import GeometryError


class FormatError(GeometryError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def format_pset(X: np.ndarray) -> str:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    n, d = X.shape
    lines = [f"{d} {n}"]
    lines.extend(" ".join(f"{v:.17g}" for v in row) for row in X)
    return "\n".join(lines) + "\n"


def parse_pset(text: str) -> np.ndarray:
    rows = text.split("\n")
    if rows and rows[-1] == "":
        rows.pop()
    if not rows:
        raise FormatError("empty file", 1)
    head = rows[0].split()
    if len(head) != 2:
        raise FormatError("header must be 'd n'", 1)
    try:
        d, n = int(head[0]), int(head[1])
    except ValueError:
        raise FormatError("header must hold two integers", 1) from None
    if d < 1 or n < 0:
        raise FormatError("invalid dimension or count", 1)
    if len(rows) - 1 != n:
        raise FormatError(f"expected {n} point lines, found {len(rows) - 1}", len(rows))
    X = np.empty((n, d))
    for i, row in enumerate(rows[1:]):
        parts = row.split(" ")
        if len(parts) != d:
            raise FormatError(f"expected {d} coordinates, found {len(parts)}", i + 2)
        try:
            X[i] = [float(p) for p in parts]
        except ValueError:
            raise FormatError("malformed coordinate", i + 2) from None
        if not np.all(np.isfinite(X[i])):
            raise FormatError("non-finite coordinate", i + 2)
    return X


def write_pset(path, X) -> None:
    Path(path).write_text(format_pset(X), newline="\n")


def read_pset(path) -> np.ndarray:
    return parse_pset(Path(path).read_text())


def format_layers(layers: list[np.ndarray], n: int) -> str:
    lines = [f"{len(layers)} {n}"]
    for k, layer in enumerate(layers, start=1):
        idx = sorted(int(i) for i in layer)
        lines.append(" ".join(map(str, [k, len(idx), *idx])))
    return "\n".join(lines) + "\n"


def parse_layers(text: str) -> tuple[list[np.ndarray], int]:
    rows = [r for r in text.split("\n") if r]
    if not rows:
        raise FormatError("empty file", 1)
    try:
        L, n = map(int, rows[0].split())
    except ValueError:
        raise FormatError("header must be 'L n'", 1) from None
    if len(rows) - 1 != L:
        raise FormatError(f"expected {L} layer lines, found {len(rows) - 1}", len(rows))
    layers = []
    for k, row in enumerate(rows[1:], start=1):
        vals = list(map(int, row.split()))
        if len(vals) < 2 or vals[0] != k or vals[1] != len(vals) - 2:
            raise FormatError("malformed layer line", k + 1)
        layers.append(np.asarray(vals[2:], dtype=np.int64))
    return layers, n


def write_layers(path, layers, n: int) -> None:
    Path(path).write_text(format_layers(layers, n), newline="\n")


def read_layers(path) -> tuple[list[np.ndarray], int]:
    return parse_layers(Path(path).read_text())


SWEEP_HEADER = ["kind", "dim", "size_param", "seed", "n", "mu", "layers",
                "max_layer", "wall_seconds", "note"]


@dataclass
class SweepRow:
    kind: str
    dim: int
    size_param: int
    seed: int
    n: int
    mu: float
    layers: int
    max_layer: int
    wall_seconds: float
    note: str = ""


def format_sweep(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([r.kind, r.dim, r.size_param, r.seed, r.n, repr(float(r.mu)),
                    r.layers, r.max_layer, f"{r.wall_seconds:.6f}", r.note])
    return buf.getvalue()


def parse_sweep(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    missing = set(SWEEP_HEADER[:-1]) - set(reader.fieldnames or [])
    if missing:
        raise FormatError(f"missing columns {sorted(missing)}", 1)
    rows = []
    for r in reader:
        rows.append(SweepRow(
            kind=r["kind"], dim=int(r["dim"]), size_param=int(r["size_param"]),
            seed=int(r["seed"]), n=int(r["n"]), mu=float(r["mu"]),
            layers=int(r["layers"]), max_layer=int(r["max_layer"]),
            wall_seconds=float(r["wall_seconds"]), note=r.get("note") or "",
        ))
    return rows


def dump_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True,
                                     default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "__dataclass_fields__"):
        return asdict(o)
    if isinstance(o, float) and math.isnan(o):
        return None
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")
