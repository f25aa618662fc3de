"""File formats: edge-list graphs, signal CSV, config JSON, and report
serialization with 17-significant-digit numbers for bit-stable output."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .graphs import Graph, build_graph


def read_graph_file(path) -> Graph:
    """Edge-list format: first line ``n <count>``, then one ``u v`` pair per
    line, 1-based; ``#`` starts a comment."""
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise ValueError(f"{path}: first line must be 'n <count>', got {lines[0]!r}")
    n = int(head[1])
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return build_graph(n, edges)


def write_graph_file(path, g: Graph) -> None:
    out = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(out) + "\n")


def read_signals_csv(path) -> np.ndarray:
    """One signal per row, n columns; a non-numeric first row is treated as
    a header and skipped."""
    rows = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            record = [c.strip() for c in record if c.strip() != ""]
            if not record:
                continue
            rows.append(record)
    if not rows:
        raise ValueError(f"{path}: empty signal file")
    try:
        float(rows[0][0])
    except ValueError:
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    data = []
    for r in rows:
        if len(r) != width:
            raise ValueError(f"{path}: ragged rows ({len(r)} vs {width} columns)")
        data.append([float(c) for c in r])
    return np.array(data)


def write_signals_csv(path, signals) -> None:
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in signals:
            writer.writerow([format(float(x), ".17g") for x in row])


def write_matrix_csv(path, matrix) -> None:
    """Row-major dump with 17 significant digits (basis and coefficient
    exports)."""
    write_signals_csv(path, matrix)


def _render(obj, pieces: list) -> None:
    if obj is None:
        pieces.append("null")
    elif obj is True:
        pieces.append("true")
    elif obj is False:
        pieces.append("false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite number {x!r}")
        pieces.append(format(x, ".17g"))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    elif isinstance(obj, dict):
        pieces.append("{")
        for i, key in enumerate(obj):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            if i:
                pieces.append(",")
            pieces.append(json.dumps(key))
            pieces.append(":")
            _render(obj[key], pieces)
        pieces.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        pieces.append("[")
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        for i, item in enumerate(seq):
            if i:
                pieces.append(",")
            _render(item, pieces)
        pieces.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pieces: list = []
    _render(obj, pieces)
    return "".join(pieces)


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def write_report_json(path, payload: dict) -> None:
    Path(path).write_text(to_json(payload) + "\n")


def write_series_csv(directory, stem: str, series: dict) -> list[str]:
    """Emit each series block as ``<stem>__<name>.csv``; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, block in series.items():
        path = directory / f"{stem}__{name}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(block["columns"])
            for row in block["rows"]:
                writer.writerow([
                    format(float(x), ".17g") if isinstance(x, float) else x
                    for x in row
                ])
        written.append(str(path))
    return written
