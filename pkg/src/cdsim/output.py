"""CSV and SVG writers for sweep results."""

from __future__ import annotations

import csv
import io
import itertools
import json
from pathlib import Path

import numpy as np

from .experiments import SweepResult

__all__ = ["format_number", "write_csv", "read_csv", "write_meta", "write_svg", "write_table"]


def format_number(x, precision: int = 12) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x) + 0.0  # no "-0"
    return format(x, f".{precision}g")


def write_table(path, header, rows, precision: int = 12) -> Path:
    """Write rows of numbers (or strings) as UTF-8, LF-terminated CSV."""
    path = Path(path)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_number(v, precision) for v in row])
    path.write_bytes(buf.getvalue().encode("utf-8"))
    return path


def write_csv(result: SweepResult, path, precision: int = 12) -> Path:
    """One row per grid point, axes in declaration order, last axis fastest."""
    names = result.axis_names
    coords = [np.asarray(a).tolist() for a in result.axes.values()]
    flat = result.values.ravel()
    rows = ((*point, value) for point, value in zip(itertools.product(*coords), flat))
    return write_table(path, names + ["concurrence"], rows, precision)


def read_csv(path) -> SweepResult:
    """Rebuild a :class:`SweepResult` from :func:`write_csv` output (metadata is not stored)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader]
    if not header or header[-1] != "concurrence":
        raise ValueError(f"{path}: last column must be 'concurrence'")
    names = header[:-1]
    columns = list(zip(*rows)) if rows else [() for _ in header]
    axes = {}
    for name, col in zip(names, columns):
        seen = list(dict.fromkeys(col))
        parsed = [int(v) if v.lstrip("-").isdigit() else float(v) for v in seen]
        axes[name] = np.asarray(parsed)
    values = np.asarray([float(v) for v in columns[-1]]).reshape([len(a) for a in axes.values()])
    return SweepResult(axes, values)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_meta(result: SweepResult, path) -> Path:
    """Provenance sidecar (parameters, version, axis lengths) as sorted JSON."""
    path = Path(path)
    payload = {"axes": {k: len(v) for k, v in result.axes.items()}, "meta": _jsonable(result.meta)}
    path.write_bytes((json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8"))
    return path


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def write_svg(result: SweepResult, path, x_axis: str | None = None, max_series: int = 8, title: str = "") -> Path:
    """Static line chart: concurrence against ``x_axis``, one line per value of the other axis."""
    names = result.axis_names
    if len(names) not in (1, 2):
        raise ValueError("write_svg handles one- or two-axis results")
    x_axis = x_axis or names[-1]
    if x_axis not in names:
        raise ValueError(f"unknown axis {x_axis!r}")
    x = np.asarray(result.axes[x_axis], dtype=float)
    values = result.values
    if len(names) == 1:
        series = [("", values)]
    else:
        other = names[0] if names[1] == x_axis else names[1]
        if names.index(x_axis) == 0:
            values = values.T
        coords = np.asarray(result.axes[other])
        pick = np.unique(np.linspace(0, len(coords) - 1, min(max_series, len(coords))).round().astype(int))
        series = [(f"{other}={coords[i]:g}", values[i]) for i in pick]

    width, height = 640, 400
    left, right, top, bottom = 60, 150, 30, 50
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = float(x.min()), float(x.max())
    span = (x1 - x0) or 1.0

    def px(v):
        return left + (v - x0) / span * pw

    def py(c):
        return top + (1.0 - c) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for c in (0.0, 0.5, 1.0):
        out.append(f'<text x="{left - 8}" y="{py(c) + 4:.1f}" font-size="11" text-anchor="end">{c:g}</text>')
    for v in (x0, (x0 + x1) / 2, x1):
        out.append(f'<text x="{px(v):.1f}" y="{top + ph + 16}" font-size="11" text-anchor="middle">{v:g}</text>')
    out.append(
        f'<text x="{left + pw / 2}" y="{height - 10}" font-size="12" text-anchor="middle">'
        f"{x_axis} (dimensionless, hbar = 1)</text>"
    )
    out.append(
        f'<text x="15" y="{top + ph / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 15 {top + ph / 2})">concurrence</text>'
    )
    if title:
        out.append(f'<text x="{left + pw / 2}" y="18" font-size="13" text-anchor="middle">{title}</text>')
    for k, (label, ys) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        if label:
            ly = top + 14 + 16 * k
            out.append(f'<line x1="{left + pw + 10}" y1="{ly - 4}" x2="{left + pw + 30}" y2="{ly - 4}" stroke="{color}"/>')
            out.append(f'<text x="{left + pw + 35}" y="{ly}" font-size="11">{label}</text>')
    out.append("</svg>")
    path = Path(path)
    path.write_bytes(("\n".join(out) + "\n").encode("utf-8"))
    return path
