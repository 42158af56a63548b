"""Price-series ingestion, fixtures, and CSV / SVG / JSON emission."""
from __future__ import annotations

import contextlib
import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .core import InterpolationData
from .errors import BadHeader, BadRow, OrderViolation, SinkWriteFailure, TooFewKnots

HEADER = ["label", "min", "max", "avg"]


@dataclass(frozen=True)
class PriceRow:
    label: str
    min_price: float
    max_price: float
    avg_price: float


@dataclass(frozen=True)
class PriceSeries:
    rows: tuple[PriceRow, ...]
    unit: str = "INR/kg"

    def __post_init__(self):
        if len(self.rows) < 3:
            raise TooFewKnots(f"price series needs at least 3 rows, got {len(self.rows)}")
        for r in self.rows:
            if not r.min_price <= r.avg_price <= r.max_price:
                raise OrderViolation(f"{r.label}: need min <= avg <= max")

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> PriceRow:
        return self.rows[i]


_SPINACH = (
    ("September 2023", 5, 11, 8.0),
    ("October 2023", 5, 10, 7.5),
    ("November 2023", 3, 9, 6.0),
    ("December 2023", 4, 10, 7.0),
    ("January 2024", 5, 15, 10.0),
    ("February 2024", 2, 8, 5.0),
    ("March 2024", 4, 10, 7.0),
    ("April 2024", 3, 8, 5.5),
    ("May 2024", 5, 10, 7.5),
    ("June 2024", 7, 10, 8.5),
    ("July 2024", 5, 15, 10.0),
)

_FIGURE1 = ((4, 0), (5, 2), (7, 1), (7.5, 0.5), (8, 0), (9, 0), (10, 0))


def spinach_fixture() -> PriceSeries:
    """Monthly spinach prices (INR/kg), Azadpur market, Sep 2023 - Jul 2024."""
    return PriceSeries(tuple(PriceRow(l, float(a), float(b), float(c)) for l, a, b, c in _SPINACH))


def figure1_fixture() -> InterpolationData:
    return InterpolationData.from_points(_FIGURE1)


def _text_stream(source):
    if isinstance(source, (str, Path)):
        return open(source, encoding="utf-8", newline="")
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, (io.RawIOBase, io.BufferedIOBase)):
        return io.StringIO(source.read().decode("utf-8"))
    return contextlib.nullcontext(source)


def load_price_csv(source) -> PriceSeries:
    """Parse a "label,min,max,avg" CSV (path, bytes, or stream)."""
    with _text_stream(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != HEADER:
            raise BadHeader(f"expected header {','.join(HEADER)!r}, got {header!r}")
        rows = []
        for line, rec in enumerate(reader, start=2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) != 4:
                raise BadRow(line, "row", f"expected 4 fields, got {len(rec)}")
            nums = []
            for name, cell in zip(HEADER[1:], rec[1:]):
                try:
                    v = float(cell)
                except ValueError:
                    raise BadRow(line, name, f"not a number: {cell!r}") from None
                if not math.isfinite(v):
                    raise BadRow(line, name, "not finite")
                nums.append(v)
            lo, hi, avg = nums
            if lo > hi:
                raise OrderViolation(f"line {line}: min {lo} > max {hi}")
            if not lo <= avg <= hi:
                raise OrderViolation(f"line {line}: avg {avg} outside [{lo}, {hi}]")
            rows.append(PriceRow(rec[0], lo, hi, avg))
    return PriceSeries(tuple(rows))


def normalize_series(series: PriceSeries) -> InterpolationData:
    """Equally spaced abscissae i/(n-1) on [0, 1]; ordinates are the averages."""
    n = len(series)
    return InterpolationData(tuple(i / (n - 1) for i in range(n)), tuple(r.avg_price for r in series.rows))


# ---------------------------------------------------------------- writers


@contextlib.contextmanager
def _sink(sink):
    if isinstance(sink, (str, Path)):
        try:
            fh = open(sink, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise SinkWriteFailure(str(exc)) from exc
        with fh:
            try:
                yield fh
            except OSError as exc:
                raise SinkWriteFailure(str(exc)) from exc
    else:
        try:
            yield sink
        except OSError as exc:
            raise SinkWriteFailure(str(exc)) from exc


def _num(v: float) -> str:
    # repr is the shortest string that round-trips the double exactly
    return repr(float(v))


def export_xy_csv(ys: Sequence[float], zs: Sequence[float], sink) -> None:
    if len(ys) == 0:
        raise SinkWriteFailure("refusing to write an empty series")
    with _sink(sink) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["y", "z"])
        w.writerows((_num(y), _num(z)) for y, z in zip(ys, zs))


def export_samples_csv(ff, sink) -> None:
    export_xy_csv(ff.grid, ff.values, sink)


def export_cloud_csv(cloud, sink) -> None:
    export_xy_csv(cloud.points[:, 0], cloud.points[:, 1], sink)


def load_xy_csv(source) -> tuple[np.ndarray, np.ndarray]:
    with _text_stream(source) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["y", "z"]:
            raise BadHeader(f"expected header 'y,z', got {header!r}")
        ys, zs = [], []
        for line, rec in enumerate(reader, start=2):
            if not rec:
                continue
            try:
                ys.append(float(rec[0]))
                zs.append(float(rec[1]))
            except (ValueError, IndexError):
                raise BadRow(line, "y,z") from None
    return np.asarray(ys), np.asarray(zs)


@dataclass(frozen=True)
class SvgStyle:
    width: float = 640.0
    height: float = 400.0
    margin: float = 40.0
    stroke: str = "#1f4e9c"
    stroke_width: float = 1.0
    marker_radius: float = 0.6
    max_markers: int = 20_000
    ticks: int = 11
    title: str = ""


def _fmt(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def _mapper(ys, zs, style: SvgStyle):
    ylo, yhi = float(np.min(ys)), float(np.max(ys))
    zlo, zhi = float(np.min(zs)), float(np.max(zs))
    yspan = (yhi - ylo) or 1.0
    zspan = (zhi - zlo) or 1.0
    w = style.width - 2 * style.margin
    h = style.height - 2 * style.margin

    def to_px(y, z):
        return (style.margin + (np.asarray(y) - ylo) / yspan * w,
                style.height - style.margin - (np.asarray(z) - zlo) / zspan * h)

    return to_px, (ylo, yhi, zlo, zhi)


def export_svg(series: Iterable[tuple[float, float]] | np.ndarray, sink, style: SvgStyle | None = None,
               points: bool = False) -> None:
    """Static SVG: one polyline (or point markers when ``points``), axes, tick labels."""
    style = style or SvgStyle()
    arr = np.asarray(list(series) if not isinstance(series, np.ndarray) else series, dtype=float).reshape(-1, 2)
    if not len(arr):
        raise SinkWriteFailure("refusing to plot an empty series")
    ys, zs = arr[:, 0], arr[:, 1]
    to_px, (ylo, yhi, zlo, zhi) = _mapper(ys, zs, style)
    px, pz = to_px(ys, zs)
    x0, x1 = style.margin, style.width - style.margin
    base = style.height - style.margin
    top = style.margin
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(style.width)}" '
        f'height="{_fmt(style.height)}" viewBox="0 0 {_fmt(style.width)} {_fmt(style.height)}">',
    ]
    if style.title:
        out.append(f'<title>{escape(style.title)}</title>')
    out.append(f'<g class="axes" stroke="#000" stroke-width="0.5">'
               f'<line x1="{_fmt(x0)}" y1="{_fmt(base)}" x2="{_fmt(x1)}" y2="{_fmt(base)}"/>'
               f'<line x1="{_fmt(x0)}" y1="{_fmt(base)}" x2="{_fmt(x0)}" y2="{_fmt(top)}"/></g>')
    out.append('<g class="ticks" font-size="9" font-family="sans-serif" text-anchor="middle">')
    for i in range(style.ticks):
        t = ylo + (yhi - ylo) * i / (style.ticks - 1)
        tx = x0 + (x1 - x0) * i / (style.ticks - 1)
        out.append(f'<text x="{_fmt(tx)}" y="{_fmt(base + 12)}">{_fmt(t)}</text>')
    out.append("</g>")
    if points:
        stride = max(1, math.ceil(len(px) / style.max_markers))
        out.append(f'<g class="points" fill="{style.stroke}">')
        out.extend(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="{_fmt(style.marker_radius)}"/>'
                   for a, b in zip(px[::stride], pz[::stride]))
        out.append("</g>")
    else:
        coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, pz))
        out.append(f'<polyline fill="none" stroke="{style.stroke}" '
                   f'stroke-width="{_fmt(style.stroke_width)}" points="{coords}"/>')
    out.append("</svg>")
    with _sink(sink) as fh:
        fh.write("\n".join(out) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    return obj


def dumps_json(report) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def export_report_json(report, sink) -> None:
    if not report:
        raise SinkWriteFailure("refusing to write an empty report")
    text = dumps_json(report)
    with _sink(sink) as fh:
        fh.write(text)
