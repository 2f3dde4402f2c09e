"""Serialisation helpers and hand-written SVG figures.

Everything here is formatting: numbers arrive already computed by the
numerical modules.  Output is deterministic for fixed input (sorted JSON
keys, fixed float formatting in SVG, no timestamps).
"""
from __future__ import annotations

import csv
import io
import json
import math
import platform
import sys
from importlib import metadata

import numpy as np
import scipy

__all__ = [
    "run_info",
    "to_jsonable",
    "dumps_json",
    "dumps_csv",
    "emit",
    "render_region_svg",
    "render_loglog_svg",
]


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def run_info(command: str, settings: dict) -> dict:
    """Versions and run settings embedded in every JSON report."""
    return {
        "command": command,
        "settings": to_jsonable(settings),
        "versions": {
            "besovlab": _version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, complex numbers and non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return obj


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    """Write to ``out`` or to stdout when ``out`` is ``None`` or ``"-"``."""
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

_MARGIN = (56, 20, 20, 44)  # left, right, top, bottom


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Frame:
    def __init__(self, width, height, xlim, ylim):
        self.width, self.height = width, height
        self.xlim, self.ylim = xlim, ylim
        left, right, top, bottom = _MARGIN
        self.x0, self.x1 = left, width - right
        self.y0, self.y1 = height - bottom, top

    def x(self, v):
        a, b = self.xlim
        return self.x0 + (v - a) / (b - a) * (self.x1 - self.x0)

    def y(self, v):
        a, b = self.ylim
        return self.y0 + (v - a) / (b - a) * (self.y1 - self.y0)

    def axes(self, xticks, yticks, xlabel, ylabel, xtext=_fmt, ytext=_fmt):
        out = [f'<rect x="{_fmt(self.x0)}" y="{_fmt(self.y1)}" width="{_fmt(self.x1 - self.x0)}" '
               f'height="{_fmt(self.y0 - self.y1)}" fill="none" stroke="black"/>']
        for t in xticks:
            px = _fmt(self.x(t))
            out.append(f'<line x1="{px}" y1="{_fmt(self.y0)}" x2="{px}" y2="{_fmt(self.y0 + 4)}" stroke="black"/>')
            out.append(f'<text x="{px}" y="{_fmt(self.y0 + 16)}" text-anchor="middle">{xtext(t)}</text>')
        for t in yticks:
            py = _fmt(self.y(t))
            out.append(f'<line x1="{_fmt(self.x0 - 4)}" y1="{py}" x2="{_fmt(self.x0)}" y2="{py}" stroke="black"/>')
            out.append(f'<text x="{_fmt(self.x0 - 6)}" y="{_fmt(self.y(t) + 4)}" text-anchor="end">{ytext(t)}</text>')
        cx = _fmt(0.5 * (self.x0 + self.x1))
        cy = _fmt(0.5 * (self.y0 + self.y1))
        out.append(f'<text x="{cx}" y="{_fmt(self.height - 6)}" text-anchor="middle">{xlabel}</text>')
        out.append(f'<text x="14" y="{cy}" text-anchor="middle" transform="rotate(-90 14 {cy})">{ylabel}</text>')
        return out


def _document(width, height, body, title):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">')
    return "\n".join([head, f"<title>{title}</title>", *body, "</svg>"]) + "\n"


def _ticks(lo, hi, count=5):
    return list(np.linspace(lo, hi, count))


def render_region_svg(region, width: int = 480, height: int = 360, samples: int = 400) -> str:
    """Shaded admissible ``(p, s)`` slice for a fixed ``h`` with its two boundary lines.

    The filled polygon lies between ``max(0, lower(p))`` and ``min(1, upper(p))``
    wherever that window is non-empty; an empty slice leaves only the lines.
    """
    p_lo, p_hi = float(np.min(region.p)), float(np.max(region.p))
    frame = _Frame(width, height, (p_lo, p_hi), (0.0, 1.0))
    p = np.linspace(p_lo, p_hi, samples)
    lo = np.clip(region.lower(p), 0.0, 1.0)
    hi = np.clip(region.upper(p), 0.0, 1.0)
    open_ = hi > lo
    body = []
    # one polygon per connected run where the window is non-empty
    runs, start = [], None
    for i, flag in enumerate(list(open_) + [False]):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i))
            start = None
    for a, b in runs:
        upper = [f"{_fmt(frame.x(p[i]))},{_fmt(frame.y(hi[i]))}" for i in range(a, b)]
        lower = [f"{_fmt(frame.x(p[i]))},{_fmt(frame.y(lo[i]))}" for i in reversed(range(a, b))]
        body.append(f'<polygon points="{" ".join(upper + lower)}" fill="#9ab" fill-opacity="0.7" stroke="none"/>')
    for curve_vals, colour in ((region.lower(p), "#c33"), (region.upper(p), "#33c")):
        pts = [f"{_fmt(frame.x(pv))},{_fmt(frame.y(sv))}" for pv, sv in zip(p, curve_vals) if 0 <= sv <= 1]
        if len(pts) > 1:
            body.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="{colour}"/>')
    body += frame.axes(_ticks(p_lo, p_hi), _ticks(0.0, 1.0), "p", "s")
    label = f"h = {region.h:.4g}" + ("" if runs else " (empty)")
    body.append(f'<text x="{_fmt(frame.x1 - 4)}" y="{_fmt(frame.y1 + 14)}" text-anchor="end">{label}</text>')
    return _document(width, height, body, f"admissible region, h = {region.h:.4g}")


def render_loglog_svg(x, y, xlabel: str = "t", ylabel: str = "area", title: str = "",
                      width: int = 480, height: int = 360, fit: tuple | None = None) -> str:
    """Log-log scatter of positive data with an optional ``(slope, intercept)`` line."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = (x > 0) & (y > 0)
    lx, ly = np.log10(x[keep]), np.log10(y[keep])
    if lx.size == 0:
        lx, ly = np.array([0.0]), np.array([0.0])
    pad = 0.05
    xl = (np.floor(lx.min() - pad), np.ceil(lx.max() + pad))
    yl = (np.floor(ly.min() - pad), np.ceil(ly.max() + pad))
    frame = _Frame(width, height, xl, yl)
    body = []
    for a, b in zip(lx, ly):
        body.append(f'<circle cx="{_fmt(frame.x(a))}" cy="{_fmt(frame.y(b))}" r="3" fill="#333"/>')
    if fit is not None:
        slope, icpt = fit
        ends = [(v, slope * v + icpt) for v in xl]
        pts = " ".join(f"{_fmt(frame.x(a))},{_fmt(frame.y(b))}" for a, b in ends)
        body.append(f'<polyline points="{pts}" fill="none" stroke="#c33" stroke-dasharray="4 3"/>')
    body.insert(0, f'<clipPath id="plot"><rect x="{_fmt(frame.x0)}" y="{_fmt(frame.y1)}" '
                   f'width="{_fmt(frame.x1 - frame.x0)}" height="{_fmt(frame.y0 - frame.y1)}"/></clipPath>')
    body = [body[0], '<g clip-path="url(#plot)">', *body[1:], "</g>"]
    xt = list(np.arange(xl[0], xl[1] + 0.5))
    yt = list(np.arange(yl[0], yl[1] + 0.5))
    dec = lambda v: f"1e{int(v)}"  # noqa: E731
    body += frame.axes(xt, yt, xlabel, ylabel, dec, dec)
    return _document(width, height, body, title or f"{ylabel} against {xlabel}")
