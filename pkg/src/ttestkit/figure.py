"""Static SVG scatter of log BF10 against log(1/p) with the fitted line.

The SVG is written by hand so the bytes depend only on the inputs.
"""

import math
from pathlib import Path

from .errors import FitError

WIDTH = 720
HEIGHT = 400
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 55


def _nice_ticks(lo, hi, target=6):
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1.0, 2.0, 5.0, 10.0) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    ticks = []
    k = first
    while k * step <= hi + 1e-9 * step:
        ticks.append(k * step)
        k += 1
    return ticks


def _padded_range(values):
    lo, hi = min(values), max(values)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


class _Frame:
    """Affine map from data coordinates to SVG pixels."""

    def __init__(self, x_range, y_range):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.left = MARGIN_LEFT
        self.top = MARGIN_TOP
        self.width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        self.height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(self, x):
        return self.left + (x - self.x0) / (self.x1 - self.x0) * self.width

    def py(self, y):
        return self.top + (self.y1 - y) / (self.y1 - self.y0) * self.height


def _fmt(v):
    return f"{v:.3f}"


def _tick_label(v):
    return f"{v:g}" if abs(v) > 1e-12 else "0"


def render_svg(points, fit):
    if not points:
        raise FitError("cannot draw a figure without points")
    if fit is None:
        raise FitError("cannot draw a figure without a successful fit")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    frame = _Frame(_padded_range(xs), _padded_range(ys))
    bottom = frame.top + frame.height

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        '<defs><clipPath id="plot-area">'
        f'<rect x="{frame.left}" y="{frame.top}" width="{frame.width}" height="{frame.height}"/>'
        '</clipPath></defs>',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<rect x="{frame.left}" y="{frame.top}" width="{frame.width}" height="{frame.height}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    for tx in _nice_ticks(frame.x0, frame.x1):
        x = _fmt(frame.px(tx))
        out.append(f'<line x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{bottom + 18}" text-anchor="middle">{_tick_label(tx)}</text>')
    for ty in _nice_ticks(frame.y0, frame.y1):
        y = _fmt(frame.py(ty))
        out.append(f'<line x1="{frame.left - 5}" y1="{y}" x2="{frame.left}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{frame.left - 8}" y="{y}" text-anchor="end" dominant-baseline="middle">'
                   f'{_tick_label(ty)}</text>')
    out.append(f'<text x="{_fmt(frame.left + frame.width / 2)}" y="{HEIGHT - 12}" text-anchor="middle">'
               'log(1/p)</text>')
    out.append(f'<text x="18" y="{_fmt(frame.top + frame.height / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_fmt(frame.top + frame.height / 2)})">log BF10</text>')

    out.append('<g clip-path="url(#plot-area)">')
    out.append('<g class="points" fill="steelblue" fill-opacity="0.7">')
    for x, y in points:
        out.append(f'<circle cx="{_fmt(frame.px(x))}" cy="{_fmt(frame.py(y))}" r="2.5"/>')
    out.append("</g>")
    lx0, lx1 = frame.x0, frame.x1
    out.append(
        f'<line class="fit" x1="{_fmt(frame.px(lx0))}" y1="{_fmt(frame.py(fit.intercept + fit.slope * lx0))}" '
        f'x2="{_fmt(frame.px(lx1))}" y2="{_fmt(frame.py(fit.intercept + fit.slope * lx1))}" '
        'stroke="firebrick" stroke-width="1.5"/>'
    )
    out.append("</g>")

    note = (f"slope = {fit.slope:.4g}   intercept = {fit.intercept:.4g} ± {fit.intercept_stderr:.2g}"
            f"   R² = {fit.r_squared:.4f}   n = {fit.n_points}")
    if fit.c_predicted is not None:
        note += f"   predicted C = {fit.c_predicted:.4g}"
    out.append(f'<text class="annotation" x="{frame.left}" y="{frame.top - 14}">{note}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def points_csv(points):
    lines = ["log_inv_p,log_bf10"]
    lines.extend(f"{x!r},{y!r}" for x, y in points)
    return "\n".join(lines) + "\n"


def emit_figure(points, fit, path, points_path=None):
    """Write the SVG to ``path`` and the points to ``points_path``.

    ``points_path`` defaults to ``path`` with the suffix ``.points.csv``.
    Returns both paths.
    """
    points = [(float(x), float(y)) for x, y in points]
    svg = render_svg(points, fit)
    path = Path(path)
    points_path = Path(points_path) if points_path is not None else path.with_suffix(".points.csv")
    path.write_text(svg, encoding="utf-8", newline="\n")
    points_path.write_text(points_csv(points), encoding="utf-8", newline="\n")
    return path, points_path
