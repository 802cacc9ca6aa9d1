"""Standalone SVG 1.1 rendering of a plot model.

Deterministic: the same model and size always produce identical bytes.
Each plot area carries data-* attributes with its pixel rectangle and data
bounds so a client can map pointer positions back to data coordinates.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .plotmodel import (
    AxisModel,
    CurveDrawable,
    FieldDrawable,
    PlotModel,
    PointDrawable,
    TraceDrawable,
)

__all__ = ["render_svg", "COLOR_CYCLE", "nice_ticks"]

COLOR_CYCLE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

MAX_TICKS = 11
_MARGIN_LEFT = 56
_MARGIN_RIGHT = 14
_MARGIN_BOTTOM = 38
_MARGIN_TOP = 12
_TITLE_SPACE = 24
_MAX_FIELD_CELLS = 128  # per axis; larger grids are strided down


def render_svg(
    model: PlotModel, size: tuple[int, int] = (640, 480), window_index: int = 0
) -> str:
    """Render one window of the model as a standalone SVG document."""
    width, height = int(size[0]), int(size[1])
    if not model.windows:
        window = None
        title = ""
    else:
        window = model.windows[min(window_index, len(model.windows) - 1)]
        title = window.title

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}" '
        f'font-family="sans-serif" font-size="11">'
    )
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')

    top = _MARGIN_TOP
    if title:
        out.append(
            f'<text x="{width / 2:.2f}" y="{top + 4}" text-anchor="middle" '
            f'font-size="14" class="window-title">{escape(title)}</text>'
        )
        top += _TITLE_SPACE

    if window is not None and window.axes:
        rows, cols = window.rows, window.cols
        cell_w = (width - 8) / cols
        cell_h = (height - top - 4) / rows
        for index, axis in enumerate(window.axes):
            r, c = divmod(index, cols)
            if r >= rows:  # more axes than layout cells: clamp to last row
                r = rows - 1
            cell_x = 4 + c * cell_w
            cell_y = top + r * cell_h
            _render_axis(out, axis, index, cell_x, cell_y, cell_w, cell_h)

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_axis(
    out: list[str],
    axis: AxisModel,
    axis_index: int,
    cell_x: float,
    cell_y: float,
    cell_w: float,
    cell_h: float,
) -> None:
    px = cell_x + _MARGIN_LEFT
    py = cell_y + 8
    pw = max(10.0, cell_w - _MARGIN_LEFT - _MARGIN_RIGHT)
    ph = max(10.0, cell_h - 8 - _MARGIN_BOTTOM)

    if axis.dims == 3:
        _render_axis3d(out, axis, axis_index, px, py, pw, ph)
        return

    x_lo, x_hi, y_lo, y_hi = axis.bounds

    def sx(x: float) -> float:
        return px + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y: float) -> float:
        return py + (y_hi - y) / (y_hi - y_lo) * ph

    out.append(
        f'<g class="plot-area" data-axis="{axis_index}" '
        f'data-x-min="{x_lo!r}" data-x-max="{x_hi!r}" '
        f'data-y-min="{y_lo!r}" data-y-max="{y_hi!r}" '
        f'data-px-left="{px:.2f}" data-px-top="{py:.2f}" '
        f'data-px-width="{pw:.2f}" data-px-height="{ph:.2f}">'
    )

    # pseudo-color fields go under everything else
    for d in axis.drawables:
        if isinstance(d, FieldDrawable):
            _render_field(out, d, sx, sy)

    out.append(
        f'<rect class="frame" x="{px:.2f}" y="{py:.2f}" width="{pw:.2f}" '
        f'height="{ph:.2f}" fill="none" stroke="#333333"/>'
    )

    for t in nice_ticks(x_lo, x_hi):
        x = sx(t)
        out.append(
            f'<line x1="{x:.2f}" y1="{py + ph:.2f}" x2="{x:.2f}" '
            f'y2="{py + ph + 4:.2f}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{py + ph + 16:.2f}" text-anchor="middle" '
            f'class="tick-label">{_tick_text(t)}</text>'
        )
    for t in nice_ticks(y_lo, y_hi):
        y = sy(t)
        out.append(
            f'<line x1="{px - 4:.2f}" y1="{y:.2f}" x2="{px:.2f}" y2="{y:.2f}" '
            f'stroke="#333333"/>'
        )
        out.append(
            f'<text x="{px - 7:.2f}" y="{y + 3.5:.2f}" text-anchor="end" '
            f'class="tick-label">{_tick_text(t)}</text>'
        )

    if axis.x_label:
        out.append(
            f'<text x="{px + pw / 2:.2f}" y="{py + ph + 32:.2f}" '
            f'text-anchor="middle" class="axis-label">{escape(axis.x_label)}</text>'
        )
    if axis.y_label:
        lx, ly = px - 42, py + ph / 2
        out.append(
            f'<text x="{lx:.2f}" y="{ly:.2f}" text-anchor="middle" '
            f'transform="rotate(-90 {lx:.2f} {ly:.2f})" class="axis-label">'
            f"{escape(axis.y_label)}</text>"
        )

    legend_entries: list[tuple[str, str]] = []
    for d in axis.drawables:
        color = COLOR_CYCLE[d.color_index % len(COLOR_CYCLE)]
        if isinstance(d, CurveDrawable):
            path = _series_path(d.xs, d.ys, sx, sy)
            if path:
                out.append(
                    f'<path class="curve" data-symbol="{escape(d.symbol)}" '
                    f'fill="none" stroke="{color}" stroke-width="1.5" d="{path}"/>'
                )
            if d.legend:
                legend_entries.append((d.legend, color))
        elif isinstance(d, TraceDrawable):
            path = _trace_path(d.segments, sx, sy)
            if path:
                out.append(
                    f'<path class="trace" data-symbol="{escape(d.symbol)}" '
                    f'fill="none" stroke="{color}" stroke-width="1.5" d="{path}"/>'
                )
        elif isinstance(d, PointDrawable):
            _render_cross(out, d, sx(d.x), sy(d.y), color)

    if legend_entries:
        _render_legend(out, legend_entries, px, py, pw)
    out.append("</g>")


def _series_path(xs: np.ndarray, ys: np.ndarray, sx, sy) -> str:
    parts: list[str] = []
    pen_down = False
    for x, y in zip(np.asarray(xs, float), np.asarray(ys, float)):
        if not (math.isfinite(x) and math.isfinite(y)):
            pen_down = False
            continue
        cmd = "L" if pen_down else "M"
        parts.append(f"{cmd}{sx(x):.2f},{sy(y):.2f}")
        pen_down = True
    return " ".join(parts)


def _trace_path(segments, sx, sy) -> str:
    parts: list[str] = []
    for seg in segments:
        seg = np.asarray(seg, float)
        parts.append(
            f"M{sx(seg[0, 0]):.2f},{sy(seg[0, 1]):.2f} "
            f"L{sx(seg[1, 0]):.2f},{sy(seg[1, 1]):.2f}"
        )
    return " ".join(parts)


def _render_cross(out: list[str], d: PointDrawable, cx: float, cy: float, color: str):
    arm = 6.0
    out.append(
        f'<path class="point-marker" data-symbol="{escape(d.symbol)}" '
        f'data-x="{d.x!r}" data-y="{d.y!r}" stroke="{color}" stroke-width="1.8" '
        f'd="M{cx - arm:.2f},{cy:.2f} L{cx + arm:.2f},{cy:.2f} '
        f'M{cx:.2f},{cy - arm:.2f} L{cx:.2f},{cy + arm:.2f}"/>'
    )


def _render_legend(out, entries: list[tuple[str, str]], px, py, pw) -> None:
    line_h = 16
    box_w = 10 + 22 + max(len(t) for t, _ in entries) * 6.3
    box_h = 6 + line_h * len(entries)
    bx = px + pw - box_w - 6
    by = py + 6
    out.append(
        f'<g class="legend"><rect x="{bx:.2f}" y="{by:.2f}" width="{box_w:.2f}" '
        f'height="{box_h:.2f}" fill="#ffffff" fill-opacity="0.85" '
        f'stroke="#999999"/>'
    )
    for i, (text, color) in enumerate(entries):
        ly = by + 12 + i * line_h
        out.append(
            f'<line x1="{bx + 5:.2f}" y1="{ly - 3.5:.2f}" x2="{bx + 23:.2f}" '
            f'y2="{ly - 3.5:.2f}" stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{bx + 27:.2f}" y="{ly:.2f}" class="legend-label">'
            f"{escape(text)}</text>"
        )
    out.append("</g>")


def _render_field(out: list[str], d: FieldDrawable, sx, sy) -> None:
    values = np.asarray(d.values, float)
    if d.parametric or d.x.ndim == 2:
        xg, yg = np.asarray(d.x, float), np.asarray(d.y, float)
    else:
        xg, yg = np.meshgrid(np.asarray(d.x, float), np.asarray(d.y, float), indexing="ij")
    finite = values[np.isfinite(values)]
    lo = float(finite.min()) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0

    nx, ny = values.shape
    step_i = max(1, -(-(nx - 1) // _MAX_FIELD_CELLS))
    step_j = max(1, -(-(ny - 1) // _MAX_FIELD_CELLS))
    out.append(f'<g class="field" data-symbol="{escape(d.symbol)}">')
    for i in range(0, nx - 1, step_i):
        i2 = min(i + step_i, nx - 1)
        for j in range(0, ny - 1, step_j):
            j2 = min(j + step_j, ny - 1)
            v = 0.25 * (
                values[i, j] + values[i2, j] + values[i, j2] + values[i2, j2]
            )
            if not math.isfinite(v):
                continue
            color = _colormap(v, lo, hi)
            corners = [
                (xg[i, j], yg[i, j]),
                (xg[i2, j], yg[i2, j]),
                (xg[i2, j2], yg[i2, j2]),
                (xg[i, j2], yg[i, j2]),
            ]
            pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in corners)
            out.append(f'<polygon points="{pts}" fill="{color}" stroke="none"/>')
    out.append("</g>")


def _colormap(v: float, lo: float, hi: float) -> str:
    """64-step linear blue-to-red map over [lo, hi]."""
    t = 0.5 if hi == lo else (v - lo) / (hi - lo)
    t = min(1.0, max(0.0, t))
    t = math.floor(t * 63) / 63  # quantize to 64 steps
    # piecewise jet-like ramp
    r = int(255 * min(1.0, max(0.0, 1.5 - abs(4 * t - 3))))
    g = int(255 * min(1.0, max(0.0, 1.5 - abs(4 * t - 2))))
    b = int(255 * min(1.0, max(0.0, 1.5 - abs(4 * t - 1))))
    return f"#{r:02x}{g:02x}{b:02x}"


def _render_axis3d(out, axis: AxisModel, axis_index: int, px, py, pw, ph) -> None:
    """Fixed parallel (isometric) projection wireframe; no interactive camera."""
    out.append(f'<g class="plot-area plot-area-3d" data-axis="{axis_index}">')
    out.append(
        f'<rect class="frame" x="{px:.2f}" y="{py:.2f}" width="{pw:.2f}" '
        f'height="{ph:.2f}" fill="none" stroke="#333333"/>'
    )
    cos30, sin30 = math.cos(math.pi / 6), math.sin(math.pi / 6)

    for d in axis.drawables:
        if not isinstance(d, FieldDrawable):
            continue
        values = np.asarray(d.values, float)
        if d.parametric or d.x.ndim == 2:
            xg, yg = np.asarray(d.x, float), np.asarray(d.y, float)
        else:
            xg, yg = np.meshgrid(
                np.asarray(d.x, float), np.asarray(d.y, float), indexing="ij"
            )

        def norm(a: np.ndarray) -> np.ndarray:
            finite = a[np.isfinite(a)]
            lo = float(finite.min()) if finite.size else 0.0
            hi = float(finite.max()) if finite.size else 1.0
            span = hi - lo or 1.0
            return (a - lo) / span

        xn, yn, zn = norm(xg), norm(yg), norm(values)
        u = (xn - yn) * cos30
        v = (xn + yn) * sin30 - zn
        u_lo, u_hi = -cos30, cos30
        v_lo, v_hi = -1.0, 2 * sin30
        margin = 12.0
        su = px + margin + (u - u_lo) / (u_hi - u_lo) * (pw - 2 * margin)
        sv = py + margin + (v - v_lo) / (v_hi - v_lo) * (ph - 2 * margin)

        color = COLOR_CYCLE[d.color_index % len(COLOR_CYCLE)]
        nx, ny = values.shape
        step_i = max(1, -(-(nx - 1) // 32))
        step_j = max(1, -(-(ny - 1) // 32))
        parts: list[str] = []
        for i in range(0, nx, step_i):
            parts.append(_poly_path(su[i, :], sv[i, :]))
        if (nx - 1) % step_i:
            parts.append(_poly_path(su[-1, :], sv[-1, :]))
        for j in range(0, ny, step_j):
            parts.append(_poly_path(su[:, j], sv[:, j]))
        if (ny - 1) % step_j:
            parts.append(_poly_path(su[:, -1], sv[:, -1]))
        out.append(
            f'<path class="mesh" data-symbol="{escape(d.symbol)}" fill="none" '
            f'stroke="{color}" stroke-width="0.8" d="{" ".join(p for p in parts if p)}"/>'
        )
    out.append("</g>")


def _poly_path(us: np.ndarray, vs: np.ndarray) -> str:
    parts = []
    pen_down = False
    for u, v in zip(us, vs):
        if not (math.isfinite(u) and math.isfinite(v)):
            pen_down = False
            continue
        parts.append(f"{'L' if pen_down else 'M'}{u:.2f},{v:.2f}")
        pen_down = True
    return " ".join(parts)


def nice_ticks(lo: float, hi: float, max_ticks: int = MAX_TICKS) -> list[float]:
    """Round-number tick positions within [lo, hi], at most max_ticks."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return []
    raw = (hi - lo) / max(1, max_ticks - 1)
    magnitude = 10 ** math.floor(math.log10(raw))
    step = 10 * magnitude
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (mult * magnitude) <= max_ticks - 1:
            step = mult * magnitude
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(0.0 if t == 0 else t)
        t += step
    return ticks[:max_ticks]


def _tick_text(t: float) -> str:
    return f"{t:.10g}"
