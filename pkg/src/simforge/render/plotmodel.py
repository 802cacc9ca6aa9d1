"""Resolve a display tree against run results into a drawable plot model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..document import model as m
from ..runtime.engine import RunResult

__all__ = [
    "PlotError",
    "CurveDrawable",
    "TraceDrawable",
    "PointDrawable",
    "FieldDrawable",
    "AxisModel",
    "WindowModel",
    "PlotModel",
    "build_plot_model",
]

PAD_FRACTION = 0.05  # auto bounds padded by exactly 5% of the span per side


class PlotError(ValueError):
    pass


@dataclass
class CurveDrawable:
    symbol: str
    xs: np.ndarray
    ys: np.ndarray
    legend: str
    color_index: int


@dataclass
class TraceDrawable:
    symbol: str
    segments: list  # (2, 2) arrays
    color_index: int


@dataclass
class PointDrawable:
    symbol: str
    x: float
    y: float
    color_index: int


@dataclass
class FieldDrawable:
    symbol: str
    x: np.ndarray  # 1-D for tensor grids, 2-D for parametric surfaces
    y: np.ndarray
    values: np.ndarray
    parametric: bool
    color_index: int


Drawable = Union[CurveDrawable, TraceDrawable, PointDrawable, FieldDrawable]


@dataclass
class AxisModel:
    dims: int
    drawables: list[Drawable] = field(default_factory=list)
    x_label: str = ""
    y_label: str = ""
    # (xmin, xmax, ymin, ymax), padded; always finite
    bounds: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)


@dataclass
class WindowModel:
    title: str
    axes: list[AxisModel]
    rows: int
    cols: int


@dataclass
class PlotModel:
    windows: list[WindowModel]


def build_plot_model(
    display: list[m.WindowSpec], result: RunResult
) -> PlotModel:
    """Resolve every DrawRef; curves sharing an axis superimpose in order.

    Legends come from the referenced state/output names, the ordinate label
    from the first drawable's unit, the abscissa label from the domain
    symbol.  Unresolved refs are hard errors (validation catches them for
    well-formed documents).
    """
    windows: list[WindowModel] = []
    for window in display:
        title = window.title if isinstance(window.title, str) else ""
        axes = [_build_axis(axis, result) for axis in window.axes]
        rows = window.rows or 1
        cols = window.cols or max(1, -(-len(axes) // rows))
        windows.append(WindowModel(title=title, axes=axes, rows=rows, cols=cols))
    return PlotModel(windows=windows)


def _build_axis(axis: m.AxisSpec, result: RunResult) -> AxisModel:
    model = AxisModel(dims=axis.dims)
    color = 0
    for ref in axis.items:
        meta = result.meta.get(ref.ref, {})
        if ref.kind == "curve2d":
            if ref.ref in result.series:
                xs, ys = result.series[ref.ref]
                model.drawables.append(
                    CurveDrawable(
                        symbol=ref.ref,
                        xs=xs,
                        ys=ys,
                        legend=meta.get("name", "") or ref.ref,
                        color_index=color,
                    )
                )
            elif ref.ref in result.traces:
                model.drawables.append(
                    TraceDrawable(
                        symbol=ref.ref,
                        segments=result.traces[ref.ref],
                        color_index=color,
                    )
                )
            else:
                raise PlotError(f"display ref {ref.ref!r} has no run result")
        elif ref.kind == "points":
            if ref.ref not in result.points:
                raise PlotError(f"display ref {ref.ref!r} has no run result")
            x, y = result.points[ref.ref]
            model.drawables.append(
                PointDrawable(symbol=ref.ref, x=x, y=y, color_index=color)
            )
        elif ref.kind == "surface":
            if ref.ref not in result.fields2d:
                raise PlotError(f"display ref {ref.ref!r} has no run result")
            fld = result.fields2d[ref.ref]
            model.drawables.append(
                FieldDrawable(
                    symbol=ref.ref,
                    x=np.asarray(fld["x"]),
                    y=np.asarray(fld["y"]),
                    values=np.asarray(fld["values"]),
                    parametric=bool(fld["parametric"]),
                    color_index=color,
                )
            )
        color += 1

    _set_labels(model, result)
    model.bounds = _auto_bounds(model)
    return model


def _set_labels(model: AxisModel, result: RunResult) -> None:
    for drawable in model.drawables:
        meta = result.meta.get(drawable.symbol, {})
        if isinstance(drawable, CurveDrawable):
            abscissa = meta.get("abscissa", "")
            if not model.x_label and abscissa and not abscissa.endswith(":x"):
                model.x_label = abscissa
            if not model.y_label and meta.get("unit"):
                model.y_label = meta["unit"]


def _auto_bounds(model: AxisModel) -> tuple[float, float, float, float]:
    xs: list[np.ndarray] = []
    ys: list[np.ndarray] = []
    for d in model.drawables:
        if isinstance(d, CurveDrawable):
            xs.append(d.xs)
            ys.append(d.ys)
        elif isinstance(d, PointDrawable):
            xs.append(np.array([d.x]))
            ys.append(np.array([d.y]))
        elif isinstance(d, TraceDrawable):
            for seg in d.segments:
                xs.append(np.asarray(seg)[:, 0])
                ys.append(np.asarray(seg)[:, 1])
        elif isinstance(d, FieldDrawable):
            xs.append(np.ravel(d.x))
            ys.append(np.ravel(d.y))

    def span(parts: list[np.ndarray], fallback: tuple[float, float]):
        if not parts:
            return fallback
        data = np.concatenate([np.asarray(p, dtype=float).ravel() for p in parts])
        data = data[np.isfinite(data)]
        if data.size == 0:
            return fallback
        return float(data.min()), float(data.max())

    x_lo, x_hi = span(xs, (0.0, 1.0))
    y_lo, y_hi = span(ys, (0.0, 1.0))
    return _pad(x_lo, x_hi) + _pad(y_lo, y_hi)


def _pad(lo: float, hi: float) -> tuple[float, float]:
    span = hi - lo
    if span == 0.0:
        return lo - 1.0, hi + 1.0
    margin = PAD_FRACTION * span
    return lo - margin, hi + margin
