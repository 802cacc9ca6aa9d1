"""Plot models, SVG rendering, session persistence."""

from .plotmodel import (
    AxisModel,
    CurveDrawable,
    FieldDrawable,
    PlotError,
    PlotModel,
    PointDrawable,
    TraceDrawable,
    WindowModel,
    build_plot_model,
)
from .session import (
    SessionFormatError,
    load_session,
    parse_session_text,
    save_session,
)
from .svg import COLOR_CYCLE, nice_ticks, render_svg

__all__ = [
    "AxisModel",
    "COLOR_CYCLE",
    "CurveDrawable",
    "FieldDrawable",
    "PlotError",
    "PlotModel",
    "PointDrawable",
    "SessionFormatError",
    "TraceDrawable",
    "WindowModel",
    "build_plot_model",
    "load_session",
    "nice_ticks",
    "parse_session_text",
    "render_svg",
    "save_session",
]
