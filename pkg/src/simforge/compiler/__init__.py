"""Two-pass compilation: document -> (ComputeIR, UiFormIR) -> emitted forms."""

from .ir import (
    IR_VERSION,
    ComputeIR,
    Page,
    ParamDecl,
    ResultDecl,
    UiFormIR,
    Widget,
    emit_compute,
    emit_ui,
    load_compute,
    load_ui,
)
from .lower import CompileError, lower, select_widget
from .script import emit_script

__all__ = [
    "IR_VERSION",
    "CompileError",
    "ComputeIR",
    "Page",
    "ParamDecl",
    "ResultDecl",
    "UiFormIR",
    "Widget",
    "emit_compute",
    "emit_script",
    "emit_ui",
    "load_compute",
    "load_ui",
    "lower",
    "select_widget",
]
