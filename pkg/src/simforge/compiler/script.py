"""Emit a Scilab-syntax script from a ComputeIR.

The script is a deterministic compatibility artifact for desk verification;
this system never executes it.  Expressions are printed with plain operators
(no elementwise dots), matching the convention of the compute dialect.
"""

from __future__ import annotations

from ..document import model as m
from ..expr import fmt_real
from .ir import (
    ComputeIR,
    Discretize2DTask,
    DiscretizeTask,
    ImplicitTraceTask,
    NewtonTask,
    OdeSolveTask,
    OutputEvalTask,
    PdeTask,
    SampleCurveTask,
    SampleSurfaceTask,
)

__all__ = ["emit_script"]


def emit_script(ir: ComputeIR, display: list[m.WindowSpec] | None = None) -> str:
    lines: list[str] = [
        "// simforge generated script",
        f"// document: {ir.doc_id}",
    ]

    for fn in ir.function_defs:
        lines.append("")
        lines.append(f"function [{','.join(fn.outputs)}]={fn.name}({','.join(fn.inputs)})")
        for stmt in fn.body:
            rhs = stmt.rhs
            if rhs["kind"] == "expr":
                lines.append(f"{stmt.lhs}={rhs['text']};")
            elif rhs["kind"] == "select":
                lines.append(f"{stmt.lhs}={rhs['matrix']}({rhs['row']},{rhs['col']});")
            else:  # pack
                packed = ";".join(f"({item})" for item in rhs["items"])
                lines.append(f"{stmt.lhs}=[{packed}];")
        lines.append("endfunction")

    if ir.param_decls:
        lines.append("")
        lines.append("// Parameters")
        for decl in ir.param_decls:
            if decl.kind == "matrix":
                rows = ";".join(
                    " ".join(fmt_real(v) for v in row) for row in decl.default
                )
                lines.append(f"{decl.symbol}=[{rows}];")
            else:
                lines.append(f"{decl.symbol}={fmt_real(decl.default)};")

    grids = {t.target: t for t in ir.tasks if isinstance(t, DiscretizeTask)}

    for task in ir.tasks:
        if isinstance(task, DiscretizeTask):
            lines.append(f"// {task.name or task.target}")
            lines.append(_grid_line(task.target, task.lower, task.upper, task.n, task.spacing))
        elif isinstance(task, Discretize2DTask):
            lines.append(f"// Domain {task.label}")
            for axis in (task.x, task.y):
                lines.append(
                    _grid_line(axis.symbol, axis.lower, axis.upper, axis.n, axis.spacing)
                )
        elif isinstance(task, OdeSolveTask):
            lines.append(f"// Script code for the {task.label} ode")
            for k, st in enumerate(task.states, start=1):
                lines.append(f"_X0({k}:{k},1)={st.initial};")
            t0 = grids[task.grid].lower if task.grid in grids else "0"
            lines.append(f"_X=ode(_X0,{t0},{task.grid},{task.function});")
            for k, st in enumerate(task.states, start=1):
                lines.append(f"{st.symbol}=_X({k}:{k},:)';")
        elif isinstance(task, OutputEvalTask):
            lines.append(f"{task.symbol}={task.expr};")
        elif isinstance(task, NewtonTask):
            lines.append(f"// Newton solve for {task.label}")
            for k, (_sym, guess) in enumerate(task.unknowns, start=1):
                lines.append(f"_x0({k}:{k},1)={guess};")
            lines.append(f"_r=fsolve(_x0,g_{task.label});")
            for k, (sym, _guess) in enumerate(task.unknowns, start=1):
                lines.append(f"{sym}=_r({k}:{k},1);")
        elif isinstance(task, ImplicitTraceTask):
            lines.append(f"// Implicit curve {task.label}")
            lines.append(
                f"deff('[z]=f_{task.label}({task.x},{task.y})','z={task.f}');"
            )
        elif isinstance(task, SampleCurveTask):
            lines.append(f"// Curve {task.label}")
            if task.curve_kind == "nonparametric":
                lines.append(f"{task.label}={task.exprs[0]};")
            else:
                lines.append(f"{task.label}_x={task.exprs[0]};")
                lines.append(f"{task.label}_y={task.exprs[1]};")
        elif isinstance(task, SampleSurfaceTask):
            lines.append(f"// Surface {task.label}")
            if task.surface_kind == "nonparametric":
                lines.append(
                    f"deff('[z]=f_{task.label}({task.x},{task.y})','z={task.exprs[0]}');"
                )
                lines.append(f"{task.label}=feval({task.x},{task.y},f_{task.label});")
            else:
                for suffix, expr in zip(("x", "y", "z"), task.exprs):
                    lines.append(
                        f"deff('[w]=f_{task.label}_{suffix}({task.x},{task.y})','w={expr}');"
                    )
                    lines.append(
                        f"{task.label}_{suffix}=feval({task.x},{task.y},f_{task.label}_{suffix});"
                    )
        elif isinstance(task, PdeTask):
            lines.append(
                f"// PDE {task.label}: solved by the simforge runtime, no script form"
            )

    if display:
        lines.append("")
        lines.append("// Display")
        _emit_display(lines, ir, display)

    return "\n".join(lines) + "\n"


def _grid_line(symbol: str, lower: str, upper: str, n: int, spacing: str) -> str:
    if spacing == "log":
        return f"{symbol}=logspace(log10({lower}),log10({upper}),{n})';"
    return f"{symbol}=linspace({lower},{upper},{n})';"


def _emit_display(lines: list[str], ir: ComputeIR, display: list[m.WindowSpec]) -> None:
    decls = {d.symbol: d for d in ir.result_decls}
    points = {p.label: p for p in ir.point_decls}
    surface_axes = {
        t.label: (t.x, t.y)
        for t in ir.tasks
        if isinstance(t, (SampleSurfaceTask, PdeTask))
    }
    implicit_axes = {
        t.label: (t.x, t.y) for t in ir.tasks if isinstance(t, ImplicitTraceTask)
    }

    for w_index, window in enumerate(display):
        title = window.title if isinstance(window.title, str) else ""
        lines.append(f"// Window: {title}" if title else f"// Window {w_index + 1}")
        if len(display) > 1:
            lines.append(f"scf({w_index});")
        rows = window.rows or 1
        cols = window.cols or max(1, (len(window.axes) + rows - 1) // rows)
        for a_index, axis in enumerate(window.axes, start=1):
            if len(window.axes) > 1:
                lines.append(f"subplot({rows},{cols},{a_index});")
            _emit_axis(lines, axis, decls, points, surface_axes, implicit_axes)


def _emit_axis(lines, axis, decls, points, surface_axes, implicit_axes) -> None:
    plot_lines: list[str] = []
    legend_names: list[str] = []
    for ref in axis.items:
        decl = decls.get(ref.ref)
        if ref.kind == "points" and ref.ref in points:
            p = points[ref.ref]
            plot_lines.append(f"plot({p.x1_symbol},{p.x2_symbol},\"x\");")
        elif decl is None:
            continue
        elif decl.role == "series":
            if decl.abscissa.endswith(":x"):  # parametric curve
                plot_lines.append(f"plot({ref.ref}_x,{ref.ref}_y);")
            else:
                plot_lines.append(f"plot({decl.abscissa},{ref.ref});")
            if decl.name:
                legend_names.append(decl.name)
        elif decl.role == "trace":
            x, y = implicit_axes.get(ref.ref, ("x", "y"))
            plot_lines.append(
                f"contour2d({x},{y},feval({x},{y},f_{ref.ref}),[0 0]);"
            )
        elif decl.role == "field2d":
            x, y = surface_axes.get(ref.ref, ("x", "y"))
            if axis.dims == 3:
                plot_lines.append(f"plot3d({x},{y},{ref.ref});")
            else:
                plot_lines.append(f"Sgrayplot({x},{y},{ref.ref});")
    for i, pl in enumerate(plot_lines):
        lines.append(pl)
        if i == 0 and len(plot_lines) > 1:
            lines.append('hold("on");')
    if len(plot_lines) > 1:
        lines.append('hold("off");')
    if legend_names:
        quoted = ",".join(f'"{name}"' for name in legend_names)
        lines.append(f"legend({quoted});")
