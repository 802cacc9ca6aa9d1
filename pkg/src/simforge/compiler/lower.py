"""Lower a validated, language-resolved document into the two IRs.

Pure and deterministic: the same view always produces identical IRs.  Tasks
are ordered so every task's inputs are produced by an earlier task
(stable topological sort, document order breaking ties); a dependency cycle
among compute items is reported with the cycle.
"""

from __future__ import annotations

from ..document import model as m
from ..document.localize import LocalizedView
from ..expr import CONSTANTS, free_symbols, to_text
from .ir import (
    Assign,
    AxisGrid,
    ComputeIR,
    Discretize2DTask,
    DiscretizeTask,
    FunctionDef,
    ImplicitTraceTask,
    NewtonTask,
    OdeSolveTask,
    OdeStateIR,
    OutputEvalTask,
    ParamDecl,
    PdeTask,
    Page,
    PointDecl,
    PolylineIR,
    ResultDecl,
    SampleCurveTask,
    SampleSurfaceTask,
    Task,
    UiFormIR,
    Widget,
)

__all__ = ["CompileError", "lower", "select_widget"]


class CompileError(ValueError):
    pass


def select_widget(item: m.ParameterItem) -> str | None:
    """Widget kind for a parameter, or None when it gets no widget.

    Scalars: slider when min, max and increment are all present (and the
    parameter is editable), plain entry otherwise; readonly visibility gives
    a readonly widget and hidden parameters none.  Databases become preset
    menus, points become draggable handles.
    """
    if isinstance(item, (m.ScalarParam, m.MatrixParam)):
        if item.visibility == "hidden":
            return None
        if item.visibility == "readonly":
            return "readonly"
        if (
            isinstance(item, m.ScalarParam)
            and item.min is not None
            and item.max is not None
            and item.increment is not None
        ):
            return "slider"
        return "entry"
    if isinstance(item, m.ParamDatabase):
        return "preset_menu"
    if isinstance(item, m.PointParam):
        return "point_handle"
    raise TypeError(f"not a parameter item: {item!r}")


def lower(view: LocalizedView) -> tuple[ComputeIR, UiFormIR]:
    """Produce (ComputeIR, UiFormIR) from a localized document view."""
    doc = view.doc
    compute_ir = _lower_compute(doc, view.language)
    ui_ir = _lower_ui(doc, view.language, view.languages)
    return compute_ir, ui_ir


# ---------------------------------------------------------------------------
# Compute side

def _lower_compute(doc: m.SimulationDoc, language: str | None) -> ComputeIR:
    ir = ComputeIR(doc_id=doc.doc_id, language=language)

    for section in doc.parameters:
        for item in section.items:
            if isinstance(item, m.ScalarParam):
                ir.param_decls.append(
                    ParamDecl(
                        symbol=item.label,
                        kind="scalar",
                        default=float(item.default_value),
                        unit=item.unit,
                        name=item.name,
                        min=item.min,
                        max=item.max,
                        increment=item.increment,
                        visibility=item.visibility,
                        source="scalar",
                    )
                )
            elif isinstance(item, m.MatrixParam):
                ir.param_decls.append(
                    ParamDecl(
                        symbol=item.label,
                        kind="matrix",
                        default=[list(map(float, row)) for row in item.default_value],
                        name=item.name,
                        visibility=item.visibility,
                        source="matrix",
                    )
                )
            elif isinstance(item, m.PointParam):
                for coord in (item.x1, item.x2):
                    ir.param_decls.append(
                        ParamDecl(
                            symbol=coord.label,
                            kind="scalar",
                            default=float(coord.value),
                            visibility="readonly",
                            source="point-coord",
                        )
                    )
                ir.point_decls.append(
                    PointDecl(
                        label=item.label,
                        x1_symbol=item.x1.label,
                        x1_default=float(item.x1.value),
                        x2_symbol=item.x2.label,
                        x2_default=float(item.x2.value),
                        constraint=item.constraint,
                        constraint_kind=_constraint_kind(doc, item.constraint),
                    )
                )
            elif isinstance(item, m.ParamDatabase):
                first = item.instances[0]
                for member in item.member_labels:
                    ir.param_decls.append(
                        ParamDecl(
                            symbol=member,
                            kind="scalar",
                            default=float(first.values[member]),
                            visibility="hidden",
                            source="db-member",
                        )
                    )

    for poly in doc.graphs:
        ir.polylines.append(
            PolylineIR(
                label=poly.label,
                vertices=[(to_text(v.x1), to_text(v.x2)) for v in poly.vertices],
            )
        )

    ordered = _order_items(doc)
    domains = {
        item.label: item for item in doc.compute if isinstance(item, (m.Domain1D, m.Domain2D))
    }

    for item in ordered:
        if isinstance(item, m.Domain1D):
            ir.tasks.append(_discretize_task(item))
        elif isinstance(item, m.Domain2D):
            ir.tasks.append(
                Discretize2DTask(
                    label=item.label,
                    x=_axis_grid(item.x_axis),
                    y=_axis_grid(item.y_axis),
                )
            )
        elif isinstance(item, m.OdeDef):
            _lower_ode(ir, item, domains)
        elif isinstance(item, m.NonlinearSystemDef):
            ir.tasks.append(
                NewtonTask(
                    label=item.label,
                    unknowns=[(u.label, to_text(u.guess)) for u in item.unknowns],
                    residuals=[to_text(r.expr) for r in item.residuals],
                )
            )
            for u in item.unknowns:
                ir.result_decls.append(ResultDecl(u.label, "scalar"))
        elif isinstance(item, m.ImplicitCurveDef):
            d2 = domains[item.domain]
            assert isinstance(d2, m.Domain2D)
            ir.tasks.append(
                ImplicitTraceTask(
                    label=item.label,
                    f=to_text(item.f),
                    x=d2.x_axis.label,
                    y=d2.y_axis.label,
                    name=item.label,
                )
            )
            ir.result_decls.append(
                ResultDecl(item.label, "trace", abscissa=d2.x_axis.label)
            )
        elif isinstance(item, m.CurveDef):
            d1 = domains[item.domain]
            assert isinstance(d1, m.Domain1D)
            name = item.name if isinstance(item.name, str) else item.label
            ir.tasks.append(
                SampleCurveTask(
                    label=item.label,
                    curve_kind=item.kind,
                    exprs=[to_text(e) for e in item.exprs],
                    grid=d1.label,
                    name=name or item.label,
                    unit=d1.unit,
                )
            )
            abscissa = d1.label if item.kind == "nonparametric" else f"{item.label}:x"
            ir.result_decls.append(
                ResultDecl(item.label, "series", name=name or item.label, abscissa=abscissa)
            )
        elif isinstance(item, m.SurfaceDef):
            d2 = domains[item.domain]
            assert isinstance(d2, m.Domain2D)
            name = item.name if isinstance(item.name, str) else item.label
            ir.tasks.append(
                SampleSurfaceTask(
                    label=item.label,
                    surface_kind=item.kind,
                    exprs=[to_text(e) for e in item.exprs],
                    x=d2.x_axis.label,
                    y=d2.y_axis.label,
                    name=name or item.label,
                )
            )
            ir.result_decls.append(
                ResultDecl(item.label, "field2d", name=name or item.label)
            )
        elif isinstance(item, m.PdeDef):
            d2 = domains[item.domain]
            assert isinstance(d2, m.Domain2D)
            ir.tasks.append(
                PdeTask(
                    label=item.label,
                    x=d2.x_axis.label,
                    y=d2.y_axis.label,
                    p11=to_text(item.p11),
                    p12=to_text(item.p12),
                    p21=to_text(item.p21),
                    p22=to_text(item.p22),
                    c=to_text(item.c),
                    f=to_text(item.f),
                    boundary={
                        edge: {"type": cond.kind, "value": to_text(cond.value)}
                        for edge, cond in sorted(item.boundary.items())
                    },
                    name=item.label,
                )
            )
            ir.result_decls.append(ResultDecl(item.label, "field2d", name=item.label))

    for pd in ir.point_decls:
        ir.result_decls.append(ResultDecl(pd.label, "points", name=pd.label))

    return ir


def _constraint_kind(doc: m.SimulationDoc, ref: str | None) -> str | None:
    if ref is None:
        return None
    for poly in doc.graphs:
        if poly.label == ref:
            return "polyline"
    for item in doc.compute:
        if isinstance(item, m.CurveDef) and item.label == ref:
            return "curve"
    return None


def _discretize_task(d: m.Domain1D) -> DiscretizeTask:
    name = d.name if isinstance(d.name, str) else ""
    return DiscretizeTask(
        target=d.label,
        lower=to_text(d.lower),
        upper=to_text(d.upper),
        n=d.n_points,
        spacing=d.spacing,
        unit=d.unit,
        name=name or d.label,
    )


def _axis_grid(d: m.Domain1D) -> AxisGrid:
    return AxisGrid(
        symbol=d.label,
        lower=to_text(d.lower),
        upper=to_text(d.upper),
        n=d.n_points,
        spacing=d.spacing,
        unit=d.unit,
    )


def _lower_ode(ir: ComputeIR, ode: m.OdeDef, domains: dict) -> None:
    time_domain = domains[ode.time_domain]
    assert isinstance(time_domain, m.Domain1D)
    time_symbol = time_domain.label

    body = [Assign(time_symbol, {"kind": "expr", "text": "_t"})]
    for k, st in enumerate(ode.states, start=1):
        body.append(
            Assign(st.label, {"kind": "select", "matrix": "_X", "row": f"{k}:{k}", "col": "1"})
        )
    body.append(
        Assign(
            "lhs",
            {"kind": "pack", "items": [to_text(st.derivative) for st in ode.states]},
        )
    )
    ir.function_defs.append(
        FunctionDef(
            name=f"f_{ode.label}",
            inputs=["_t", "_X"],
            outputs=["lhs"],
            body=body,
        )
    )

    ir.tasks.append(
        OdeSolveTask(
            label=ode.label,
            function=f"f_{ode.label}",
            grid=time_symbol,
            time_symbol=time_symbol,
            states=[
                OdeStateIR(
                    symbol=st.label,
                    unit=st.unit,
                    name=st.name if isinstance(st.name, str) else st.label,
                    derivative=to_text(st.derivative),
                    initial=to_text(st.initial),
                )
                for st in ode.states
            ],
        )
    )
    for st in ode.states:
        ir.result_decls.append(
            ResultDecl(
                st.label,
                "series",
                unit=st.unit,
                name=st.name if isinstance(st.name, str) else st.label,
                abscissa=time_symbol,
            )
        )
    for out in ode.outputs:
        ir.tasks.append(
            OutputEvalTask(
                symbol=out.label,
                expr=to_text(out.value),
                abscissa=time_symbol,
                ode=ode.label,
                unit=out.unit,
                name=out.name if isinstance(out.name, str) else out.label,
            )
        )
        ir.result_decls.append(
            ResultDecl(
                out.label,
                "series",
                unit=out.unit,
                name=out.name if isinstance(out.name, str) else out.label,
                abscissa=time_symbol,
            )
        )


# ---------------------------------------------------------------------------
# Dependency ordering

def _order_items(doc: m.SimulationDoc) -> list[m.ComputeItem]:
    items = list(doc.compute)
    produced: dict[str, int] = {}  # symbol or domain label -> item index
    for idx, item in enumerate(items):
        produced[item.label] = idx
        if isinstance(item, m.Domain2D):
            produced[item.x_axis.label] = idx
            produced[item.y_axis.label] = idx
        elif isinstance(item, m.OdeDef):
            for st in item.states:
                produced[st.label] = idx
            for out in item.outputs:
                produced[out.label] = idx
        elif isinstance(item, m.NonlinearSystemDef):
            for u in item.unknowns:
                produced[u.label] = idx

    def deps(self_idx: int, item: m.ComputeItem) -> set[int]:
        out: set[int] = set()
        refs: list[str] = []
        syms: set[str] = set()
        if isinstance(item, m.Domain1D):
            syms |= free_symbols(item.lower) | free_symbols(item.upper)
        elif isinstance(item, m.Domain2D):
            for axis in (item.x_axis, item.y_axis):
                syms |= free_symbols(axis.lower) | free_symbols(axis.upper)
        elif isinstance(item, m.OdeDef):
            refs.append(item.time_domain)
            for st in item.states:
                syms |= free_symbols(st.initial)
                syms |= free_symbols(st.derivative)
            for o in item.outputs:
                syms |= free_symbols(o.value)
            syms -= {st.label for st in item.states}
        elif isinstance(item, m.NonlinearSystemDef):
            for u in item.unknowns:
                syms |= free_symbols(u.guess)
            for r in item.residuals:
                syms |= free_symbols(r.expr)
            syms -= {u.label for u in item.unknowns}
        elif isinstance(item, m.ImplicitCurveDef):
            refs.append(item.domain)
            syms |= free_symbols(item.f)
        elif isinstance(item, m.CurveDef):
            refs.append(item.domain)
            for e in item.exprs:
                syms |= free_symbols(e)
        elif isinstance(item, m.SurfaceDef):
            refs.append(item.domain)
            for e in item.exprs:
                syms |= free_symbols(e)
        elif isinstance(item, m.PdeDef):
            refs.append(item.domain)
            for e in (item.p11, item.p12, item.p21, item.p22, item.c, item.f):
                syms |= free_symbols(e)
            for cond in item.boundary.values():
                syms |= free_symbols(cond.value)
        for ref in refs:
            if ref in produced:
                out.add(produced[ref])
        for sym in syms:
            if sym in CONSTANTS:
                continue
            if sym in produced:
                out.add(produced[sym])
        out.discard(self_idx)
        return out

    dep_map = {idx: deps(idx, item) for idx, item in enumerate(items)}
    ordered: list[int] = []
    placed: set[int] = set()
    while len(ordered) < len(items):
        progressed = False
        for idx in range(len(items)):
            if idx in placed:
                continue
            if dep_map[idx] <= placed:
                ordered.append(idx)
                placed.add(idx)
                progressed = True
        if not progressed:
            remaining = [items[i].label for i in range(len(items)) if i not in placed]
            raise CompileError(
                "dependency cycle among compute items: " + " -> ".join(remaining)
            )
    return [items[i] for i in ordered]


# ---------------------------------------------------------------------------
# UI side

def _lower_ui(
    doc: m.SimulationDoc, language: str | None, languages: list[str]
) -> UiFormIR:
    header = doc.header
    title = header.title if isinstance(header.title, str) else None
    ir = UiFormIR(
        doc_id=doc.doc_id,
        language=language,
        title=title or doc.doc_id,
        languages=list(languages),
    )

    for section in doc.parameters:
        page = Page(kind="params", title=_text(section.title))
        for item in section.items:
            widget = _widget_for(item)
            if widget is not None:
                page.widgets.append(widget)
        ir.pages.append(page)

    paragraphs: list[str] = []
    for block in doc.notes:
        if isinstance(block, list):
            paragraphs.extend(block)
        else:  # unresolved doc passed directly
            paragraphs.extend(block.variants.get(None, []))
    ir.pages.append(Page(kind="notes", title="Notes", paragraphs=paragraphs))

    ir.pages.append(
        Page(
            kind="about",
            title="About",
            about={
                "title": title or doc.doc_id,
                "author": header.author,
                "date": header.date,
                "keywords": list(header.keywords),
            },
        )
    )
    return ir


def _text(value) -> str:
    return value if isinstance(value, str) else ""


def _widget_for(item: m.ParameterItem) -> Widget | None:
    kind = select_widget(item)
    if kind is None:
        return None
    if isinstance(item, m.ScalarParam):
        w = Widget(
            kind=kind,
            symbol=item.label,
            name=_text(item.name) or item.label,
            unit=item.unit,
            default=float(item.default_value),
            rerun=kind != "readonly",
        )
        if kind == "slider":
            w.from_ = item.min
            w.to = item.max
            w.resolution = item.increment
        return w
    if isinstance(item, m.MatrixParam):
        return Widget(
            kind=kind,
            symbol=item.label,
            name=_text(item.name) or item.label,
            default=[list(map(float, row)) for row in item.default_value],
            rerun=kind != "readonly",
            matrix=True,
        )
    if isinstance(item, m.ParamDatabase):
        return Widget(
            kind="preset_menu",
            symbol=item.label,
            name=_text(item.name) or item.label,
            rerun=True,
            members=list(item.member_labels),
            instances=[
                {"name": inst.name, "values": {k: float(v) for k, v in inst.values.items()}}
                for inst in item.instances
            ],
        )
    if isinstance(item, m.PointParam):
        return Widget(
            kind="point_handle",
            symbol=item.label,
            name=item.label,
            rerun=True,
            default=[float(item.x1.value), float(item.x2.value)],
            x1_symbol=item.x1.label,
            x2_symbol=item.x2.label,
            constraint=item.constraint,
        )
    return None
