"""Serialize a SimulationDoc back to XML.

Re-parsing the output yields a structurally equal AST (source positions
aside); expressions print in canonical form, which parses back to the same
tree.
"""

from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from ..expr import fmt_real, to_text
from . import model as m

__all__ = ["doc_to_xml"]


class _Writer:
    def __init__(self):
        self.lines: list[str] = ['<?xml version="1.0" encoding="UTF-8"?>']
        self.depth = 0

    def open(self, tag: str, **attrs) -> None:
        self.lines.append(f"{'  ' * self.depth}<{tag}{_attrs(attrs)}>")
        self.depth += 1

    def close(self, tag: str) -> None:
        self.depth -= 1
        self.lines.append(f"{'  ' * self.depth}</{tag}>")

    def leaf(self, tag: str, text: str = "", **attrs) -> None:
        indent = "  " * self.depth
        if text:
            self.lines.append(f"{indent}<{tag}{_attrs(attrs)}>{escape(text)}</{tag}>")
        else:
            self.lines.append(f"{indent}<{tag}{_attrs(attrs)}/>")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _attrs(attrs: dict) -> str:
    parts = []
    for key, value in attrs.items():
        if value is None:
            continue
        parts.append(f" {key}={quoteattr(str(value))}")
    return "".join(parts)


def _variants(w: _Writer, tag: str, localized: Optional[m.LocalizedText]) -> None:
    if localized is None:
        return
    keys = sorted(localized.variants, key=lambda k: (k is not None, k or ""))
    for key in keys:
        w.leaf(tag, localized.variants[key], lang=key)


def doc_to_xml(doc: m.SimulationDoc) -> str:
    w = _Writer()
    w.open("simulation")

    w.open("header")
    _variants(w, "title", doc.header.title)
    w.leaf("author", doc.header.author)
    w.leaf("date", doc.header.date)
    if doc.header.keywords:
        w.open("keywords")
        for keyword in doc.header.keywords:
            w.leaf("keyword", keyword)
        w.close("keywords")
    w.close("header")

    for block in doc.notes:
        keys = sorted(block.variants, key=lambda k: (k is not None, k or ""))
        for key in keys:
            paragraphs = block.variants[key]
            if paragraphs:
                w.open("notes", lang=key)
                for paragraph in paragraphs:
                    w.leaf("para", paragraph)
                w.close("notes")
            else:
                w.leaf("notes", lang=key)

    if doc.parameters:
        w.open("parameters")
        for section in doc.parameters:
            w.open("section")
            _variants(w, "title", section.title)
            for item in section.items:
                _write_param(w, item)
            w.close("section")
        w.close("parameters")

    if doc.compute:
        w.open("compute")
        for item in doc.compute:
            _write_compute(w, item)
        w.close("compute")

    if doc.graphs:
        w.open("graphs")
        for poly in doc.graphs:
            w.open("polyline", label=poly.label)
            for vertex in poly.vertices:
                w.leaf("vertex", x1=to_text(vertex.x1), x2=to_text(vertex.x2))
            w.close("polyline")
        w.close("graphs")

    if doc.display:
        w.open("display")
        for window in doc.display:
            w.open("window", rows=window.rows, cols=window.cols)
            _variants(w, "title", window.title)
            for axis in window.axes:
                tag = "axis2d" if axis.dims == 2 else "axis3d"
                w.open(tag)
                for ref in axis.items:
                    element = {
                        "curve2d": "drawcurve2d",
                        "surface": "drawsurface",
                        "points": "drawpoints",
                    }[ref.kind]
                    w.leaf(element, ref=ref.ref)
                w.close(tag)
            w.close("window")
        w.close("display")

    w.close("simulation")
    return w.text()


def _write_param(w: _Writer, item: m.ParameterItem) -> None:
    if isinstance(item, m.ScalarParam):
        w.open(
            "scalar",
            label=item.label,
            unit=item.unit or None,
            min=None if item.min is None else fmt_real(item.min),
            max=None if item.max is None else fmt_real(item.max),
            increment=None if item.increment is None else fmt_real(item.increment),
            visibility=None if item.visibility == "editable" else item.visibility,
        )
        _variants(w, "name", item.name)
        w.leaf("value", fmt_real(item.default_value))
        w.close("scalar")
    elif isinstance(item, m.MatrixParam):
        w.open(
            "matrix",
            label=item.label,
            visibility=None if item.visibility == "editable" else item.visibility,
        )
        _variants(w, "name", item.name)
        rows = "; ".join(
            " ".join(fmt_real(v) for v in row) for row in item.default_value
        )
        w.leaf("value", rows)
        w.close("matrix")
    elif isinstance(item, m.PointParam):
        w.open("point", label=item.label)
        for tag, coord in (("x1", item.x1), ("x2", item.x2)):
            w.open(tag, label=coord.label)
            w.leaf("value", fmt_real(coord.value))
            w.close(tag)
        if item.constraint:
            w.open("constraints")
            w.leaf("curve", ref=item.constraint)
            w.close("constraints")
        w.close("point")
    elif isinstance(item, m.ParamDatabase):
        w.open("database", label=item.label)
        _variants(w, "name", item.name)
        for inst in item.instances:
            w.open("instance", name=inst.name)
            for label, value in inst.values.items():
                w.leaf("item", fmt_real(value), label=label)
            w.close("instance")
        w.close("database")


def _write_domain1d(w: _Writer, d: m.Domain1D, tag: str) -> None:
    w.open(
        tag,
        label=d.label,
        unit=d.unit or None,
        points=d.n_points,
        scale=None if d.spacing == "linear" else d.spacing,
    )
    _variants(w, "name", d.name)
    w.open("interval")
    w.leaf("initialvalue", to_text(d.lower))
    w.leaf("finalvalue", to_text(d.upper))
    w.close("interval")
    w.close(tag)


def _write_compute(w: _Writer, item: m.ComputeItem) -> None:
    if isinstance(item, m.Domain1D):
        _write_domain1d(w, item, "defdomain1d")
    elif isinstance(item, m.Domain2D):
        w.open("defdomain2d", label=item.label)
        _write_domain1d(w, item.x_axis, "xdomain")
        _write_domain1d(w, item.y_axis, "ydomain")
        w.close("defdomain2d")
    elif isinstance(item, m.OdeDef):
        w.open("ode", label=item.label)
        w.leaf("refdomain1d", ref=item.time_domain)
        w.open("states")
        for st in item.states:
            w.open("state", label=st.label, unit=st.unit or None)
            _variants(w, "name", st.name)
            w.leaf("derivative", to_text(st.derivative))
            w.leaf("initialcond", to_text(st.initial))
            w.close("state")
        w.close("states")
        if item.outputs:
            w.open("outputs")
            for out in item.outputs:
                w.open("output", label=out.label, unit=out.unit or None)
                _variants(w, "name", out.name)
                w.leaf("value", to_text(out.value))
                w.close("output")
            w.close("outputs")
        w.close("ode")
    elif isinstance(item, m.NonlinearSystemDef):
        w.open("nonlinearsystem", label=item.label)
        for u in item.unknowns:
            w.open("unknown", label=u.label)
            w.leaf("initialguess", to_text(u.guess))
            w.close("unknown")
        for r in item.residuals:
            w.leaf("residual", to_text(r.expr))
        w.close("nonlinearsystem")
    elif isinstance(item, m.ImplicitCurveDef):
        w.open("implicitcurve", label=item.label)
        w.leaf("refdomain2d", ref=item.domain)
        w.leaf("equation", to_text(item.f))
        w.close("implicitcurve")
    elif isinstance(item, m.CurveDef):
        w.open("curve", label=item.label)
        _variants(w, "name", item.name)
        w.leaf("refdomain1d", ref=item.domain)
        if item.kind == "parametric":
            w.leaf("x", to_text(item.exprs[0]))
            w.leaf("y", to_text(item.exprs[1]))
        else:
            w.leaf("y", to_text(item.exprs[0]))
        w.close("curve")
    elif isinstance(item, m.SurfaceDef):
        w.open("surface", label=item.label)
        _variants(w, "name", item.name)
        w.leaf("refdomain2d", ref=item.domain)
        if item.kind == "parametric":
            w.leaf("x", to_text(item.exprs[0]))
            w.leaf("y", to_text(item.exprs[1]))
            w.leaf("z", to_text(item.exprs[2]))
        else:
            w.leaf("z", to_text(item.exprs[0]))
        w.close("surface")
    elif isinstance(item, m.PdeDef):
        w.open("pde", label=item.label)
        w.leaf("refdomain2d", ref=item.domain)
        w.open("diffusion")
        w.leaf("p11", to_text(item.p11))
        w.leaf("p12", item.p12_src)
        w.leaf("p21", item.p21_src)
        w.leaf("p22", to_text(item.p22))
        w.close("diffusion")
        w.leaf("absorption", to_text(item.c))
        w.leaf("source", to_text(item.f))
        for edge in ("left", "right", "bottom", "top"):
            cond = item.boundary.get(edge)
            if cond is None:
                continue
            w.open("boundary", edge=edge, type=cond.kind)
            w.leaf("value", to_text(cond.value))
            w.close("boundary")
        w.close("pde")
