"""The two intermediate representations and their canonical JSON forms.

ComputeIR describes all numeric work (declarations, right-hand-side function
definitions, an ordered task list); UiFormIR describes the generated
interface (pages of widgets).  Both serialize to canonical JSON with
camelCase keys; load(emit(ir)) is the identity.

Expressions are stored as canonical text (see expr.to_text) so the IRs stay
plain data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

from ..jsonutil import canonical_dumps

IR_VERSION = 1

__all__ = [
    "IR_VERSION",
    "ParamDecl",
    "PointDecl",
    "PolylineIR",
    "Assign",
    "FunctionDef",
    "AxisGrid",
    "DiscretizeTask",
    "Discretize2DTask",
    "OdeStateIR",
    "OdeSolveTask",
    "OutputEvalTask",
    "NewtonTask",
    "ImplicitTraceTask",
    "SampleCurveTask",
    "SampleSurfaceTask",
    "PdeTask",
    "Task",
    "ResultDecl",
    "ComputeIR",
    "Widget",
    "Page",
    "UiFormIR",
    "emit_compute",
    "load_compute",
    "emit_ui",
    "load_ui",
]


def _drop_nones(d: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in d.items() if v is not None}


@dataclass
class ParamDecl:
    symbol: str
    kind: str  # scalar | matrix
    default: Any  # float, or list of rows for matrices
    unit: str = ""
    name: str = ""
    min: Optional[float] = None
    max: Optional[float] = None
    increment: Optional[float] = None
    visibility: str = "editable"
    source: str = "scalar"  # scalar | matrix | point-coord | db-member

    def to_dict(self) -> dict:
        return _drop_nones(
            {
                "symbol": self.symbol,
                "kind": self.kind,
                "default": self.default,
                "unit": self.unit,
                "name": self.name,
                "min": self.min,
                "max": self.max,
                "increment": self.increment,
                "visibility": self.visibility,
                "source": self.source,
            }
        )

    @classmethod
    def from_dict(cls, d: dict) -> "ParamDecl":
        return cls(
            symbol=d["symbol"],
            kind=d["kind"],
            default=d["default"],
            unit=d.get("unit", ""),
            name=d.get("name", ""),
            min=d.get("min"),
            max=d.get("max"),
            increment=d.get("increment"),
            visibility=d.get("visibility", "editable"),
            source=d.get("source", "scalar"),
        )


@dataclass
class PointDecl:
    label: str
    x1_symbol: str
    x1_default: float
    x2_symbol: str
    x2_default: float
    constraint: Optional[str] = None  # polyline or curve label
    constraint_kind: Optional[str] = None  # polyline | curve

    def to_dict(self) -> dict:
        return _drop_nones(
            {
                "label": self.label,
                "x1Symbol": self.x1_symbol,
                "x1Default": self.x1_default,
                "x2Symbol": self.x2_symbol,
                "x2Default": self.x2_default,
                "constraint": self.constraint,
                "constraintKind": self.constraint_kind,
            }
        )

    @classmethod
    def from_dict(cls, d: dict) -> "PointDecl":
        return cls(
            label=d["label"],
            x1_symbol=d["x1Symbol"],
            x1_default=d["x1Default"],
            x2_symbol=d["x2Symbol"],
            x2_default=d["x2Default"],
            constraint=d.get("constraint"),
            constraint_kind=d.get("constraintKind"),
        )


@dataclass
class PolylineIR:
    label: str
    vertices: list[tuple[str, str]]  # expression text pairs

    def to_dict(self) -> dict:
        return {"label": self.label, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_dict(cls, d: dict) -> "PolylineIR":
        return cls(d["label"], [tuple(v) for v in d["vertices"]])


@dataclass
class Assign:
    """One statement of a function body.

    rhs forms: {"kind": "expr", "text": ...} evaluates an expression;
    {"kind": "select", "matrix": ..., "row": "k:k", "col": "1"} picks a state
    row out of the packed vector; {"kind": "pack", "items": [...]} stacks
    expressions into the output vector.
    """

    lhs: str
    rhs: dict

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs}

    @classmethod
    def from_dict(cls, d: dict) -> "Assign":
        return cls(d["lhs"], d["rhs"])


@dataclass
class FunctionDef:
    name: str
    inputs: list[str]
    outputs: list[str]
    body: list[Assign]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "body": [a.to_dict() for a in self.body],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FunctionDef":
        return cls(
            d["name"],
            list(d["inputs"]),
            list(d["outputs"]),
            [Assign.from_dict(a) for a in d["body"]],
        )


@dataclass
class AxisGrid:
    symbol: str
    lower: str
    upper: str
    n: int
    spacing: str = "linear"
    unit: str = ""

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "lower": self.lower,
            "upper": self.upper,
            "n": self.n,
            "spacing": self.spacing,
            "unit": self.unit,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AxisGrid":
        return cls(
            d["symbol"], d["lower"], d["upper"], d["n"], d["spacing"], d.get("unit", "")
        )


@dataclass
class DiscretizeTask:
    kind = "discretize"
    target: str
    lower: str
    upper: str
    n: int
    spacing: str = "linear"
    unit: str = ""
    name: str = ""


@dataclass
class Discretize2DTask:
    kind = "discretize2d"
    label: str
    x: AxisGrid
    y: AxisGrid


@dataclass
class OdeStateIR:
    symbol: str
    unit: str
    name: str
    derivative: str
    initial: str

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "unit": self.unit,
            "name": self.name,
            "derivative": self.derivative,
            "initial": self.initial,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OdeStateIR":
        return cls(d["symbol"], d.get("unit", ""), d.get("name", ""), d["derivative"], d["initial"])


@dataclass
class OdeSolveTask:
    kind = "ode_solve"
    label: str
    function: str
    grid: str  # symbol of the discretized time domain
    time_symbol: str
    states: list[OdeStateIR] = field(default_factory=list)


@dataclass
class OutputEvalTask:
    kind = "output_eval"
    symbol: str
    expr: str
    abscissa: str  # time symbol
    ode: str  # owning ode label
    unit: str = ""
    name: str = ""


@dataclass
class NewtonTask:
    kind = "newton"
    label: str
    unknowns: list[tuple[str, str]] = field(default_factory=list)  # (symbol, guess)
    residuals: list[str] = field(default_factory=list)


@dataclass
class ImplicitTraceTask:
    kind = "implicit_trace"
    label: str
    f: str
    x: str  # x-axis symbol
    y: str  # y-axis symbol
    name: str = ""


@dataclass
class SampleCurveTask:
    kind = "sample_curve"
    label: str
    curve_kind: str  # nonparametric | parametric
    exprs: list[str] = field(default_factory=list)
    grid: str = ""
    name: str = ""
    unit: str = ""


@dataclass
class SampleSurfaceTask:
    kind = "sample_surface"
    label: str
    surface_kind: str  # nonparametric | parametric
    exprs: list[str] = field(default_factory=list)
    x: str = ""
    y: str = ""
    name: str = ""


@dataclass
class PdeTask:
    kind = "pde"
    label: str
    x: str
    y: str
    p11: str = "1"
    p12: str = "0"
    p21: str = "0"
    p22: str = "1"
    c: str = "0"
    f: str = "0"
    boundary: dict[str, dict] = field(default_factory=dict)
    name: str = ""


Task = Union[
    DiscretizeTask,
    Discretize2DTask,
    OdeSolveTask,
    OutputEvalTask,
    NewtonTask,
    ImplicitTraceTask,
    SampleCurveTask,
    SampleSurfaceTask,
    PdeTask,
]


def _task_to_dict(task: Task) -> dict:
    if isinstance(task, DiscretizeTask):
        return {
            "kind": task.kind,
            "target": task.target,
            "lower": task.lower,
            "upper": task.upper,
            "n": task.n,
            "spacing": task.spacing,
            "unit": task.unit,
            "name": task.name,
        }
    if isinstance(task, Discretize2DTask):
        return {
            "kind": task.kind,
            "label": task.label,
            "x": task.x.to_dict(),
            "y": task.y.to_dict(),
        }
    if isinstance(task, OdeSolveTask):
        return {
            "kind": task.kind,
            "label": task.label,
            "function": task.function,
            "grid": task.grid,
            "timeSymbol": task.time_symbol,
            "states": [s.to_dict() for s in task.states],
        }
    if isinstance(task, OutputEvalTask):
        return {
            "kind": task.kind,
            "symbol": task.symbol,
            "expr": task.expr,
            "abscissa": task.abscissa,
            "ode": task.ode,
            "unit": task.unit,
            "name": task.name,
        }
    if isinstance(task, NewtonTask):
        return {
            "kind": task.kind,
            "label": task.label,
            "unknowns": [list(u) for u in task.unknowns],
            "residuals": task.residuals,
        }
    if isinstance(task, ImplicitTraceTask):
        return {
            "kind": task.kind,
            "label": task.label,
            "f": task.f,
            "x": task.x,
            "y": task.y,
            "name": task.name,
        }
    if isinstance(task, SampleCurveTask):
        return {
            "kind": task.kind,
            "label": task.label,
            "curveKind": task.curve_kind,
            "exprs": task.exprs,
            "grid": task.grid,
            "name": task.name,
            "unit": task.unit,
        }
    if isinstance(task, SampleSurfaceTask):
        return {
            "kind": task.kind,
            "label": task.label,
            "surfaceKind": task.surface_kind,
            "exprs": task.exprs,
            "x": task.x,
            "y": task.y,
            "name": task.name,
        }
    if isinstance(task, PdeTask):
        return {
            "kind": task.kind,
            "label": task.label,
            "x": task.x,
            "y": task.y,
            "p11": task.p11,
            "p12": task.p12,
            "p21": task.p21,
            "p22": task.p22,
            "c": task.c,
            "f": task.f,
            "boundary": task.boundary,
            "name": task.name,
        }
    raise TypeError(f"unknown task: {task!r}")


def _task_from_dict(d: dict) -> Task:
    kind = d["kind"]
    if kind == "discretize":
        return DiscretizeTask(
            d["target"], d["lower"], d["upper"], d["n"], d["spacing"],
            d.get("unit", ""), d.get("name", ""),
        )
    if kind == "discretize2d":
        return Discretize2DTask(
            d["label"], AxisGrid.from_dict(d["x"]), AxisGrid.from_dict(d["y"])
        )
    if kind == "ode_solve":
        return OdeSolveTask(
            d["label"],
            d["function"],
            d["grid"],
            d["timeSymbol"],
            [OdeStateIR.from_dict(s) for s in d["states"]],
        )
    if kind == "output_eval":
        return OutputEvalTask(
            d["symbol"], d["expr"], d["abscissa"], d["ode"],
            d.get("unit", ""), d.get("name", ""),
        )
    if kind == "newton":
        return NewtonTask(
            d["label"], [tuple(u) for u in d["unknowns"]], list(d["residuals"])
        )
    if kind == "implicit_trace":
        return ImplicitTraceTask(d["label"], d["f"], d["x"], d["y"], d.get("name", ""))
    if kind == "sample_curve":
        return SampleCurveTask(
            d["label"], d["curveKind"], list(d["exprs"]), d["grid"],
            d.get("name", ""), d.get("unit", ""),
        )
    if kind == "sample_surface":
        return SampleSurfaceTask(
            d["label"], d["surfaceKind"], list(d["exprs"]), d["x"], d["y"],
            d.get("name", ""),
        )
    if kind == "pde":
        return PdeTask(
            d["label"], d["x"], d["y"], d["p11"], d["p12"], d["p21"], d["p22"],
            d["c"], d["f"], dict(d["boundary"]), d.get("name", ""),
        )
    raise ValueError(f"unknown task kind {kind!r}")


@dataclass
class ResultDecl:
    symbol: str
    role: str  # series | field2d | points | trace | scalar
    unit: str = ""
    name: str = ""
    abscissa: str = ""  # abscissa symbol/axis label for series

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "role": self.role,
            "unit": self.unit,
            "name": self.name,
            "abscissa": self.abscissa,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResultDecl":
        return cls(
            d["symbol"], d["role"], d.get("unit", ""), d.get("name", ""),
            d.get("abscissa", ""),
        )


@dataclass
class ComputeIR:
    doc_id: str
    language: Optional[str]
    param_decls: list[ParamDecl] = field(default_factory=list)
    point_decls: list[PointDecl] = field(default_factory=list)
    polylines: list[PolylineIR] = field(default_factory=list)
    function_defs: list[FunctionDef] = field(default_factory=list)
    tasks: list[Task] = field(default_factory=list)
    result_decls: list[ResultDecl] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "irVersion": IR_VERSION,
            "docId": self.doc_id,
            "language": self.language,
            "paramDecls": [p.to_dict() for p in self.param_decls],
            "pointDecls": [p.to_dict() for p in self.point_decls],
            "polylines": [p.to_dict() for p in self.polylines],
            "functionDefs": [f.to_dict() for f in self.function_defs],
            "tasks": [_task_to_dict(t) for t in self.tasks],
            "resultDecls": [r.to_dict() for r in self.result_decls],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComputeIR":
        return cls(
            doc_id=d["docId"],
            language=d.get("language"),
            param_decls=[ParamDecl.from_dict(p) for p in d["paramDecls"]],
            point_decls=[PointDecl.from_dict(p) for p in d["pointDecls"]],
            polylines=[PolylineIR.from_dict(p) for p in d["polylines"]],
            function_defs=[FunctionDef.from_dict(f) for f in d["functionDefs"]],
            tasks=[_task_from_dict(t) for t in d["tasks"]],
            result_decls=[ResultDecl.from_dict(r) for r in d["resultDecls"]],
        )


# ---------------------------------------------------------------------------
# UI-form IR

@dataclass
class Widget:
    kind: str  # entry | slider | readonly | preset_menu | point_handle
    symbol: str
    name: str = ""
    unit: str = ""
    default: Any = None
    rerun: bool = True
    # slider
    from_: Optional[float] = None
    to: Optional[float] = None
    resolution: Optional[float] = None
    # matrix entry
    matrix: Optional[bool] = None
    # preset_menu
    members: Optional[list[str]] = None
    instances: Optional[list[dict]] = None
    # point_handle
    x1_symbol: Optional[str] = None
    x2_symbol: Optional[str] = None
    constraint: Optional[str] = None

    def to_dict(self) -> dict:
        return _drop_nones(
            {
                "kind": self.kind,
                "symbol": self.symbol,
                "name": self.name,
                "unit": self.unit,
                "default": self.default,
                "rerun": self.rerun,
                "from": self.from_,
                "to": self.to,
                "resolution": self.resolution,
                "matrix": self.matrix,
                "members": self.members,
                "instances": self.instances,
                "x1Symbol": self.x1_symbol,
                "x2Symbol": self.x2_symbol,
                "constraint": self.constraint,
            }
        )

    @classmethod
    def from_dict(cls, d: dict) -> "Widget":
        return cls(
            kind=d["kind"],
            symbol=d["symbol"],
            name=d.get("name", ""),
            unit=d.get("unit", ""),
            default=d.get("default"),
            rerun=d.get("rerun", True),
            from_=d.get("from"),
            to=d.get("to"),
            resolution=d.get("resolution"),
            matrix=d.get("matrix"),
            members=d.get("members"),
            instances=d.get("instances"),
            x1_symbol=d.get("x1Symbol"),
            x2_symbol=d.get("x2Symbol"),
            constraint=d.get("constraint"),
        )


@dataclass
class Page:
    kind: str  # params | notes | about
    title: str
    widgets: list[Widget] = field(default_factory=list)
    paragraphs: Optional[list[str]] = None
    about: Optional[dict] = None

    def to_dict(self) -> dict:
        return _drop_nones(
            {
                "kind": self.kind,
                "title": self.title,
                "widgets": [w.to_dict() for w in self.widgets],
                "paragraphs": self.paragraphs,
                "about": self.about,
            }
        )

    @classmethod
    def from_dict(cls, d: dict) -> "Page":
        return cls(
            kind=d["kind"],
            title=d["title"],
            widgets=[Widget.from_dict(w) for w in d.get("widgets", [])],
            paragraphs=d.get("paragraphs"),
            about=d.get("about"),
        )


@dataclass
class UiFormIR:
    doc_id: str
    language: Optional[str]
    title: str
    languages: list[str] = field(default_factory=list)
    pages: list[Page] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "irVersion": IR_VERSION,
            "docId": self.doc_id,
            "language": self.language,
            "title": self.title,
            "languages": self.languages,
            "pages": [p.to_dict() for p in self.pages],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UiFormIR":
        return cls(
            doc_id=d["docId"],
            language=d.get("language"),
            title=d.get("title", d["docId"]),
            languages=list(d.get("languages", [])),
            pages=[Page.from_dict(p) for p in d["pages"]],
        )


# ---------------------------------------------------------------------------
# Emit / load

def emit_compute(ir: ComputeIR) -> str:
    """Canonical JSON text of a ComputeIR; emit(load(emit(ir))) is identity."""
    return canonical_dumps(ir.to_dict()) + "\n"


def load_compute(text: str) -> ComputeIR:
    import json

    d = json.loads(text)
    if d.get("irVersion") != IR_VERSION:
        raise ValueError(f"unsupported irVersion {d.get('irVersion')!r}")
    return ComputeIR.from_dict(d)


def emit_ui(ir: UiFormIR) -> str:
    return canonical_dumps(ir.to_dict()) + "\n"


def load_ui(text: str) -> UiFormIR:
    import json

    d = json.loads(text)
    if d.get("irVersion") != IR_VERSION:
        raise ValueError(f"unsupported irVersion {d.get('irVersion')!r}")
    return UiFormIR.from_dict(d)
