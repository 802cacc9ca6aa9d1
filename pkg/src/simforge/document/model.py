"""Typed AST for simulation documents.

Instances are built by the parser and treated as immutable afterwards; they
are safe to share between threads.  Every node keeps its source position for
diagnostics.  Fields annotated LocalizedText hold plain strings after
resolve_language() has been applied (see localize.py).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Union

from ..expr import ExprAst

Visibility = Literal["editable", "readonly", "hidden"]
Spacing = Literal["linear", "log"]

DEFAULT_N_POINTS = 200


@dataclass(frozen=True)
class SourcePos:
    line: int
    col: int


@dataclass
class LocalizedText:
    """Text with per-language variants; key None is the default variant."""

    variants: dict[Optional[str], str]
    pos: SourcePos

    def resolve(self, lang: Optional[str]) -> tuple[str, bool]:
        """Return (text, fell_back).  Falls back to the default variant."""
        if lang is not None and lang in self.variants:
            return self.variants[lang], False
        return self.variants.get(None, ""), lang is not None


@dataclass
class LocalizedBlock:
    """Multi-paragraph localized text (the notes element)."""

    variants: dict[Optional[str], list[str]]
    pos: SourcePos

    def resolve(self, lang: Optional[str]) -> tuple[list[str], bool]:
        if lang is not None and lang in self.variants:
            return self.variants[lang], False
        return self.variants.get(None, []), lang is not None


@dataclass
class Header:
    author: str
    date: str
    keywords: list[str]
    pos: SourcePos
    title: Optional[LocalizedText] = None


@dataclass
class ScalarParam:
    label: str
    unit: str
    name: LocalizedText
    default_value: float
    pos: SourcePos
    min: Optional[float] = None
    max: Optional[float] = None
    increment: Optional[float] = None
    visibility: Visibility = "editable"


@dataclass
class MatrixParam:
    label: str
    name: LocalizedText
    default_value: list[list[float]]  # rows x cols, rectangular
    pos: SourcePos
    visibility: Visibility = "editable"


@dataclass
class PointCoord:
    label: str
    value: float
    pos: SourcePos


@dataclass
class PointParam:
    label: str
    x1: PointCoord
    x2: PointCoord
    pos: SourcePos
    constraint: Optional[str] = None  # label of a polyline or curve


@dataclass
class DbInstance:
    name: str
    values: dict[str, float]
    pos: SourcePos


@dataclass
class ParamDatabase:
    label: str
    name: LocalizedText
    member_labels: list[str]
    instances: list[DbInstance]
    pos: SourcePos


ParameterItem = Union[ScalarParam, MatrixParam, PointParam, ParamDatabase]


@dataclass
class ParameterSection:
    title: LocalizedText
    items: list[ParameterItem]
    pos: SourcePos


@dataclass
class Domain1D:
    label: str
    unit: str
    lower: ExprAst
    upper: ExprAst
    pos: SourcePos
    name: Optional[LocalizedText] = None
    n_points: int = DEFAULT_N_POINTS
    spacing: Spacing = "linear"


@dataclass
class Domain2D:
    label: str
    x_axis: Domain1D
    y_axis: Domain1D
    pos: SourcePos


@dataclass
class OdeState:
    label: str
    unit: str
    name: LocalizedText
    derivative: ExprAst
    initial: ExprAst
    pos: SourcePos


@dataclass
class OdeOutput:
    label: str
    unit: str
    name: LocalizedText
    value: ExprAst
    pos: SourcePos


@dataclass
class OdeDef:
    label: str
    time_domain: str  # ref to a Domain1D
    states: list[OdeState]
    outputs: list[OdeOutput]
    pos: SourcePos


@dataclass
class UnknownVar:
    label: str
    guess: ExprAst
    pos: SourcePos


@dataclass
class Residual:
    expr: ExprAst
    pos: SourcePos


@dataclass
class NonlinearSystemDef:
    label: str
    unknowns: list[UnknownVar]
    residuals: list[Residual]
    pos: SourcePos


@dataclass
class ImplicitCurveDef:
    label: str
    f: ExprAst
    domain: str  # ref to a Domain2D
    pos: SourcePos


@dataclass
class CurveDef:
    label: str
    kind: Literal["nonparametric", "parametric"]
    exprs: list[ExprAst]  # [y] or [x, y]
    domain: str  # ref to a Domain1D
    pos: SourcePos
    name: Optional[LocalizedText] = None


@dataclass
class SurfaceDef:
    label: str
    kind: Literal["nonparametric", "parametric"]
    exprs: list[ExprAst]  # [z] or [x, y, z]
    domain: str  # ref to a Domain2D
    pos: SourcePos
    name: Optional[LocalizedText] = None


@dataclass
class EdgeCondition:
    kind: Literal["dirichlet", "neumann"]
    value: ExprAst
    pos: SourcePos


@dataclass
class PdeDef:
    label: str
    domain: str  # ref to a Domain2D (rectangle)
    p11: ExprAst
    p12: ExprAst
    p21: ExprAst
    p22: ExprAst
    c: ExprAst
    f: ExprAst
    boundary: dict[str, EdgeCondition]  # keys: left, right, bottom, top
    pos: SourcePos
    # attribute text as written, for the symmetry-as-written check
    p12_src: str = "0"
    p21_src: str = "0"


ComputeItem = Union[
    Domain1D,
    Domain2D,
    OdeDef,
    NonlinearSystemDef,
    ImplicitCurveDef,
    CurveDef,
    SurfaceDef,
    PdeDef,
]


@dataclass
class Vertex:
    x1: ExprAst
    x2: ExprAst
    pos: SourcePos


@dataclass
class PolylineDef:
    label: str
    vertices: list[Vertex]
    pos: SourcePos


@dataclass
class DrawRef:
    kind: Literal["curve2d", "surface", "points"]
    ref: str
    pos: SourcePos


@dataclass
class AxisSpec:
    dims: Literal[2, 3]
    items: list[DrawRef]
    pos: SourcePos


@dataclass
class WindowSpec:
    title: Optional[LocalizedText]
    axes: list[AxisSpec]
    pos: SourcePos
    rows: Optional[int] = None
    cols: Optional[int] = None


@dataclass
class SimulationDoc:
    header: Header
    notes: list[LocalizedBlock]
    parameters: list[ParameterSection]
    compute: list[ComputeItem]
    graphs: list[PolylineDef]
    display: list[WindowSpec]
    doc_id: str = ""
    parse_warnings: list = field(default_factory=list)

    def languages(self) -> list[str]:
        """All non-default language tags appearing anywhere in the document."""
        tags: set[str] = set()

        def visit(obj) -> None:
            if isinstance(obj, (LocalizedText, LocalizedBlock)):
                tags.update(k for k in obj.variants if k is not None)
            elif isinstance(obj, (list, tuple)):
                for v in obj:
                    visit(v)
            elif isinstance(obj, dict):
                for v in obj.values():
                    visit(v)
            elif hasattr(obj, "__dataclass_fields__") and not isinstance(
                obj, SourcePos
            ):
                for name in obj.__dataclass_fields__:
                    visit(getattr(obj, name))

        visit(self)
        return sorted(tags)
