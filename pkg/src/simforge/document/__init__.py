"""Simulation document model: parsing, validation, localization."""

from .localize import LocalizedView, resolve_language
from .model import (
    AxisSpec,
    CurveDef,
    DbInstance,
    Domain1D,
    Domain2D,
    DrawRef,
    EdgeCondition,
    Header,
    ImplicitCurveDef,
    LocalizedBlock,
    LocalizedText,
    MatrixParam,
    NonlinearSystemDef,
    OdeDef,
    OdeOutput,
    OdeState,
    ParamDatabase,
    ParameterSection,
    PdeDef,
    PointCoord,
    PointParam,
    PolylineDef,
    Residual,
    ScalarParam,
    SimulationDoc,
    SourcePos,
    SurfaceDef,
    UnknownVar,
    Vertex,
    WindowSpec,
)
from .parser import DocumentParseError, ParseError, parse_document
from .serialize import doc_to_xml
from .validate import Issue, ValidationReport, validate

__all__ = [
    "AxisSpec",
    "CurveDef",
    "DbInstance",
    "Domain1D",
    "Domain2D",
    "DocumentParseError",
    "DrawRef",
    "EdgeCondition",
    "Header",
    "ImplicitCurveDef",
    "Issue",
    "LocalizedBlock",
    "LocalizedText",
    "LocalizedView",
    "MatrixParam",
    "NonlinearSystemDef",
    "OdeDef",
    "OdeOutput",
    "OdeState",
    "ParamDatabase",
    "ParameterSection",
    "ParseError",
    "PdeDef",
    "PointCoord",
    "PointParam",
    "PolylineDef",
    "Residual",
    "ScalarParam",
    "SimulationDoc",
    "SourcePos",
    "SurfaceDef",
    "UnknownVar",
    "ValidationReport",
    "Vertex",
    "WindowSpec",
    "doc_to_xml",
    "parse_document",
    "resolve_language",
    "validate",
]
