"""Structural and referential validation of a parsed SimulationDoc.

Violations become report entries, never exceptions; the report lists every
problem found.  validate() is pure: the same document yields the same report.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..expr import CONSTANTS, FUNCTIONS, ExprAst, free_symbols
from . import model as m

__all__ = ["Issue", "ValidationReport", "validate"]

_SYMBOL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


@dataclass
class Issue:
    code: str
    message: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class _Checker:
    def __init__(self, doc: m.SimulationDoc):
        self.doc = doc
        self.report = ValidationReport()
        # label -> (kind, node) for every label attribute in the document
        self.labels: dict[str, tuple[str, object]] = {}

    def error(self, code: str, message: str, pos: m.SourcePos) -> None:
        self.report.errors.append(Issue(code, message, pos.line, pos.col))

    def warn(self, code: str, message: str, pos: m.SourcePos) -> None:
        self.report.warnings.append(Issue(code, message, pos.line, pos.col))

    # -- label table --------------------------------------------------------

    def declare(self, label: str, kind: str, node) -> None:
        pos = node.pos
        if not _SYMBOL_RE.match(label):
            self.error(
                "bad-label",
                f"label {label!r} is not a valid symbol name",
                pos,
            )
            return
        if label in CONSTANTS:
            self.error(
                "reserved-label",
                f"label {label!r} shadows a reserved constant",
                pos,
            )
            return
        if label in FUNCTIONS:
            self.warn(
                "shadowed-function",
                f"label {label!r} shadows a built-in function name",
                pos,
            )
        if label in self.labels:
            self.error(
                "duplicate-label",
                f"duplicate label {label!r}",
                pos,
            )
            return
        self.labels[label] = (kind, node)

    def collect_labels(self) -> None:
        for section in self.doc.parameters:
            for item in section.items:
                if isinstance(item, m.ScalarParam):
                    self.declare(item.label, "scalar", item)
                elif isinstance(item, m.MatrixParam):
                    self.declare(item.label, "matrix", item)
                elif isinstance(item, m.PointParam):
                    self.declare(item.label, "point", item)
                    self.declare(item.x1.label, "point-coord", item.x1)
                    self.declare(item.x2.label, "point-coord", item.x2)
                elif isinstance(item, m.ParamDatabase):
                    self.declare(item.label, "database", item)
                    for member in item.member_labels:
                        if item.instances:
                            self.declare(
                                member, "db-member", item.instances[0]
                            )
        for item in self.doc.compute:
            if isinstance(item, m.Domain1D):
                self.declare(item.label, "domain1d", item)
            elif isinstance(item, m.Domain2D):
                self.declare(item.label, "domain2d", item)
                self.declare(item.x_axis.label, "domain-axis", item.x_axis)
                self.declare(item.y_axis.label, "domain-axis", item.y_axis)
            elif isinstance(item, m.OdeDef):
                self.declare(item.label, "ode", item)
                for st in item.states:
                    self.declare(st.label, "state", st)
                for out in item.outputs:
                    self.declare(out.label, "output", out)
            elif isinstance(item, m.NonlinearSystemDef):
                self.declare(item.label, "nonlinearsystem", item)
                for u in item.unknowns:
                    self.declare(u.label, "unknown", u)
            elif isinstance(item, m.ImplicitCurveDef):
                self.declare(item.label, "implicitcurve", item)
            elif isinstance(item, m.CurveDef):
                self.declare(item.label, "curve", item)
            elif isinstance(item, m.SurfaceDef):
                self.declare(item.label, "surface", item)
            elif isinstance(item, m.PdeDef):
                self.declare(item.label, "pde", item)
        for poly in self.doc.graphs:
            self.declare(poly.label, "polyline", poly)

    def kind_of(self, label: str) -> str | None:
        entry = self.labels.get(label)
        return entry[0] if entry else None

    # -- symbol scopes -------------------------------------------------------

    def scalar_symbols(self) -> set[str]:
        syms: set[str] = set()
        for kind in ("scalar", "point-coord", "db-member"):
            syms.update(k for k, (knd, _) in self.labels.items() if knd == kind)
        return syms

    def check_symbols(
        self, expr: ExprAst, allowed: set[str], what: str, pos: m.SourcePos
    ) -> None:
        for sym in sorted(free_symbols(expr)):
            if sym in allowed:
                continue
            if self.kind_of(sym) == "matrix":
                self.error(
                    "matrix-in-expression",
                    f"matrix parameter {sym!r} cannot be used in {what}",
                    pos,
                )
            else:
                self.error(
                    "unknown-symbol",
                    f"unknown symbol {sym!r} in {what}",
                    pos,
                )

    # -- per-node checks ------------------------------------------------------

    def check_localized(self, lt: m.LocalizedText | None, what: str) -> None:
        if lt is None:
            return
        if None not in lt.variants:
            self.error(
                "missing-default-variant",
                f"{what} has no default (language-free) variant",
                lt.pos,
            )

    def check_parameters(self) -> None:
        for section in self.doc.parameters:
            self.check_localized(section.title, "section title")
            for item in section.items:
                if isinstance(item, m.ScalarParam):
                    self.check_scalar(item)
                elif isinstance(item, m.MatrixParam):
                    self.check_matrix(item)
                elif isinstance(item, m.PointParam):
                    self.check_point(item)
                elif isinstance(item, m.ParamDatabase):
                    self.check_database(item)

    def check_scalar(self, p: m.ScalarParam) -> None:
        self.check_localized(p.name, f"name of {p.label!r}")
        if p.min is not None and p.max is not None:
            if not p.min < p.max:
                self.error(
                    "bad-bounds",
                    f"{p.label!r}: min {p.min:g} must be < max {p.max:g}",
                    p.pos,
                )
            elif not (p.min <= p.default_value <= p.max):
                self.error(
                    "bad-bounds",
                    f"{p.label!r}: default {p.default_value:g} outside "
                    f"[{p.min:g}, {p.max:g}]",
                    p.pos,
                )
        if p.increment is not None:
            if p.increment <= 0:
                self.error(
                    "bad-bounds",
                    f"{p.label!r}: increment must be positive",
                    p.pos,
                )
            if p.min is None or p.max is None:
                self.warn(
                    "increment-without-bounds",
                    f"{p.label!r}: increment has no effect without min and max",
                    p.pos,
                )

    def check_matrix(self, p: m.MatrixParam) -> None:
        self.check_localized(p.name, f"name of {p.label!r}")
        if not p.default_value or not p.default_value[0]:
            self.error("bad-matrix", f"{p.label!r}: matrix must be at least 1x1", p.pos)

    def check_point(self, p: m.PointParam) -> None:
        if p.x1.label == p.x2.label:
            self.error(
                "duplicate-label",
                f"point {p.label!r}: x1 and x2 share the label {p.x1.label!r}",
                p.pos,
            )
        if p.constraint is not None:
            kind = self.kind_of(p.constraint)
            if kind is None:
                self.error(
                    "unresolved-ref",
                    f"point {p.label!r}: constraint ref {p.constraint!r} "
                    "does not resolve",
                    p.pos,
                )
            elif kind not in ("polyline", "curve"):
                self.error(
                    "bad-ref-kind",
                    f"point {p.label!r}: constraint must name a polyline or "
                    f"curve, not a {kind}",
                    p.pos,
                )

    def check_database(self, db: m.ParamDatabase) -> None:
        self.check_localized(db.name, f"name of {db.label!r}")
        if not db.instances:
            self.error(
                "empty-database",
                f"database {db.label!r} has no instances",
                db.pos,
            )
            return
        members = set(db.member_labels)
        for inst in db.instances:
            got = set(inst.values)
            if got != members:
                missing = ", ".join(sorted(members - got))
                extra = ", ".join(sorted(got - members))
                detail = "; ".join(
                    part
                    for part in (
                        f"missing: {missing}" if missing else "",
                        f"extra: {extra}" if extra else "",
                    )
                    if part
                )
                self.error(
                    "inconsistent-instance",
                    f"database {db.label!r} instance {inst.name!r} does not "
                    f"define exactly the member set ({detail})",
                    inst.pos,
                )

    def domain_ref(self, ref: str, expected: str, what: str, pos: m.SourcePos) -> None:
        kind = self.kind_of(ref)
        if kind is None:
            self.error(
                "unresolved-ref", f"{what}: ref {ref!r} does not resolve", pos
            )
        elif kind != expected:
            self.error(
                "bad-ref-kind",
                f"{what}: ref {ref!r} names a {kind}, expected a {expected}",
                pos,
            )

    def check_domain1d(self, d: m.Domain1D, params: set[str]) -> None:
        if d.n_points < 2:
            self.error(
                "bad-domain",
                f"domain {d.label!r}: needs at least 2 points",
                d.pos,
            )
        self.check_symbols(d.lower, params, f"lower bound of domain {d.label!r}", d.pos)
        self.check_symbols(d.upper, params, f"upper bound of domain {d.label!r}", d.pos)
        lo, hi = _const_value(d.lower), _const_value(d.upper)
        if lo is not None and hi is not None:
            if not lo < hi:
                self.error(
                    "bad-domain",
                    f"domain {d.label!r}: bounds [{lo:g}, {hi:g}] are not increasing",
                    d.pos,
                )
            elif d.spacing == "log" and lo <= 0:
                self.error(
                    "bad-domain",
                    f"domain {d.label!r}: log spacing requires positive bounds",
                    d.pos,
                )

    def check_compute(self) -> None:
        params = self.scalar_symbols()
        scalar_results = {
            k for k, (kind, _) in self.labels.items() if kind == "unknown"
        }
        base = params | scalar_results

        for item in self.doc.compute:
            if isinstance(item, m.Domain1D):
                self.check_domain1d(item, params)
            elif isinstance(item, m.Domain2D):
                self.check_domain1d(item.x_axis, params)
                self.check_domain1d(item.y_axis, params)
            elif isinstance(item, m.OdeDef):
                self.check_ode(item, base)
            elif isinstance(item, m.NonlinearSystemDef):
                self.check_nonlinear(item, params, scalar_results)
            elif isinstance(item, m.ImplicitCurveDef):
                self.check_field_item(
                    item.domain, [item.f], [item.pos], base, f"implicit curve {item.label!r}"
                )
            elif isinstance(item, m.CurveDef):
                self.domain_ref(
                    item.domain, "domain1d", f"curve {item.label!r}", item.pos
                )
                dom = self.labels.get(item.domain)
                allowed = set(base)
                if dom and dom[0] == "domain1d":
                    allowed.add(dom[1].label)  # type: ignore[union-attr]
                for e in item.exprs:
                    self.check_symbols(e, allowed, f"curve {item.label!r}", item.pos)
            elif isinstance(item, m.SurfaceDef):
                self.check_field_item(
                    item.domain,
                    item.exprs,
                    [item.pos] * len(item.exprs),
                    base,
                    f"surface {item.label!r}",
                )
            elif isinstance(item, m.PdeDef):
                self.check_pde(item, base)

    def check_ode(self, ode: m.OdeDef, base: set[str]) -> None:
        self.domain_ref(ode.time_domain, "domain1d", f"ode {ode.label!r}", ode.pos)
        time_syms: set[str] = set()
        dom = self.labels.get(ode.time_domain)
        if dom and dom[0] == "domain1d":
            time_syms.add(dom[1].label)  # type: ignore[union-attr]
        states = {st.label for st in ode.states}
        for st in ode.states:
            self.check_localized(st.name, f"name of state {st.label!r}")
            self.check_symbols(
                st.derivative,
                base | states | time_syms,
                f"derivative of state {st.label!r}",
                st.pos,
            )
            self.check_symbols(
                st.initial, base, f"initial condition of state {st.label!r}", st.pos
            )
        for out in ode.outputs:
            self.check_localized(out.name, f"name of output {out.label!r}")
            self.check_symbols(
                out.value,
                base | states | time_syms,
                f"output {out.label!r}",
                out.pos,
            )

    def check_nonlinear(
        self, sys: m.NonlinearSystemDef, params: set[str], scalar_results: set[str]
    ) -> None:
        if len(sys.residuals) != len(sys.unknowns):
            self.error(
                "arity-mismatch",
                f"system {sys.label!r}: {len(sys.residuals)} residuals for "
                f"{len(sys.unknowns)} unknowns",
                sys.pos,
            )
        own = {u.label for u in sys.unknowns}
        for u in sys.unknowns:
            self.check_symbols(
                u.guess,
                params | (scalar_results - own),
                f"initial guess of {u.label!r}",
                u.pos,
            )
        for r in sys.residuals:
            self.check_symbols(
                r.expr,
                params | scalar_results,
                f"residual of system {sys.label!r}",
                r.pos,
            )

    def check_field_item(
        self,
        domain_ref: str,
        exprs: list[ExprAst],
        positions: list[m.SourcePos],
        base: set[str],
        what: str,
    ) -> None:
        self.domain_ref(domain_ref, "domain2d", what, positions[0])
        allowed = set(base)
        dom = self.labels.get(domain_ref)
        if dom and dom[0] == "domain2d":
            d2: m.Domain2D = dom[1]  # type: ignore[assignment]
            allowed |= {d2.x_axis.label, d2.y_axis.label}
        for e, pos in zip(exprs, positions):
            self.check_symbols(e, allowed, what, pos)

    def check_pde(self, pde: m.PdeDef, base: set[str]) -> None:
        exprs = [pde.p11, pde.p12, pde.p21, pde.p22, pde.c, pde.f]
        self.check_field_item(
            pde.domain, exprs, [pde.pos] * len(exprs), base, f"pde {pde.label!r}"
        )
        if pde.p21_src.strip() != pde.p12_src.strip():
            self.error(
                "asymmetric-diffusion",
                f"pde {pde.label!r}: p21 ({pde.p21_src!r}) must be written "
                f"identically to p12 ({pde.p12_src!r})",
                pde.pos,
            )
        for edge in ("left", "right", "bottom", "top"):
            if edge not in pde.boundary:
                self.error(
                    "missing-boundary",
                    f"pde {pde.label!r}: no boundary condition for edge {edge!r}",
                    pde.pos,
                )
        allowed = set(base)
        dom = self.labels.get(pde.domain)
        if dom and dom[0] == "domain2d":
            d2: m.Domain2D = dom[1]  # type: ignore[assignment]
            allowed |= {d2.x_axis.label, d2.y_axis.label}
        for edge, cond in pde.boundary.items():
            self.check_symbols(
                cond.value,
                allowed,
                f"boundary value on edge {edge!r} of pde {pde.label!r}",
                cond.pos,
            )

    def check_graphs(self) -> None:
        params = self.scalar_symbols()
        for poly in self.doc.graphs:
            if len(poly.vertices) < 2:
                self.error(
                    "bad-polyline",
                    f"polyline {poly.label!r} needs at least 2 vertices",
                    poly.pos,
                )
            for v in poly.vertices:
                self.check_symbols(
                    v.x1, params, f"vertex of polyline {poly.label!r}", v.pos
                )
                self.check_symbols(
                    v.x2, params, f"vertex of polyline {poly.label!r}", v.pos
                )

    _DRAWABLE_KINDS = {
        "curve2d": ("state", "output", "curve", "implicitcurve"),
        "surface": ("surface", "pde"),
        "points": ("point",),
    }

    def check_display(self) -> None:
        for window in self.doc.display:
            self.check_localized(window.title, "window title")
            for axis in window.axes:
                for ref in axis.items:
                    kind = self.kind_of(ref.ref)
                    if kind is None:
                        self.error(
                            "unresolved-ref",
                            f"display ref {ref.ref!r} does not resolve",
                            ref.pos,
                        )
                        continue
                    if kind not in self._DRAWABLE_KINDS[ref.kind]:
                        expected = " or ".join(self._DRAWABLE_KINDS[ref.kind])
                        self.error(
                            "bad-ref-kind",
                            f"display ref {ref.ref!r} names a {kind}, "
                            f"expected a {expected}",
                            ref.pos,
                        )

    def check_header_and_notes(self) -> None:
        self.check_localized(self.doc.header.title, "document title")
        for block in self.doc.notes:
            if None not in block.variants:
                self.error(
                    "missing-default-variant",
                    "notes have no default (language-free) variant",
                    block.pos,
                )

    def run(self) -> ValidationReport:
        self.collect_labels()
        self.check_header_and_notes()
        self.check_parameters()
        self.check_compute()
        self.check_graphs()
        self.check_display()
        return self.report


def _const_value(expr: ExprAst) -> float | None:
    """Value of a parameter-free expression, else None."""
    from ..expr import EvalError, eval_expr

    if free_symbols(expr):
        return None
    try:
        return eval_expr(expr, {})
    except EvalError:  # pragma: no cover - constants always evaluate
        return None


def validate(doc: m.SimulationDoc) -> ValidationReport:
    """Check every model invariant and cross-reference; report all violations."""
    return _Checker(doc).run()
