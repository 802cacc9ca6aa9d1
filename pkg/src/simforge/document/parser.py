"""Parse simulation XML into the typed AST.

Strict by default: unknown elements and attributes are hard errors so typos
surface immediately; lax mode downgrades them to warnings.  All errors are
collected (not just the first) and carry source positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..expr import ExprAst, ExprSyntaxError, parse_expr
from . import model as m
from .xmltree import XmlNode, XmlSyntaxError, read_xml

__all__ = ["ParseError", "DocumentParseError", "parse_document"]


@dataclass
class ParseError:
    code: str
    message: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class DocumentParseError(ValueError):
    def __init__(self, errors: list[ParseError]):
        super().__init__(
            "; ".join(str(e) for e in errors[:5])
            + (f" (+{len(errors) - 5} more)" if len(errors) > 5 else "")
        )
        self.errors = errors


def parse_document(
    data: str | bytes, *, lax: bool = False, doc_id: str = ""
) -> m.SimulationDoc:
    """Build a SimulationDoc from XML text.

    Raises DocumentParseError carrying every problem found.  In lax mode,
    unknown elements/attributes become warnings on doc.parse_warnings.
    """
    try:
        root = read_xml(data)
    except XmlSyntaxError as exc:
        raise DocumentParseError(
            [ParseError("xml-syntax", exc.message, exc.line, exc.col)]
        ) from None
    builder = _Builder(lax=lax)
    doc = builder.simulation(root)
    if builder.errors:
        raise DocumentParseError(builder.errors)
    doc.doc_id = doc_id
    doc.parse_warnings = builder.warnings
    return doc


def _pos(node: XmlNode) -> m.SourcePos:
    return m.SourcePos(node.line, node.col)


class _Builder:
    def __init__(self, lax: bool):
        self.lax = lax
        self.errors: list[ParseError] = []
        self.warnings: list[ParseError] = []

    # -- error helpers ----------------------------------------------------

    def err(self, code: str, message: str, node: XmlNode) -> None:
        self.errors.append(ParseError(code, message, node.line, node.col))

    def unknown(self, what: str, node: XmlNode) -> None:
        rec = ParseError("unknown-element", what, node.line, node.col)
        if self.lax:
            self.warnings.append(rec)
        else:
            self.errors.append(rec)

    def check_attrs(
        self, node: XmlNode, allowed: set[str], required: set[str] = frozenset()
    ) -> bool:
        ok = True
        for name in node.attrs:
            if name not in allowed:
                rec = ParseError(
                    "unknown-attribute",
                    f"unknown attribute {name!r} on <{node.tag}>",
                    node.line,
                    node.col,
                )
                if self.lax:
                    self.warnings.append(rec)
                else:
                    self.errors.append(rec)
                    ok = False
        for name in required:
            if name not in node.attrs:
                self.err(
                    "missing-attribute",
                    f"<{node.tag}> requires attribute {name!r}",
                    node,
                )
                ok = False
        return ok

    def children(self, node: XmlNode, allowed: set[str]) -> list[XmlNode]:
        """Children whose tags are allowed; unknown tags reported."""
        out = []
        for child in node.children:
            if child.tag in allowed:
                out.append(child)
            else:
                self.unknown(f"unknown element <{child.tag}> in <{node.tag}>", child)
        if node.text.strip():
            self.err(
                "unexpected-text",
                f"unexpected text inside <{node.tag}>",
                node,
            )
        return out

    def one(self, node: XmlNode, kids: list[XmlNode], tag: str) -> Optional[XmlNode]:
        found = [k for k in kids if k.tag == tag]
        if not found:
            self.err("missing-child", f"<{node.tag}> requires a <{tag}> child", node)
            return None
        if len(found) > 1:
            self.err(
                "duplicate-child", f"<{node.tag}> allows only one <{tag}>", found[1]
            )
        return found[0]

    def opt(self, kids: list[XmlNode], tag: str) -> Optional[XmlNode]:
        found = [k for k in kids if k.tag == tag]
        if len(found) > 1:
            self.err("duplicate-child", f"only one <{tag}> allowed here", found[1])
        return found[0] if found else None

    def text_of(self, node: XmlNode) -> str:
        for child in node.children:
            self.unknown(
                f"unknown element <{child.tag}> in <{node.tag}>", child
            )
        return node.text.strip()

    def number(self, node: XmlNode, text: Optional[str] = None) -> float:
        raw = self.text_of(node) if text is None else text
        try:
            return float(raw)
        except ValueError:
            self.err("bad-number", f"not a number: {raw!r}", node)
            return 0.0

    def integer(self, node: XmlNode, raw: str, minimum: int = 1) -> int:
        try:
            value = int(raw)
        except ValueError:
            self.err("bad-number", f"not an integer: {raw!r}", node)
            return minimum
        if value < minimum:
            self.err("bad-number", f"expected integer >= {minimum}, got {value}", node)
            return minimum
        return value

    def expr(self, node: XmlNode, text: Optional[str] = None) -> ExprAst:
        raw = self.text_of(node) if text is None else text
        try:
            return parse_expr(raw)
        except ExprSyntaxError as exc:
            self.err("bad-expression", f"in {raw!r}: {exc}", node)
            return parse_expr("0")

    def enum_attr(
        self, node: XmlNode, name: str, choices: tuple[str, ...], default: str
    ) -> str:
        raw = node.attrs.get(name, default)
        if raw not in choices:
            self.err(
                "bad-attribute",
                f"{name}={raw!r} on <{node.tag}>: expected one of {', '.join(choices)}",
                node,
            )
            return default
        return raw

    def localized(
        self, node: XmlNode, variant_nodes: list[XmlNode], what: str
    ) -> m.LocalizedText:
        variants: dict[Optional[str], str] = {}
        first = variant_nodes[0] if variant_nodes else node
        for vn in variant_nodes:
            self.check_attrs(vn, {"lang"})
            lang = vn.attrs.get("lang")
            if lang in variants:
                self.err(
                    "duplicate-variant",
                    f"duplicate {what} for language {lang or 'default'!r}",
                    vn,
                )
            variants[lang] = self.text_of(vn)
        return m.LocalizedText(variants, _pos(first))

    # -- document structure ------------------------------------------------

    def simulation(self, root: XmlNode) -> m.SimulationDoc:
        if root.tag != "simulation":
            self.err(
                "bad-root", f"expected <simulation> root, got <{root.tag}>", root
            )
            return _empty_doc(root)
        self.check_attrs(root, set())
        kids = self.children(
            root, {"header", "notes", "parameters", "compute", "graphs", "display"}
        )

        header_node = self.one(root, kids, "header")
        header = self.header(header_node) if header_node else _empty_header(root)

        notes = self.notes([k for k in kids if k.tag == "notes"])

        sections: list[m.ParameterSection] = []
        pnode = self.opt(kids, "parameters")
        if pnode is not None:
            self.check_attrs(pnode, set())
            for sec in self.children(pnode, {"section"}):
                sections.append(self.section(sec))

        compute: list[m.ComputeItem] = []
        cnode = self.opt(kids, "compute")
        if cnode is not None:
            self.check_attrs(cnode, set())
            for item in self.children(
                cnode,
                {
                    "defdomain1d",
                    "defdomain2d",
                    "ode",
                    "nonlinearsystem",
                    "implicitcurve",
                    "curve",
                    "surface",
                    "pde",
                },
            ):
                built = self.compute_item(item)
                if built is not None:
                    compute.append(built)

        graphs: list[m.PolylineDef] = []
        gnode = self.opt(kids, "graphs")
        if gnode is not None:
            self.check_attrs(gnode, set())
            for poly in self.children(gnode, {"polyline"}):
                graphs.append(self.polyline(poly))

        display: list[m.WindowSpec] = []
        dnode = self.opt(kids, "display")
        if dnode is not None:
            self.check_attrs(dnode, set())
            windows = self.children(dnode, {"window"})
            if not windows:
                self.err(
                    "missing-child", "<display> requires at least one <window>", dnode
                )
            for w in windows:
                display.append(self.window(w))

        return m.SimulationDoc(header, notes, sections, compute, graphs, display)

    def header(self, node: XmlNode) -> m.Header:
        self.check_attrs(node, set())
        kids = self.children(node, {"title", "author", "date", "keywords"})
        titles = [k for k in kids if k.tag == "title"]
        title = self.localized(node, titles, "title") if titles else None
        author_node = self.opt(kids, "author")
        date_node = self.opt(kids, "date")
        keywords: list[str] = []
        kw = self.opt(kids, "keywords")
        if kw is not None:
            self.check_attrs(kw, set())
            for k in self.children(kw, {"keyword"}):
                self.check_attrs(k, set())
                keywords.append(self.text_of(k))
        return m.Header(
            author=self.text_of(author_node) if author_node else "",
            date=self.text_of(date_node) if date_node else "",
            keywords=keywords,
            pos=_pos(node),
            title=title,
        )

    def notes(self, nodes: list[XmlNode]) -> list[m.LocalizedBlock]:
        if not nodes:
            return []
        variants: dict[Optional[str], list[str]] = {}
        for node in nodes:
            self.check_attrs(node, {"lang"})
            lang = node.attrs.get("lang")
            if lang in variants:
                self.err(
                    "duplicate-variant",
                    f"duplicate <notes> for language {lang or 'default'!r}",
                    node,
                )
            paras = [k for k in node.children if k.tag == "para"]
            for child in node.children:
                if child.tag != "para":
                    self.unknown(
                        f"unknown element <{child.tag}> in <notes>", child
                    )
            if paras:
                variants[lang] = [self.text_of(p) for p in paras]
                if node.text.strip():
                    self.err(
                        "unexpected-text",
                        "mixed text and <para> inside <notes>",
                        node,
                    )
            else:
                variants[lang] = [node.text.strip()] if node.text.strip() else []
        return [m.LocalizedBlock(variants, _pos(nodes[0]))]

    def section(self, node: XmlNode) -> m.ParameterSection:
        self.check_attrs(node, set())
        kids = self.children(
            node, {"title", "scalar", "matrix", "point", "database"}
        )
        titles = [k for k in kids if k.tag == "title"]
        if not titles:
            self.err("missing-child", "<section> requires a <title>", node)
        title = self.localized(node, titles, "section title")
        items: list[m.ParameterItem] = []
        for k in kids:
            if k.tag == "scalar":
                items.append(self.scalar(k))
            elif k.tag == "matrix":
                items.append(self.matrix(k))
            elif k.tag == "point":
                items.append(self.point(k))
            elif k.tag == "database":
                items.append(self.database(k))
        return m.ParameterSection(title, items, _pos(node))

    def scalar(self, node: XmlNode) -> m.ScalarParam:
        self.check_attrs(
            node, {"label", "unit", "min", "max", "increment", "visibility"}, {"label"}
        )
        kids = self.children(node, {"name", "value"})
        names = [k for k in kids if k.tag == "name"]
        if not names:
            self.err("missing-child", "<scalar> requires a <name>", node)
        value_node = self.one(node, kids, "value")

        def opt_num(attr: str) -> Optional[float]:
            if attr not in node.attrs:
                return None
            return self.number(node, node.attrs[attr])

        return m.ScalarParam(
            label=node.attrs.get("label", ""),
            unit=node.attrs.get("unit", ""),
            name=self.localized(node, names, "name"),
            default_value=self.number(value_node) if value_node else 0.0,
            pos=_pos(node),
            min=opt_num("min"),
            max=opt_num("max"),
            increment=opt_num("increment"),
            visibility=self.enum_attr(
                node, "visibility", ("editable", "readonly", "hidden"), "editable"
            ),
        )

    def matrix(self, node: XmlNode) -> m.MatrixParam:
        self.check_attrs(node, {"label", "visibility"}, {"label"})
        kids = self.children(node, {"name", "value"})
        names = [k for k in kids if k.tag == "name"]
        if not names:
            self.err("missing-child", "<matrix> requires a <name>", node)
        value_node = self.one(node, kids, "value")
        rows: list[list[float]] = [[0.0]]
        if value_node is not None:
            rows = self.matrix_text(value_node, self.text_of(value_node))
        return m.MatrixParam(
            label=node.attrs.get("label", ""),
            name=self.localized(node, names, "name"),
            default_value=rows,
            pos=_pos(node),
            visibility=self.enum_attr(
                node, "visibility", ("editable", "readonly", "hidden"), "editable"
            ),
        )

    def matrix_text(self, node: XmlNode, raw: str) -> list[list[float]]:
        """Parse "1 2; 3 4" (optionally bracketed) into rectangular rows."""
        text = raw.strip()
        if text.startswith("[") and text.endswith("]"):
            text = text[1:-1]
        rows: list[list[float]] = []
        for row_text in text.split(";"):
            entries = row_text.replace(",", " ").split()
            if not entries:
                continue
            row = []
            for entry in entries:
                try:
                    row.append(float(entry))
                except ValueError:
                    self.err("bad-number", f"not a number: {entry!r}", node)
                    row.append(0.0)
            rows.append(row)
        if not rows:
            self.err("bad-matrix", "empty matrix value", node)
            return [[0.0]]
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            self.err("bad-matrix", "matrix rows have unequal lengths", node)
            rows = [r + [0.0] * (width - len(r)) for r in (r[:width] for r in rows)]
        return rows

    def point(self, node: XmlNode) -> m.PointParam:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"x1", "x2", "constraints"})
        x1 = self.point_coord(node, self.one(node, kids, "x1"))
        x2 = self.point_coord(node, self.one(node, kids, "x2"))
        constraint = None
        cnode = self.opt(kids, "constraints")
        if cnode is not None:
            self.check_attrs(cnode, set())
            curve = self.one(cnode, self.children(cnode, {"curve"}), "curve")
            if curve is not None:
                self.check_attrs(curve, {"ref"}, {"ref"})
                self.children(curve, set())
                constraint = curve.attrs.get("ref")
        return m.PointParam(
            label=node.attrs.get("label", ""),
            x1=x1,
            x2=x2,
            pos=_pos(node),
            constraint=constraint,
        )

    def point_coord(self, parent: XmlNode, node: Optional[XmlNode]) -> m.PointCoord:
        if node is None:
            return m.PointCoord("", 0.0, _pos(parent))
        self.check_attrs(node, {"label"}, {"label"})
        value_node = self.one(node, self.children(node, {"value"}), "value")
        return m.PointCoord(
            label=node.attrs.get("label", ""),
            value=self.number(value_node) if value_node else 0.0,
            pos=_pos(node),
        )

    def database(self, node: XmlNode) -> m.ParamDatabase:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"name", "instance"})
        names = [k for k in kids if k.tag == "name"]
        if not names:
            self.err("missing-child", "<database> requires a <name>", node)
        instances: list[m.DbInstance] = []
        for inode in (k for k in kids if k.tag == "instance"):
            self.check_attrs(inode, {"name"}, {"name"})
            values: dict[str, float] = {}
            for item in self.children(inode, {"item"}):
                self.check_attrs(item, {"label"}, {"label"})
                label = item.attrs.get("label", "")
                if label in values:
                    self.err(
                        "duplicate-child", f"duplicate item {label!r}", item
                    )
                values[label] = self.number(item)
            instances.append(
                m.DbInstance(inode.attrs.get("name", ""), values, _pos(inode))
            )
        if not instances:
            self.err(
                "missing-child", "<database> requires at least one <instance>", node
            )
        member_labels = list(instances[0].values.keys()) if instances else []
        return m.ParamDatabase(
            label=node.attrs.get("label", ""),
            name=self.localized(node, names, "name"),
            member_labels=member_labels,
            instances=instances,
            pos=_pos(node),
        )

    # -- compute items ------------------------------------------------------

    def compute_item(self, node: XmlNode) -> Optional[m.ComputeItem]:
        handler = {
            "defdomain1d": self.domain1d,
            "defdomain2d": self.domain2d,
            "ode": self.ode,
            "nonlinearsystem": self.nonlinear,
            "implicitcurve": self.implicit,
            "curve": self.curve,
            "surface": self.surface,
            "pde": self.pde,
        }[node.tag]
        return handler(node)

    def domain1d(self, node: XmlNode, tag: str = "defdomain1d") -> m.Domain1D:
        self.check_attrs(node, {"label", "unit", "points", "scale"}, {"label"})
        kids = self.children(node, {"name", "interval"})
        names = [k for k in kids if k.tag == "name"]
        interval = self.one(node, kids, "interval")
        lower = upper = parse_expr("0")
        if interval is not None:
            self.check_attrs(interval, set())
            ikids = self.children(interval, {"initialvalue", "finalvalue"})
            lo_node = self.one(interval, ikids, "initialvalue")
            hi_node = self.one(interval, ikids, "finalvalue")
            if lo_node is not None:
                lower = self.expr(lo_node)
            if hi_node is not None:
                upper = self.expr(hi_node)
        n_points = m.DEFAULT_N_POINTS
        if "points" in node.attrs:
            n_points = self.integer(node, node.attrs["points"])
        return m.Domain1D(
            label=node.attrs.get("label", ""),
            unit=node.attrs.get("unit", ""),
            lower=lower,
            upper=upper,
            pos=_pos(node),
            name=self.localized(node, names, "name") if names else None,
            n_points=n_points,
            spacing=self.enum_attr(node, "scale", ("linear", "log"), "linear"),
        )

    def domain2d(self, node: XmlNode) -> m.Domain2D:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"xdomain", "ydomain"})
        xnode = self.one(node, kids, "xdomain")
        ynode = self.one(node, kids, "ydomain")
        fallback = XmlNode("xdomain", {"label": ""}, node.line, node.col)
        return m.Domain2D(
            label=node.attrs.get("label", ""),
            x_axis=self.domain1d(xnode if xnode is not None else fallback),
            y_axis=self.domain1d(ynode if ynode is not None else fallback),
            pos=_pos(node),
        )

    def ref_of(self, node: XmlNode, kids: list[XmlNode], tag: str) -> str:
        ref_node = self.one(node, kids, tag)
        if ref_node is None:
            return ""
        self.check_attrs(ref_node, {"ref"}, {"ref"})
        self.children(ref_node, set())
        return ref_node.attrs.get("ref", "")

    def ode(self, node: XmlNode) -> m.OdeDef:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"refdomain1d", "states", "outputs"})
        time_domain = self.ref_of(node, kids, "refdomain1d")

        states: list[m.OdeState] = []
        snode = self.one(node, kids, "states")
        if snode is not None:
            self.check_attrs(snode, set())
            state_nodes = self.children(snode, {"state"})
            if not state_nodes:
                self.err(
                    "missing-child", "<states> requires at least one <state>", snode
                )
            for st in state_nodes:
                self.check_attrs(st, {"label", "unit"}, {"label"})
                skids = self.children(st, {"name", "derivative", "initialcond"})
                names = [k for k in skids if k.tag == "name"]
                if not names:
                    self.err("missing-child", "<state> requires a <name>", st)
                deriv = self.one(st, skids, "derivative")
                init = self.one(st, skids, "initialcond")
                states.append(
                    m.OdeState(
                        label=st.attrs.get("label", ""),
                        unit=st.attrs.get("unit", ""),
                        name=self.localized(st, names, "name"),
                        derivative=self.expr(deriv) if deriv else parse_expr("0"),
                        initial=self.expr(init) if init else parse_expr("0"),
                        pos=_pos(st),
                    )
                )

        outputs: list[m.OdeOutput] = []
        onode = self.opt(kids, "outputs")
        if onode is not None:
            self.check_attrs(onode, set())
            for out in self.children(onode, {"output"}):
                self.check_attrs(out, {"label", "unit"}, {"label"})
                okids = self.children(out, {"name", "value"})
                names = [k for k in okids if k.tag == "name"]
                if not names:
                    self.err("missing-child", "<output> requires a <name>", out)
                value = self.one(out, okids, "value")
                outputs.append(
                    m.OdeOutput(
                        label=out.attrs.get("label", ""),
                        unit=out.attrs.get("unit", ""),
                        name=self.localized(out, names, "name"),
                        value=self.expr(value) if value else parse_expr("0"),
                        pos=_pos(out),
                    )
                )

        return m.OdeDef(
            label=node.attrs.get("label", ""),
            time_domain=time_domain,
            states=states,
            outputs=outputs,
            pos=_pos(node),
        )

    def nonlinear(self, node: XmlNode) -> m.NonlinearSystemDef:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"unknown", "residual"})
        unknowns: list[m.UnknownVar] = []
        residuals: list[m.Residual] = []
        for k in kids:
            if k.tag == "unknown":
                self.check_attrs(k, {"label"}, {"label"})
                guess_node = self.one(k, self.children(k, {"initialguess"}), "initialguess")
                unknowns.append(
                    m.UnknownVar(
                        label=k.attrs.get("label", ""),
                        guess=self.expr(guess_node) if guess_node else parse_expr("0"),
                        pos=_pos(k),
                    )
                )
            else:
                self.check_attrs(k, set())
                residuals.append(m.Residual(self.expr(k), _pos(k)))
        if not unknowns:
            self.err(
                "missing-child",
                "<nonlinearsystem> requires at least one <unknown>",
                node,
            )
        if not residuals:
            self.err(
                "missing-child",
                "<nonlinearsystem> requires at least one <residual>",
                node,
            )
        return m.NonlinearSystemDef(
            label=node.attrs.get("label", ""),
            unknowns=unknowns,
            residuals=residuals,
            pos=_pos(node),
        )

    def implicit(self, node: XmlNode) -> m.ImplicitCurveDef:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"refdomain2d", "equation"})
        domain = self.ref_of(node, kids, "refdomain2d")
        eq = self.one(node, kids, "equation")
        return m.ImplicitCurveDef(
            label=node.attrs.get("label", ""),
            f=self.expr(eq) if eq else parse_expr("0"),
            domain=domain,
            pos=_pos(node),
        )

    def curve(self, node: XmlNode) -> m.CurveDef:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"name", "refdomain1d", "x", "y"})
        names = [k for k in kids if k.tag == "name"]
        domain = self.ref_of(node, kids, "refdomain1d")
        x_node = self.opt(kids, "x")
        y_node = self.one(node, kids, "y")
        y_expr = self.expr(y_node) if y_node else parse_expr("0")
        if x_node is not None:
            kind, exprs = "parametric", [self.expr(x_node), y_expr]
        else:
            kind, exprs = "nonparametric", [y_expr]
        return m.CurveDef(
            label=node.attrs.get("label", ""),
            kind=kind,
            exprs=exprs,
            domain=domain,
            pos=_pos(node),
            name=self.localized(node, names, "name") if names else None,
        )

    def surface(self, node: XmlNode) -> m.SurfaceDef:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(node, {"name", "refdomain2d", "x", "y", "z"})
        names = [k for k in kids if k.tag == "name"]
        domain = self.ref_of(node, kids, "refdomain2d")
        x_node = self.opt(kids, "x")
        y_node = self.opt(kids, "y")
        z_node = self.one(node, kids, "z")
        z_expr = self.expr(z_node) if z_node else parse_expr("0")
        if x_node is not None or y_node is not None:
            if x_node is None or y_node is None:
                self.err(
                    "missing-child",
                    "parametric <surface> requires both <x> and <y>",
                    node,
                )
            kind = "parametric"
            exprs = [
                self.expr(x_node) if x_node else parse_expr("0"),
                self.expr(y_node) if y_node else parse_expr("0"),
                z_expr,
            ]
        else:
            kind, exprs = "nonparametric", [z_expr]
        return m.SurfaceDef(
            label=node.attrs.get("label", ""),
            kind=kind,
            exprs=exprs,
            domain=domain,
            pos=_pos(node),
            name=self.localized(node, names, "name") if names else None,
        )

    def pde(self, node: XmlNode) -> m.PdeDef:
        self.check_attrs(node, {"label"}, {"label"})
        kids = self.children(
            node, {"refdomain2d", "diffusion", "absorption", "source", "boundary"}
        )
        domain = self.ref_of(node, kids, "refdomain2d")

        p_src = {"p11": "1", "p12": "0", "p21": None, "p22": "1"}
        dnode = self.opt(kids, "diffusion")
        if dnode is not None:
            self.check_attrs(dnode, set())
            for k in self.children(dnode, {"p11", "p12", "p21", "p22"}):
                p_src[k.tag] = self.text_of(k)
        p12_src = p_src["p12"]
        p21_src = p_src["p21"] if p_src["p21"] is not None else p12_src

        def coeff(src: str, where: XmlNode) -> ExprAst:
            return self.expr(where, src)

        anode = self.opt(kids, "absorption")
        snode = self.opt(kids, "source")
        boundary: dict[str, m.EdgeCondition] = {}
        for b in (k for k in kids if k.tag == "boundary"):
            self.check_attrs(b, {"edge", "type"}, {"edge", "type"})
            edge = self.enum_attr(b, "edge", ("left", "right", "bottom", "top"), "left")
            kind = self.enum_attr(b, "type", ("dirichlet", "neumann"), "dirichlet")
            value_node = self.one(b, self.children(b, {"value"}), "value")
            cond = m.EdgeCondition(
                kind=kind,
                value=self.expr(value_node) if value_node else parse_expr("0"),
                pos=_pos(b),
            )
            if edge in boundary:
                self.err(
                    "duplicate-child", f"duplicate boundary for edge {edge!r}", b
                )
            boundary[edge] = cond

        return m.PdeDef(
            label=node.attrs.get("label", ""),
            domain=domain,
            p11=coeff(p_src["p11"], node),
            p12=coeff(p12_src, node),
            p21=coeff(p21_src, node),
            p22=coeff(p_src["p22"], node),
            c=self.expr(anode) if anode is not None else parse_expr("0"),
            f=self.expr(snode) if snode is not None else parse_expr("0"),
            boundary=boundary,
            pos=_pos(node),
            p12_src=p12_src,
            p21_src=p21_src,
        )

    # -- graphs / display ---------------------------------------------------

    def polyline(self, node: XmlNode) -> m.PolylineDef:
        self.check_attrs(node, {"label"}, {"label"})
        vertices: list[m.Vertex] = []
        for v in self.children(node, {"vertex"}):
            self.check_attrs(v, {"x1", "x2"}, {"x1", "x2"})
            self.children(v, set())
            vertices.append(
                m.Vertex(
                    x1=self.expr(v, v.attrs.get("x1", "0")),
                    x2=self.expr(v, v.attrs.get("x2", "0")),
                    pos=_pos(v),
                )
            )
        if len(vertices) < 2:
            self.err(
                "missing-child", "<polyline> requires at least 2 <vertex>", node
            )
        return m.PolylineDef(
            label=node.attrs.get("label", ""), vertices=vertices, pos=_pos(node)
        )

    def window(self, node: XmlNode) -> m.WindowSpec:
        self.check_attrs(node, {"rows", "cols"})
        kids = self.children(node, {"title", "axis2d", "axis3d"})
        titles = [k for k in kids if k.tag == "title"]
        axes: list[m.AxisSpec] = []
        for k in kids:
            if k.tag in ("axis2d", "axis3d"):
                axes.append(self.axis(k, 2 if k.tag == "axis2d" else 3))
        rows = cols = None
        if "rows" in node.attrs:
            rows = self.integer(node, node.attrs["rows"])
        if "cols" in node.attrs:
            cols = self.integer(node, node.attrs["cols"])
        return m.WindowSpec(
            title=self.localized(node, titles, "window title") if titles else None,
            axes=axes,
            pos=_pos(node),
            rows=rows,
            cols=cols,
        )

    def axis(self, node: XmlNode, dims: int) -> m.AxisSpec:
        self.check_attrs(node, set())
        items: list[m.DrawRef] = []
        kind_by_tag = {
            "drawcurve2d": "curve2d",
            "drawsurface": "surface",
            "drawpoints": "points",
        }
        for k in self.children(node, set(kind_by_tag)):
            self.check_attrs(k, {"ref"}, {"ref"})
            self.children(k, set())
            items.append(
                m.DrawRef(kind=kind_by_tag[k.tag], ref=k.attrs.get("ref", ""), pos=_pos(k))
            )
        return m.AxisSpec(dims=dims, items=items, pos=_pos(node))


def _empty_header(node: XmlNode) -> m.Header:
    return m.Header("", "", [], m.SourcePos(node.line, node.col))


def _empty_doc(node: XmlNode) -> m.SimulationDoc:
    return m.SimulationDoc(_empty_header(node), [], [], [], [], [])
