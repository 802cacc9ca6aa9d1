"""Arithmetic expression parsing and evaluation.

Equation bodies, initial conditions, domain bounds and vertex coordinates
are all plain text expressions over named symbols.  This module parses them
into an immutable AST at compile time (so unbound symbols and arity mistakes
surface before anything runs), prints them back canonically, and evaluates
them over scalars or numpy arrays.

Grammar (EBNF):

    expr    = term { ("+" | "-") term } ;
    term    = factor { ("*" | "/") factor } ;
    factor  = "-" factor | power ;
    power   = atom [ "^" factor ] ;            (* right-associative *)
    atom    = NUMBER | SYMBOL | SYMBOL "(" expr { "," expr } ")"
            | "(" expr ")" ;

Precedence, tightest first: ^  unary-  * /  + -.  `pi` and `e` are reserved
constants, not free symbols.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

import numpy as np

__all__ = [
    "ExprAst",
    "Num",
    "Sym",
    "Neg",
    "BinOp",
    "Call",
    "ExprSyntaxError",
    "EvalError",
    "CONSTANTS",
    "FUNCTIONS",
    "parse_expr",
    "free_symbols",
    "to_text",
    "eval_expr",
    "eval_vectorized",
    "fmt_real",
]


class ExprSyntaxError(ValueError):
    """Raised when expression text cannot be parsed.  Carries a 0-based offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


class EvalError(ValueError):
    """Raised for unbound symbols or incompatible array shapes during evaluation."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["ExprAst", ...]


ExprAst = Union[Num, Sym, Neg, BinOp, Call]

CONSTANTS: dict[str, float] = {"pi": float(np.pi), "e": float(np.e)}

# name -> (arity, ufunc).  Every function is total: out-of-domain arguments
# yield NaN/Inf rather than raising, and callers inspect finiteness.
FUNCTIONS: dict[str, tuple[int, np.ufunc]] = {
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "tan": (1, np.tan),
    "asin": (1, np.arcsin),
    "acos": (1, np.arccos),
    "atan": (1, np.arctan),
    "sinh": (1, np.sinh),
    "cosh": (1, np.cosh),
    "tanh": (1, np.tanh),
    "exp": (1, np.exp),
    "log": (1, np.log),
    "log10": (1, np.log10),
    "sqrt": (1, np.sqrt),
    "abs": (1, np.absolute),
    "floor": (1, np.floor),
    "ceil": (1, np.ceil),
    "min": (2, np.minimum),
    "max": (2, np.maximum),
}


# ---------------------------------------------------------------------------
# Tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<sym>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num | sym | op | end
    text: str
    pos: int


def _tokenize(text: str) -> Iterator[_Token]:
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # only whitespace matched, or an illegal character
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if bad >= n:
                break
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        pos = m.end()
        kind = m.lastgroup
        assert kind is not None
        yield _Token(kind, m.group(kind), m.start(kind))
    yield _Token("end", "", n)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = list(_tokenize(text))
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        if self.cur.kind == "op" and self.cur.text == op:
            self.advance()
            return
        raise ExprSyntaxError(f"expected {op!r}", self.cur.pos)

    def at_op(self, *ops: str) -> bool:
        return self.cur.kind == "op" and self.cur.text in ops

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.cur.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.cur.text!r}", self.cur.pos)
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.at_op("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> ExprAst:
        if self.at_op("-"):
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> ExprAst:
        tok = self.cur
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "sym":
            self.advance()
            if self.at_op("("):
                return self.call(tok)
            return Sym(tok.text)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        if tok.kind == "end":
            raise ExprSyntaxError("unexpected end of expression", tok.pos)
        raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.pos)

    def call(self, name_tok: _Token) -> ExprAst:
        name = name_tok.text
        if name not in FUNCTIONS:
            raise ExprSyntaxError(f"unknown function {name!r}", name_tok.pos)
        self.expect_op("(")
        args = [self.expr()]
        while self.at_op(","):
            self.advance()
            args.append(self.expr())
        self.expect_op(")")
        arity = FUNCTIONS[name][0]
        if len(args) != arity:
            raise ExprSyntaxError(
                f"{name}() takes {arity} argument{'s' if arity != 1 else ''},"
                f" got {len(args)}",
                name_tok.pos,
            )
        return Call(name, tuple(args))


def parse_expr(text: str) -> ExprAst:
    """Parse expression text into an AST.

    Raises ExprSyntaxError on malformed input, unknown functions, or wrong
    arity; the error carries the character offset.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text).parse()


def free_symbols(ast: ExprAst) -> set[str]:
    """Set of symbol names the expression depends on (constants excluded)."""
    out: set[str] = set()
    _collect_symbols(ast, out)
    return out


def _collect_symbols(ast: ExprAst, out: set[str]) -> None:
    if isinstance(ast, Sym):
        if ast.name not in CONSTANTS:
            out.add(ast.name)
    elif isinstance(ast, Neg):
        _collect_symbols(ast.operand, out)
    elif isinstance(ast, BinOp):
        _collect_symbols(ast.left, out)
        _collect_symbols(ast.right, out)
    elif isinstance(ast, Call):
        for a in ast.args:
            _collect_symbols(a, out)


# ---------------------------------------------------------------------------
# Printing

def fmt_real(x: float) -> str:
    """Shortest decimal form that round-trips the double exactly.

    Integral values print without a decimal point ("1", not "1.0").
    """
    x = float(x)
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def to_text(ast: ExprAst) -> str:
    """Canonical text form; parse_expr(to_text(a)) is structurally equal to a."""
    return _print(ast, 0)


def _print(ast: ExprAst, min_level: int) -> str:
    if isinstance(ast, Num):
        text = fmt_real(ast.value)
        level = _LEVEL_NEG if ast.value < 0 else _LEVEL_ATOM
    elif isinstance(ast, Sym):
        return ast.name
    elif isinstance(ast, Call):
        return f"{ast.func}({','.join(_print(a, 0) for a in ast.args)})"
    elif isinstance(ast, Neg):
        text = "-" + _print(ast.operand, _LEVEL_NEG)
        level = _LEVEL_NEG
    elif isinstance(ast, BinOp):
        if ast.op == "^":
            text = _print(ast.left, _LEVEL_ATOM) + "^" + _print(ast.right, _LEVEL_NEG)
            level = _LEVEL_POW
        elif ast.op in ("*", "/"):
            text = _print(ast.left, _LEVEL_MUL) + ast.op + _print(ast.right, _LEVEL_NEG)
            level = _LEVEL_MUL
        else:
            text = _print(ast.left, _LEVEL_ADD) + ast.op + _print(ast.right, _LEVEL_MUL)
            level = _LEVEL_ADD
    else:  # pragma: no cover - exhaustive
        raise TypeError(f"not an ExprAst node: {ast!r}")
    if level < min_level:
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Evaluation

Value = Union[float, np.ndarray]
EvalContext = Mapping[str, Value]


def eval_expr(ast: ExprAst, ctx: EvalContext) -> float:
    """Evaluate with all free symbols bound to scalars.

    NaN/Inf propagate (IEEE semantics); out-of-domain function arguments
    produce non-finite values rather than exceptions.
    """
    with np.errstate(all="ignore"):
        val = _eval(ast, ctx)
    if isinstance(val, np.ndarray) and val.ndim > 0:
        raise EvalError("array-valued binding passed to scalar eval")
    return float(val)


def eval_value(ast: ExprAst, ctx: EvalContext):
    """Raw evaluation returning np.float64 or ndarray.

    No errstate guard and no shape pre-check: callers running many
    evaluations wrap the whole batch in np.errstate themselves.
    """
    return _eval(ast, ctx)


def eval_vectorized(ast: ExprAst, ctx: EvalContext) -> np.ndarray:
    """Elementwise evaluation; scalar bindings broadcast over the common shape.

    All array bindings must share one shape.  Equals mapping eval_expr over
    elements bit-for-bit (same ufuncs on both paths).
    """
    shape = _common_shape(ast, ctx)
    with np.errstate(all="ignore"):
        val = _eval(ast, ctx)
    out = np.asarray(val, dtype=np.float64)
    if out.shape != shape:
        out = np.broadcast_to(out, shape).copy()
    return out


def _common_shape(ast: ExprAst, ctx: EvalContext) -> tuple[int, ...]:
    shape: tuple[int, ...] | None = None
    for name in free_symbols(ast):
        v = ctx.get(name)
        if isinstance(v, np.ndarray) and v.ndim > 0:
            if shape is None:
                shape = v.shape
            elif v.shape != shape:
                raise EvalError(
                    f"shape mismatch: {name} has shape {v.shape}, expected {shape}"
                )
    if shape is None:
        # constant expression: take the bindings' shape when they agree
        shapes = {
            v.shape
            for v in ctx.values()
            if isinstance(v, np.ndarray) and v.ndim > 0
        }
        if len(shapes) == 1:
            shape = shapes.pop()
    return shape if shape is not None else ()


def _eval(ast: ExprAst, ctx: EvalContext):
    if isinstance(ast, Num):
        return np.float64(ast.value)
    if isinstance(ast, Sym):
        if ast.name in ctx:
            v = ctx[ast.name]
            return v if isinstance(v, np.ndarray) else np.float64(v)
        if ast.name in CONSTANTS:
            return np.float64(CONSTANTS[ast.name])
        raise EvalError(f"unbound symbol {ast.name!r}")
    if isinstance(ast, Neg):
        return np.negative(_eval(ast.operand, ctx))
    if isinstance(ast, BinOp):
        left = _eval(ast.left, ctx)
        right = _eval(ast.right, ctx)
        if ast.op == "+":
            return np.add(left, right)
        if ast.op == "-":
            return np.subtract(left, right)
        if ast.op == "*":
            return np.multiply(left, right)
        if ast.op == "/":
            return np.divide(left, right)
        return np.power(left, right)
    if isinstance(ast, Call):
        fn = FUNCTIONS[ast.func][1]
        return fn(*(_eval(a, ctx) for a in ast.args))
    raise TypeError(f"not an ExprAst node: {ast!r}")
