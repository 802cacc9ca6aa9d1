import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simforge.expr import (
    BinOp,
    Call,
    EvalError,
    ExprSyntaxError,
    Neg,
    Num,
    Sym,
    eval_expr,
    eval_vectorized,
    free_symbols,
    parse_expr,
    to_text,
)


class TestParsing:
    def test_pendulum_derivative_symbols(self):
        assert free_symbols(parse_expr("-g0/L*sin(theta)")) == {"g0", "L", "theta"}

    def test_harmonic_solution_symbols(self):
        ast = parse_expr("theta_0*cos(sqrt(g0/L)*t)")
        assert free_symbols(ast) == {"theta_0", "g0", "L", "t"}

    def test_power_right_associative(self):
        assert eval_expr(parse_expr("2^3^2"), {}) == 512.0

    def test_power_binds_tighter_than_unary_minus(self):
        assert eval_expr(parse_expr("-2^2"), {}) == -4.0

    def test_unary_minus_binds_tighter_than_mul(self):
        # -g0/L*sin(theta) is ((-g0)/L)*sin(theta)
        ast = parse_expr("-g0/L*sin(theta)")
        assert isinstance(ast, BinOp) and ast.op == "*"
        assert isinstance(ast.left, BinOp) and ast.left.op == "/"
        assert isinstance(ast.left.left, Neg)

    def test_signed_exponent(self):
        assert eval_expr(parse_expr("2^-3"), {}) == 0.125

    def test_parentheses(self):
        assert eval_expr(parse_expr("(1+2)*3"), {}) == 9.0

    def test_number_forms(self):
        for text, value in [("1e3", 1000.0), ("2.5E-2", 0.025), (".5", 0.5), ("2.", 2.0)]:
            assert eval_expr(parse_expr(text), {}) == value

    def test_unknown_function(self):
        with pytest.raises(ExprSyntaxError, match="unknown function"):
            parse_expr("sinc(x)")

    def test_wrong_arity(self):
        with pytest.raises(ExprSyntaxError, match="takes 1 argument"):
            parse_expr("sin(x, y)")
        with pytest.raises(ExprSyntaxError, match="takes 2 arguments"):
            parse_expr("min(x)")

    def test_syntax_error_position(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("1 + * 2")
        assert err.value.pos == 4

    def test_empty(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("   ")

    def test_illegal_character(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("a $ b")


class TestFreeSymbols:
    def test_constants_are_not_free(self):
        assert free_symbols(parse_expr("pi*r^2")) == {"r"}

    def test_literal_has_none(self):
        assert free_symbols(parse_expr("3.14")) == set()


class TestEval:
    def test_pendulum_at_rest(self):
        ast = parse_expr("-g0/L*sin(theta)")
        assert eval_expr(ast, {"g0": 9.81, "L": 1.0, "theta": 0.0}) == 0.0

    def test_pendulum_at_quarter_turn(self):
        ast = parse_expr("-g0/L*sin(theta)")
        value = eval_expr(ast, {"g0": 9.81, "L": 1.0, "theta": math.pi / 2})
        assert value == pytest.approx(-9.81, abs=1e-12)

    def test_harmonic_at_zero(self):
        ast = parse_expr("theta_0*cos(sqrt(g0/L)*t)")
        value = eval_expr(ast, {"theta_0": 2.0, "g0": 9.81, "L": 1.0, "t": 0.0})
        assert value == 2.0

    def test_unbound_symbol_named(self):
        with pytest.raises(EvalError, match="'tf'"):
            eval_expr(parse_expr("tf+1"), {})

    def test_constants_bound(self):
        assert eval_expr(parse_expr("cos(pi)"), {}) == pytest.approx(-1.0)
        assert eval_expr(parse_expr("log(e)"), {}) == pytest.approx(1.0)

    def test_out_of_domain_is_nan_not_exception(self):
        assert math.isnan(eval_expr(parse_expr("sqrt(0-1)"), {}))
        assert math.isnan(eval_expr(parse_expr("log(-1)"), {}))

    def test_division_by_zero_is_inf(self):
        assert math.isinf(eval_expr(parse_expr("1/x"), {"x": 0.0}))

    def test_min_max(self):
        assert eval_expr(parse_expr("min(2, 3)"), {}) == 2.0
        assert eval_expr(parse_expr("max(2, 3)"), {}) == 3.0


class TestEvalVectorized:
    def test_square(self):
        out = eval_vectorized(parse_expr("x^2"), {"x": np.array([0.0, 1.0, 2.0])})
        assert out.tolist() == [0.0, 1.0, 4.0]

    def test_two_arrays(self):
        out = eval_vectorized(
            parse_expr("a+b"), {"a": np.array([1.0, 2.0]), "b": np.array([10.0, 20.0])}
        )
        assert out.tolist() == [11.0, 22.0]

    def test_sine_peak_matches_scalar_loop(self):
        # oracle: per-element scalar evaluation over a grid containing pi/2
        ast = parse_expr("sin(t)")
        ts = np.linspace(0.0, math.pi, 101)
        vec = eval_vectorized(ast, {"t": ts})
        loop = np.array([eval_expr(ast, {"t": t}) for t in ts])
        assert vec.tolist() == loop.tolist()
        assert abs(vec.max() - 1.0) <= 1e-9

    def test_scalar_broadcast(self):
        out = eval_vectorized(
            parse_expr("k*x"), {"k": 3.0, "x": np.array([1.0, 2.0])}
        )
        assert out.tolist() == [3.0, 6.0]

    def test_shape_mismatch(self):
        with pytest.raises(EvalError, match="shape"):
            eval_vectorized(
                parse_expr("a+b"),
                {"a": np.zeros(3), "b": np.zeros(4)},
            )


# -- property tests ----------------------------------------------------------

_symbols = st.sampled_from(["a", "b"])
_unary_fns = st.sampled_from(
    ["sin", "cos", "tan", "exp", "sqrt", "abs", "floor", "ceil", "tanh", "atan"]
)


def _ast(depth: int):
    if depth == 0:
        return st.one_of(
            st.floats(min_value=0, max_value=100, allow_nan=False).map(Num),
            _symbols.map(Sym),
        )
    sub = _ast(depth - 1)
    return st.one_of(
        sub,
        sub.map(Neg),
        st.tuples(st.sampled_from(["+", "-", "*", "/", "^"]), sub, sub).map(
            lambda t: BinOp(*t)
        ),
        st.tuples(_unary_fns, sub).map(lambda t: Call(t[0], (t[1],))),
        st.tuples(sub, sub).map(lambda t: Call("min", t)),
    )


@settings(max_examples=200, deadline=None)
@given(_ast(3))
def test_print_parse_roundtrip(ast):
    assert parse_expr(to_text(ast)) == ast


@settings(max_examples=150, deadline=None)
@given(
    _ast(3),
    st.lists(
        st.floats(min_value=-3, max_value=3, allow_nan=False), min_size=1, max_size=7
    ),
    st.lists(
        st.floats(min_value=-3, max_value=3, allow_nan=False), min_size=1, max_size=7
    ),
)
def test_vectorized_equals_scalar_map_bitwise(ast, a_vals, b_vals):
    n = min(len(a_vals), len(b_vals))
    a = np.array(a_vals[:n])
    b = np.array(b_vals[:n])
    vec = eval_vectorized(ast, {"a": a, "b": b})
    loop = np.array(
        [eval_expr(ast, {"a": a[i], "b": b[i]}) for i in range(n)]
    )
    assert vec.tobytes() == loop.tobytes()
