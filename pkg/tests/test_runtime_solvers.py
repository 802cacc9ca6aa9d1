import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simforge.runtime import (
    discretize,
    project_point_to_polyline,
    solve_newton,
    solve_pde_rect_grid,
    trace_implicit_grid,
)
from simforge.runtime.errors import SolverError


class TestNewton:
    def test_square_root_of_four(self):
        x, stats = solve_newton(lambda v: np.array([v[0] ** 2 - 4]), np.array([3.0]))
        assert abs(x[0] - 2.0) <= 1e-10
        assert stats.residual_norm <= 1e-10

    def test_linear_system(self):
        def residuals(v):
            return np.array([v[0] + v[1] - 3.0, v[0] - v[1] - 1.0])

        x, _ = solve_newton(residuals, np.array([0.0, 0.0]))
        assert np.allclose(x, [2.0, 1.0], atol=1e-10)

    def test_no_real_root(self):
        with pytest.raises(SolverError, match="no convergence"):
            solve_newton(lambda v: np.array([v[0] ** 2 + 1]), np.array([1.0]))

    def test_already_converged_initial_guess(self):
        x, stats = solve_newton(lambda v: np.array([v[0] - 2.0]), np.array([2.0]))
        assert x[0] == 2.0 and stats.iterations == 0

    def test_singular_jacobian(self):
        with pytest.raises(SolverError, match="[Ss]ingular"):
            # residual independent of the unknown: Jacobian is exactly zero
            solve_newton(lambda v: np.array([1.0 + 0.0 * v[0]]), np.array([1.0]))


class TestDiscretize:
    def test_linear_grid_matches_spec_defaults(self):
        grid = discretize(0.0, 2.0, 200, "linear")
        assert len(grid) == 200
        assert grid[0] == 0.0 and grid[-1] == 2.0
        assert np.allclose(np.diff(grid), 2.0 / 199)

    def test_log_grid_equal_ratios(self):
        grid = discretize(1.0, 100.0, 3, "log")
        assert grid.tolist() == [1.0, 10.0, 100.0]

    def test_degenerate_interval(self):
        with pytest.raises(SolverError, match="degenerate"):
            discretize(5.0, 5.0, 10)

    def test_inverted_interval(self):
        with pytest.raises(SolverError):
            discretize(2.0, 1.0, 10)

    def test_log_needs_positive_bounds(self):
        with pytest.raises(SolverError, match="positive"):
            discretize(0.0, 1.0, 10, "log")


class TestProjection:
    SEGMENT = np.array([[0.0, -3.14], [0.0, 3.14]])

    def test_project_onto_vertical_segment(self):
        projected = project_point_to_polyline((1.0, 0.5), self.SEGMENT)
        assert projected.tolist() == [0.0, 0.5]

    def test_clamp_to_endpoint(self):
        projected = project_point_to_polyline((0.3, 5.0), self.SEGMENT)
        assert projected.tolist() == [0.0, 3.14]

    def test_point_on_polyline_is_identity(self):
        projected = project_point_to_polyline((0.0, 2.0), self.SEGMENT)
        assert projected.tolist() == [0.0, 2.0]

    def test_tie_breaks_to_lowest_segment(self):
        # square around the point: both verticals are equally close
        square = np.array([[-1.0, -1.0], [-1.0, 1.0], [1.0, 1.0], [1.0, -1.0]])
        projected = project_point_to_polyline((0.0, 0.0), square)
        assert projected.tolist() == [-1.0, 0.0]


class TestMarchingSquares:
    def test_unit_circle_vertices_near_zero_set(self):
        xs = np.linspace(-2.0, 2.0, 128)
        ys = np.linspace(-2.0, 2.0, 128)
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
        f = grid_x**2 + grid_y**2 - 1.0
        segments = trace_implicit_grid(xs, ys, f)
        assert segments
        cell_diag = math.hypot(xs[1] - xs[0], ys[1] - ys[0])
        for seg in segments:
            for x, y in seg:
                assert abs(math.hypot(x, y) - 1.0) <= cell_diag

    def test_constant_positive_field_is_empty(self):
        xs = ys = np.linspace(0.0, 1.0, 16)
        f = np.ones((16, 16))
        assert trace_implicit_grid(xs, ys, f) == []

    def test_linear_field_is_exact(self):
        xs = ys = np.linspace(0.0, 1.0, 21)
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
        f = grid_x - grid_y
        for seg in trace_implicit_grid(xs, ys, f):
            for x, y in seg:
                assert abs(x - y) <= 1e-12

    def test_vertices_lie_on_cell_edges(self):
        xs = np.linspace(-2.0, 2.0, 33)
        ys = np.linspace(-2.0, 2.0, 33)
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
        f = grid_x**2 + grid_y**2 - 2.0
        for seg in trace_implicit_grid(xs, ys, f):
            for x, y in seg:
                on_x_line = np.any(np.isclose(x, xs, atol=1e-12))
                on_y_line = np.any(np.isclose(y, ys, atol=1e-12))
                assert on_x_line or on_y_line

    def test_interpolated_value_bounded_by_worse_corner(self):
        xs = np.linspace(-2.0, 2.0, 33)
        ys = np.linspace(-2.0, 2.0, 33)
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")

        def f(x, y):
            return x**2 + y**2 - 1.0

        field = f(grid_x, grid_y)
        hx = xs[1] - xs[0]
        for seg in trace_implicit_grid(xs, ys, field):
            for x, y in seg:
                # bracketing corner values along the carrying edge
                i = int(np.clip(np.searchsorted(xs, x) - 1, 0, len(xs) - 2))
                j = int(np.clip(np.searchsorted(ys, y) - 1, 0, len(ys) - 2))
                corners = [
                    abs(field[i, j]),
                    abs(field[i + 1, j]),
                    abs(field[i, j + 1]),
                    abs(field[i + 1, j + 1]),
                ]
                assert abs(f(x, y)) <= max(corners) + 1e-12


def _dirichlet_all(value: float, nx: int, ny: int) -> dict:
    return {
        "left": ("dirichlet", np.full(ny, value)),
        "right": ("dirichlet", np.full(ny, value)),
        "bottom": ("dirichlet", np.full(nx, value)),
        "top": ("dirichlet", np.full(nx, value)),
    }


def _poisson_manufactured(n: int) -> float:
    """Max error against u = sin(pi x) sin(pi y) for -lap u = f."""
    xs = np.linspace(0.0, 1.0, n)
    ys = np.linspace(0.0, 1.0, n)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    ones = np.ones_like(grid_x)
    f = 2 * math.pi**2 * np.sin(math.pi * grid_x) * np.sin(math.pi * grid_y)
    u, _ = solve_pde_rect_grid(
        xs, ys, ones, np.zeros_like(ones), ones, np.zeros_like(ones), f,
        _dirichlet_all(0.0, n, n),
    )
    exact = np.sin(math.pi * grid_x) * np.sin(math.pi * grid_y)
    return float(np.max(np.abs(u - exact)))


class TestPde:
    def test_zero_data_gives_zero_solution(self):
        n = 17
        xs = ys = np.linspace(0.0, 1.0, n)
        ones = np.ones((n, n))
        zeros = np.zeros((n, n))
        u, _ = solve_pde_rect_grid(
            xs, ys, ones, zeros, ones, zeros, zeros, _dirichlet_all(0.0, n, n)
        )
        assert np.all(u == 0.0)

    def test_manufactured_solution_65(self):
        assert _poisson_manufactured(65) <= 2e-3

    def test_second_order_convergence(self):
        ratio = _poisson_manufactured(33) / _poisson_manufactured(65)
        assert 3.5 <= ratio <= 4.5

    def test_neumann_linear_solution_exact(self):
        # u = x satisfies -u'' = 0 with du/dn = -1 (left), +1 (right)
        n = 21
        xs = ys = np.linspace(0.0, 1.0, n)
        ones = np.ones((n, n))
        zeros = np.zeros((n, n))
        boundary = {
            "left": ("neumann", np.full(n, -1.0)),
            "right": ("neumann", np.full(n, 1.0)),
            "bottom": ("dirichlet", xs),
            "top": ("dirichlet", xs),
        }
        u, _ = solve_pde_rect_grid(xs, ys, ones, zeros, ones, zeros, zeros, boundary)
        grid_x, _ = np.meshgrid(xs, ys, indexing="ij")
        assert np.max(np.abs(u - grid_x)) <= 1e-10

    def test_anisotropic_manufactured(self):
        # P = [[2, 0.5], [0.5, 1]], u = sin(pi x) sin(pi y); forcing from
        # -div(P grad u) computed analytically
        n = 65
        xs = ys = np.linspace(0.0, 1.0, n)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        s = np.sin(math.pi * gx) * np.sin(math.pi * gy)
        cc = np.cos(math.pi * gx) * np.cos(math.pi * gy)
        p11 = 2.0 * np.ones((n, n))
        p12 = 0.5 * np.ones((n, n))
        p22 = 1.0 * np.ones((n, n))
        f = math.pi**2 * (3.0 * s - 1.0 * cc)
        u, _ = solve_pde_rect_grid(
            xs, ys, p11, p12, p22, np.zeros((n, n)), f, _dirichlet_all(0.0, n, n)
        )
        assert np.max(np.abs(u - s)) <= 5e-3

    def test_non_spd_rejected(self):
        n = 9
        xs = ys = np.linspace(0.0, 1.0, n)
        ones = np.ones((n, n))
        zeros = np.zeros((n, n))
        with pytest.raises(SolverError, match="positive definite"):
            solve_pde_rect_grid(
                xs, ys, -ones, zeros, ones, zeros, zeros, _dirichlet_all(0.0, n, n)
            )

    def test_negative_absorption_warns(self):
        n = 9
        xs = ys = np.linspace(0.0, 1.0, n)
        ones = np.ones((n, n))
        zeros = np.zeros((n, n))
        _, warnings = solve_pde_rect_grid(
            xs, ys, ones, zeros, ones, -ones, zeros, _dirichlet_all(0.0, n, n)
        )
        assert warnings

    @settings(max_examples=20, deadline=None)
    @given(st.lists(st.floats(min_value=-5, max_value=5), min_size=4, max_size=4))
    def test_maximum_principle_random_dirichlet(self, corners):
        # with c = 0 and f = 0 the extrema sit on the Dirichlet boundary
        n = 15
        xs = ys = np.linspace(0.0, 1.0, n)
        ones = np.ones((n, n))
        zeros = np.zeros((n, n))
        left = np.linspace(corners[0], corners[1], n)
        right = np.linspace(corners[2], corners[3], n)
        bottom = np.linspace(corners[0], corners[2], n)
        top = np.linspace(corners[1], corners[3], n)
        boundary = {
            "left": ("dirichlet", left),
            "right": ("dirichlet", right),
            "bottom": ("dirichlet", bottom),
            "top": ("dirichlet", top),
        }
        u, _ = solve_pde_rect_grid(xs, ys, ones, zeros, ones, zeros, zeros, boundary)
        edge_values = np.concatenate([left, right, bottom, top])
        tol = 1e-9 * max(1.0, float(np.max(np.abs(edge_values))))
        assert u.max() <= edge_values.max() + tol
        assert u.min() >= edge_values.min() - tol


class TestSampling:
    def test_parabola_five_points(self, pendulum_irs):
        # direct check through the engine-level helpers: y = x^2 on [0, 1]
        from simforge.expr import eval_vectorized, parse_expr

        grid = discretize(0.0, 1.0, 5)
        values = eval_vectorized(parse_expr("x^2"), {"x": grid})
        assert values.tolist() == [0.0, 1.0 / 16, 0.25, 9.0 / 16, 1.0]

    def test_parametric_circle_radius(self):
        from simforge.expr import eval_vectorized, parse_expr

        grid = discretize(0.0, 2 * math.pi, 361)
        xs = eval_vectorized(parse_expr("cos(t)"), {"t": grid})
        ys = eval_vectorized(parse_expr("sin(t)"), {"t": grid})
        radii = np.hypot(xs, ys)
        assert np.max(np.abs(radii - 1.0)) <= 1e-12

    def test_plane_surface_corners(self):
        from simforge.expr import eval_vectorized, parse_expr

        xs = ys = discretize(0.0, 1.0, 3)
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
        values = eval_vectorized(
            parse_expr("x+y"), {"x": grid_x, "y": grid_y}
        )
        corners = {values[0, 0], values[-1, 0], values[0, -1], values[-1, -1]}
        assert corners == {0.0, 1.0, 2.0}
