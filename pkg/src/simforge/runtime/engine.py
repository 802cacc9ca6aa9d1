"""Execute a compute plan under a parameter valuation.

run() walks the task list in IR order inside one IEEE-quiet errstate block;
constrained points are projected onto their reference geometry before any
task executes.  A hard task failure aborts the run and returns the partial
RunResult with the error recorded in diagnostics; soft failures (ODE step
budget, non-finite samples) only add diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Optional

import numpy as np

from ..compiler.ir import (
    ComputeIR,
    Discretize2DTask,
    DiscretizeTask,
    ImplicitTraceTask,
    NewtonTask,
    OdeSolveTask,
    OutputEvalTask,
    PdeTask,
    PointDecl,
    SampleCurveTask,
    SampleSurfaceTask,
)
from ..expr import EvalError, eval_value, eval_vectorized, fmt_real, parse_expr
from ..jsonutil import sanitize_floats
from .config import SolverConfig
from .contour import trace_implicit_grid
from .errors import RunInputError, SolverError
from .geometry import discretize, project_point_to_polyline
from .newton import solve_newton
from .odesolve import integrate_rk45
from .pde import solve_pde_rect_grid

__all__ = [
    "ParamValuation",
    "RunResult",
    "make_valuation",
    "run",
    "result_to_dict",
    "result_to_csv",
]

ParamValuation = dict[str, Any]  # symbol -> float or 2-D ndarray


@lru_cache(maxsize=4096)
def _parsed(text: str):
    return parse_expr(text)


@dataclass
class RunResult:
    series: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    fields2d: dict[str, dict] = field(default_factory=dict)
    points: dict[str, tuple[float, float]] = field(default_factory=dict)
    traces: dict[str, list[np.ndarray]] = field(default_factory=dict)
    scalars: dict[str, float] = field(default_factory=dict)
    meta: dict[str, dict] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=lambda: {"warnings": [], "solver": {}})

    @property
    def ok(self) -> bool:
        return "error" not in self.diagnostics


def make_valuation(
    ir: ComputeIR, overrides: Optional[dict[str, Any]] = None
) -> tuple[ParamValuation, list[str]]:
    """Defaults from the IR plus overrides; bounded values are clamped.

    Unknown override symbols and matrix shape mismatches raise RunInputError;
    clamps are reported as warnings.
    """
    warnings: list[str] = []
    decls = {d.symbol: d for d in ir.param_decls}
    valuation: ParamValuation = {}
    for decl in ir.param_decls:
        if decl.kind == "matrix":
            valuation[decl.symbol] = np.asarray(decl.default, dtype=float)
        else:
            valuation[decl.symbol] = float(decl.default)

    for symbol, value in (overrides or {}).items():
        decl = decls.get(symbol)
        if decl is None:
            raise RunInputError(f"unknown parameter {symbol!r}")
        if decl.kind == "matrix":
            arr = np.asarray(value, dtype=float)
            expected = np.asarray(decl.default, dtype=float).shape
            if arr.shape != expected:
                raise RunInputError(
                    f"matrix {symbol!r} must have shape {expected}, got {arr.shape}"
                )
            valuation[symbol] = arr
            continue
        try:
            scalar = float(value)
        except (TypeError, ValueError):
            raise RunInputError(f"parameter {symbol!r}: not a number: {value!r}")
        if decl.min is not None and decl.max is not None:
            clamped = min(max(scalar, decl.min), decl.max)
            if clamped != scalar:
                warnings.append(
                    f"{symbol} = {fmt_real(scalar)} clamped to "
                    f"[{fmt_real(decl.min)}, {fmt_real(decl.max)}]"
                )
            scalar = clamped
        valuation[symbol] = scalar
    return valuation, warnings


def run(
    ir: ComputeIR, valuation: ParamValuation, cfg: Optional[SolverConfig] = None
) -> RunResult:
    """Execute every task; see module docstring for the failure contract."""
    cfg = cfg or SolverConfig()
    for decl in ir.param_decls:
        if decl.symbol not in valuation:
            raise RunInputError(f"unbound parameter {decl.symbol!r}")

    result = RunResult()
    env: dict[str, Any] = {}
    for key, value in valuation.items():
        env[key] = (
            np.asarray(value, dtype=float)
            if isinstance(value, (list, np.ndarray))
            else float(value)
        )

    for decl in ir.result_decls:
        result.meta[decl.symbol] = {
            "role": decl.role,
            "name": decl.name,
            "unit": decl.unit,
            "abscissa": decl.abscissa,
        }

    with np.errstate(all="ignore"):
        _project_points(ir, env, result)
        for task in ir.tasks:
            try:
                _execute(task, ir, env, result, cfg)
            except (SolverError, EvalError, KeyError) as exc:
                result.diagnostics["error"] = {
                    "task": _label(task),
                    "message": str(exc),
                }
                break

    nonfinite = []
    for symbol, (_, values) in result.series.items():
        if not np.all(np.isfinite(values)):
            nonfinite.append(symbol)
    for symbol, fld in result.fields2d.items():
        if not np.all(np.isfinite(fld["values"])):
            nonfinite.append(symbol)
    if nonfinite:
        result.diagnostics["nonFinite"] = nonfinite
        result.diagnostics["warnings"].append(
            "non-finite values in: " + ", ".join(nonfinite)
        )
    return result


def _label(task) -> str:
    return getattr(task, "label", None) or getattr(task, "target", None) or getattr(
        task, "symbol", task.kind
    )


def _scalars_of(env: dict[str, Any]) -> dict[str, float]:
    return {
        k: v
        for k, v in env.items()
        if not isinstance(v, np.ndarray) or v.ndim == 0
    }


def _vec(text: str, ctx: dict, shape: tuple) -> np.ndarray:
    """Vectorized evaluation broadcast to an explicit target shape."""
    value = eval_vectorized(_parsed(text), ctx)
    if value.shape != shape:
        value = np.broadcast_to(value, shape).copy()
    return value


def _scalar(text: str, ctx: dict) -> float:
    value = eval_value(_parsed(text), _scalars_of(ctx))
    return float(value)


# ---------------------------------------------------------------------------
# Point projection

def _project_points(ir: ComputeIR, env: dict, result: RunResult) -> None:
    for pd in ir.point_decls:
        x = float(env.get(pd.x1_symbol, pd.x1_default))
        y = float(env.get(pd.x2_symbol, pd.x2_default))
        vertices = _constraint_vertices(ir, pd, env)
        if vertices is not None:
            projected = project_point_to_polyline((x, y), vertices)
            x, y = float(projected[0]), float(projected[1])
        env[pd.x1_symbol] = x
        env[pd.x2_symbol] = y
        result.points[pd.label] = (x, y)


def _constraint_vertices(
    ir: ComputeIR, pd: PointDecl, env: dict
) -> Optional[np.ndarray]:
    if pd.constraint is None:
        return None
    if pd.constraint_kind == "polyline":
        for poly in ir.polylines:
            if poly.label == pd.constraint:
                return np.array(
                    [[_scalar(x1, env), _scalar(x2, env)] for x1, x2 in poly.vertices]
                )
        raise SolverError(f"constraint polyline {pd.constraint!r} not in plan")
    if pd.constraint_kind == "curve":
        task = next(
            (
                t
                for t in ir.tasks
                if isinstance(t, SampleCurveTask) and t.label == pd.constraint
            ),
            None,
        )
        if task is None:
            raise SolverError(f"constraint curve {pd.constraint!r} not in plan")
        grid_task = next(
            (
                t
                for t in ir.tasks
                if isinstance(t, DiscretizeTask) and t.target == task.grid
            ),
            None,
        )
        if grid_task is None:
            raise SolverError(f"constraint curve {pd.constraint!r} has no domain")
        grid = discretize(
            _scalar(grid_task.lower, env),
            _scalar(grid_task.upper, env),
            grid_task.n,
            grid_task.spacing,
        )
        ctx = {**env, task.grid: grid}
        if task.curve_kind == "nonparametric":
            xs, ys = grid, _vec(task.exprs[0], ctx, grid.shape)
        else:
            xs = _vec(task.exprs[0], ctx, grid.shape)
            ys = _vec(task.exprs[1], ctx, grid.shape)
        return np.column_stack([xs, ys])
    raise SolverError(f"constraint {pd.constraint!r} is not a polyline or curve")


# ---------------------------------------------------------------------------
# Task dispatch

def _execute(task, ir: ComputeIR, env: dict, result: RunResult, cfg: SolverConfig):
    if isinstance(task, DiscretizeTask):
        env[task.target] = discretize(
            _scalar(task.lower, env), _scalar(task.upper, env), task.n, task.spacing
        )
    elif isinstance(task, Discretize2DTask):
        for axis in (task.x, task.y):
            env[axis.symbol] = discretize(
                _scalar(axis.lower, env),
                _scalar(axis.upper, env),
                axis.n,
                axis.spacing,
            )
    elif isinstance(task, OdeSolveTask):
        _run_ode(task, env, result, cfg)
    elif isinstance(task, OutputEvalTask):
        grid = env[task.abscissa]
        values = _vec(task.expr, env, grid.shape)
        env[task.symbol] = values
        result.series[task.symbol] = (grid, values)
    elif isinstance(task, NewtonTask):
        _run_newton(task, env, result, cfg)
    elif isinstance(task, ImplicitTraceTask):
        xs, ys = env[task.x], env[task.y]
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
        f_grid = _vec(task.f, {**env, task.x: grid_x, task.y: grid_y}, grid_x.shape)
        result.traces[task.label] = trace_implicit_grid(xs, ys, f_grid)
    elif isinstance(task, SampleCurveTask):
        grid = env[task.grid]
        if task.curve_kind == "nonparametric":
            values = _vec(task.exprs[0], env, grid.shape)
            env[task.label] = values
            result.series[task.label] = (grid, values)
        else:
            xs = _vec(task.exprs[0], env, grid.shape)
            ys = _vec(task.exprs[1], env, grid.shape)
            result.series[task.label] = (xs, ys)
    elif isinstance(task, SampleSurfaceTask):
        xs, ys = env[task.x], env[task.y]
        grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
        ctx = {**env, task.x: grid_x, task.y: grid_y}
        if task.surface_kind == "nonparametric":
            values = _vec(task.exprs[0], ctx, grid_x.shape)
            result.fields2d[task.label] = {
                "x": xs,
                "y": ys,
                "values": values,
                "parametric": False,
            }
        else:
            sampled = [_vec(e, ctx, grid_x.shape) for e in task.exprs]
            result.fields2d[task.label] = {
                "x": sampled[0],
                "y": sampled[1],
                "values": sampled[2],
                "parametric": True,
            }
    elif isinstance(task, PdeTask):
        _run_pde(task, env, result)
    else:
        raise SolverError(f"unknown task kind {task.kind!r}")


def _run_ode(task: OdeSolveTask, env: dict, result: RunResult, cfg: SolverConfig):
    grid = env[task.grid]
    base = _scalars_of(env)
    deriv_asts = [_parsed(st.derivative) for st in task.states]
    y0 = np.array([_scalar(st.initial, env) for st in task.states])
    if not np.all(np.isfinite(y0)):
        raise SolverError(f"ode {task.label!r}: initial condition is not finite")
    state_symbols = [st.symbol for st in task.states]
    bindings = dict(base)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        bindings[task.time_symbol] = t
        for symbol, value in zip(state_symbols, y):
            bindings[symbol] = value
        return np.array([eval_value(ast, bindings) for ast in deriv_asts])

    trajectory, stats = integrate_rk45(
        rhs,
        y0,
        grid,
        rel_tol=cfg.ode.rel_tol,
        abs_tol=cfg.ode.abs_tol,
        max_steps=cfg.ode.max_steps,
    )
    result.diagnostics["solver"][task.label] = stats.to_dict()
    if stats.status != "ok":
        result.diagnostics["warnings"].append(
            f"ode {task.label}: {stats.status} at t={stats.reached_t:g}; "
            "results past that point are not valid"
        )
    for idx, symbol in enumerate(state_symbols):
        column = trajectory[:, idx]
        env[symbol] = column
        result.series[symbol] = (grid, column)


def _run_newton(task: NewtonTask, env: dict, result: RunResult, cfg: SolverConfig):
    residual_asts = [_parsed(r) for r in task.residuals]
    symbols = [sym for sym, _ in task.unknowns]
    x0 = np.array([_scalar(guess, env) for _, guess in task.unknowns])
    bindings = _scalars_of(env)

    def residuals(x: np.ndarray) -> np.ndarray:
        for symbol, value in zip(symbols, x):
            bindings[symbol] = value
        return np.array([eval_value(ast, bindings) for ast in residual_asts])

    try:
        root, stats = solve_newton(
            residuals,
            x0,
            tol=cfg.newton.tol,
            max_iter=cfg.newton.max_iter,
            fd_step=cfg.newton.fd_jacobian_step,
        )
    except SolverError as exc:
        raise SolverError(f"nonlinear system {task.label!r}: {exc}") from None
    result.diagnostics["solver"][task.label] = stats.to_dict()
    for symbol, value in zip(symbols, root):
        env[symbol] = float(value)
        result.scalars[symbol] = float(value)


def _run_pde(task: PdeTask, env: dict, result: RunResult):
    xs, ys = env[task.x], env[task.y]
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    ctx = {**env, task.x: grid_x, task.y: grid_y}
    shape = grid_x.shape
    p11 = _vec(task.p11, ctx, shape)
    p12 = _vec(task.p12, ctx, shape)
    p22 = _vec(task.p22, ctx, shape)
    c_grid = _vec(task.c, ctx, shape)
    f_grid = _vec(task.f, ctx, shape)

    boundary: dict[str, tuple[str, np.ndarray]] = {}
    for edge in ("left", "right", "bottom", "top"):
        cond = task.boundary.get(edge)
        if cond is None:
            raise SolverError(f"pde {task.label!r}: missing boundary for {edge!r}")
        if edge in ("left", "right"):
            edge_ctx = {**env, task.x: float(xs[0 if edge == "left" else -1]), task.y: ys}
            values = _vec(cond["value"], edge_ctx, ys.shape)
        else:
            edge_ctx = {**env, task.x: xs, task.y: float(ys[0 if edge == "bottom" else -1])}
            values = _vec(cond["value"], edge_ctx, xs.shape)
        boundary[edge] = (cond["type"], values)

    try:
        u, warnings = solve_pde_rect_grid(
            xs, ys, p11, p12, p22, c_grid, f_grid, boundary
        )
    except SolverError as exc:
        raise SolverError(f"pde {task.label!r}: {exc}") from None
    for message in warnings:
        result.diagnostics["warnings"].append(f"pde {task.label}: {message}")
    result.fields2d[task.label] = {
        "x": xs,
        "y": ys,
        "values": u,
        "parametric": False,
    }


# ---------------------------------------------------------------------------
# Serialization

def result_to_dict(result: RunResult) -> dict:
    """JSON-ready dict (parallel arrays, non-finite floats become null)."""
    out = {
        "series": {
            symbol: {
                "abscissa": result.meta.get(symbol, {}).get("abscissa", ""),
                "x": xs.tolist(),
                "y": ys.tolist(),
            }
            for symbol, (xs, ys) in result.series.items()
        },
        "fields2d": {
            symbol: {
                "x": fld["x"].tolist(),
                "y": fld["y"].tolist(),
                "values": fld["values"].tolist(),
                "parametric": bool(fld["parametric"]),
            }
            for symbol, fld in result.fields2d.items()
        },
        "points": {
            symbol: [float(x), float(y)] for symbol, (x, y) in result.points.items()
        },
        "traces": {
            symbol: [seg.tolist() for seg in segments]
            for symbol, segments in result.traces.items()
        },
        "scalars": dict(result.scalars),
        "meta": result.meta,
        "diagnostics": result.diagnostics,
    }
    return sanitize_floats(out)


def result_to_csv(result: RunResult) -> str:
    """All series as one table: each abscissa column first, then its series."""
    groups: dict[str, dict] = {}
    for symbol, (xs, ys) in result.series.items():
        abscissa = result.meta.get(symbol, {}).get("abscissa", "") or f"{symbol}:x"
        group = groups.setdefault(abscissa, {"x": xs, "columns": []})
        group["columns"].append((symbol, ys))

    headers: list[str] = []
    columns: list[np.ndarray] = []
    for abscissa, group in groups.items():
        headers.append(abscissa)
        columns.append(group["x"])
        for symbol, ys in group["columns"]:
            headers.append(symbol)
            columns.append(ys)

    if not columns:
        return "\n"
    n_rows = max(col.size for col in columns)
    lines = [",".join(headers)]
    for i in range(n_rows):
        cells = [
            fmt_real(float(col[i])) if i < col.size and np.isfinite(col[i]) else ""
            for col in columns
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
