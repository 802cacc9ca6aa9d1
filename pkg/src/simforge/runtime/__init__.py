"""Numeric runtime: domain discretization, solvers, plan execution."""

from .config import NewtonConfig, OdeConfig, SolverConfig
from .contour import trace_implicit_grid
from .engine import (
    ParamValuation,
    RunResult,
    make_valuation,
    result_to_csv,
    result_to_dict,
    run,
)
from .errors import RunInputError, SolverError
from .geometry import discretize, project_point_to_polyline
from .newton import NewtonStats, solve_newton
from .odesolve import OdeStats, integrate_rk45
from .pde import solve_pde_rect_grid

__all__ = [
    "NewtonConfig",
    "NewtonStats",
    "OdeConfig",
    "OdeStats",
    "ParamValuation",
    "RunInputError",
    "RunResult",
    "SolverConfig",
    "SolverError",
    "discretize",
    "integrate_rk45",
    "make_valuation",
    "project_point_to_polyline",
    "result_to_csv",
    "result_to_dict",
    "run",
    "solve_newton",
    "solve_pde_rect_grid",
    "trace_implicit_grid",
]
