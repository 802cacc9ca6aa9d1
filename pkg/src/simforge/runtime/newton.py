"""Newton iteration for square nonlinear systems, forward-difference Jacobian."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SolverError

__all__ = ["NewtonStats", "solve_newton"]


@dataclass
class NewtonStats:
    iterations: int = 0
    residual_norm: float = float("inf")

    def to_dict(self) -> dict:
        return {"iterations": self.iterations, "residualNorm": self.residual_norm}


def solve_newton(
    f: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 50,
    fd_step: float = float(np.sqrt(np.finfo(float).eps)),
) -> tuple[np.ndarray, NewtonStats]:
    """Return x with ||f(x)||_inf <= tol, or raise SolverError."""
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    n = x.size
    if not np.all(np.isfinite(x)):
        raise SolverError("initial guess is not finite")
    stats = NewtonStats()

    fx = np.atleast_1d(np.asarray(f(x), dtype=float))
    if fx.size != n:
        raise SolverError(f"system is not square: {fx.size} residuals, {n} unknowns")

    for iteration in range(max_iter):
        stats.residual_norm = float(np.max(np.abs(fx)))
        if stats.residual_norm <= tol:
            stats.iterations = iteration
            return x, stats
        if not np.all(np.isfinite(fx)):
            raise SolverError("residual became non-finite during iteration")

        jac = np.empty((n, n))
        for j in range(n):
            h = fd_step * max(1.0, abs(x[j]))
            xh = x.copy()
            xh[j] += h
            jac[:, j] = (np.atleast_1d(np.asarray(f(xh), dtype=float)) - fx) / h
        try:
            dx = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            raise SolverError("singular Jacobian") from None
        if not np.all(np.isfinite(dx)):
            raise SolverError("singular Jacobian")
        x = x + dx
        fx = np.atleast_1d(np.asarray(f(x), dtype=float))

    stats.residual_norm = float(np.max(np.abs(fx)))
    if stats.residual_norm <= tol:
        stats.iterations = max_iter
        return x, stats
    raise SolverError(
        f"no convergence after {max_iter} iterations "
        f"(residual {stats.residual_norm:.3e})"
    )
