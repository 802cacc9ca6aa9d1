"""Adaptive embedded Runge-Kutta 5(4) integrator with dense output.

Dormand-Prince coefficients; the free quartic interpolant evaluates the
solution at every requested grid point without constraining step placement.
Supports both integration directions and a fixed-step mode used by the
order-verification tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SolverError

__all__ = ["OdeStats", "integrate_rk45"]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
    ]
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b - b_hat: weights of the embedded 4th-order error estimate
_E = np.array(
    [
        71 / 57600,
        0.0,
        -71 / 16695,
        71 / 1920,
        -17253 / 339200,
        22 / 525,
        -1 / 40,
    ]
)
# dense-output polynomial: y(t+theta*h) = y + h * K^T P [theta..theta^4]
_P = np.array(
    [
        [
            1.0,
            -8048581381 / 2820520608,
            8663915743 / 2820520608,
            -12715105075 / 11282082432,
        ],
        [0.0, 0.0, 0.0, 0.0],
        [
            0.0,
            131558114200 / 32700410799,
            -68118460800 / 10900136933,
            87487479700 / 32700410799,
        ],
        [
            0.0,
            -1754552775 / 470086768,
            14199869525 / 1410260304,
            -10690763975 / 1880347072,
        ],
        [
            0.0,
            127303824393 / 49829197408,
            -318862633887 / 49829197408,
            701980252875 / 199316789632,
        ],
        [
            0.0,
            -282668133 / 205662961,
            2019193451 / 616988883,
            -1453857185 / 822651844,
        ],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass
class OdeStats:
    n_steps: int = 0
    n_rhs_evals: int = 0
    n_rejected: int = 0
    status: str = "ok"  # ok | max_steps | step_underflow
    reached_t: float = 0.0

    def to_dict(self) -> dict:
        return {
            "steps": self.n_steps,
            "rhsEvals": self.n_rhs_evals,
            "rejected": self.n_rejected,
            "status": self.status,
            "reachedT": self.reached_t,
        }


def integrate_rk45(
    f: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_grid: np.ndarray,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-10,
    max_steps: int = 200_000,
    fixed_step: float | None = None,
) -> tuple[np.ndarray, OdeStats]:
    """Integrate y' = f(t, y) from t_grid[0], sampling at every grid point.

    The grid must be strictly monotone (either direction).  On failure the
    remaining rows are NaN and stats.status says why; callers decide whether
    partial results are acceptable.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    n = y0.size
    if t_grid.ndim != 1 or t_grid.size < 2:
        raise SolverError("time grid must hold at least 2 points")
    direction = 1.0 if t_grid[-1] > t_grid[0] else -1.0
    if np.any(np.diff(t_grid) * direction <= 0):
        raise SolverError("time grid must be strictly monotone")
    if not np.all(np.isfinite(y0)):
        raise SolverError("initial condition is not finite")

    t0, t_end = float(t_grid[0]), float(t_grid[-1])
    out = np.full((t_grid.size, n), np.nan)
    out[0] = y0
    stats = OdeStats(reached_t=t0)

    t = t0
    y = y0.copy()
    k1 = np.asarray(f(t, y), dtype=float)
    stats.n_rhs_evals += 1
    if k1.shape != y.shape:
        raise SolverError(
            f"rhs returned shape {k1.shape}, expected {y.shape}"
        )

    if fixed_step is not None:
        h = abs(float(fixed_step)) * direction
        if h == 0:
            raise SolverError("fixed step must be nonzero")
    else:
        h = _initial_step(f, t, y, k1, direction, rel_tol, abs_tol, t_end, stats)

    K = np.empty((7, n))
    next_out = 1  # first grid index not yet filled

    while (t - t_end) * direction < 0:
        if stats.n_steps >= max_steps:
            stats.status = "max_steps"
            break
        h_min = 16 * abs(np.spacing(t))
        if abs(h) < h_min:
            stats.status = "step_underflow"
            break
        if fixed_step is None:
            # never step past the end
            if (t + h - t_end) * direction > 0:
                h = t_end - t
        else:
            if (t + h - t_end) * direction > 0:
                h = t_end - t

        K[0] = k1
        for s in range(1, 6):
            ts = t + _C[s] * h
            ys = y + h * (_A[s, :s] @ K[:s])
            K[s] = f(ts, ys)
        y_new = y + h * (_B[:6] @ K[:6])
        t_new = t + h
        k7 = np.asarray(f(t_new, y_new), dtype=float)
        K[6] = k7
        stats.n_rhs_evals += 6

        if not np.all(np.isfinite(y_new)):
            stats.status = "step_underflow"
            break

        if fixed_step is None:
            scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean(((h * (_E @ K)) / scale) ** 2)))
            if err > 1.0:
                stats.n_rejected += 1
                h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
                continue
            factor = _MAX_FACTOR if err == 0 else min(
                _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            )
        else:
            factor = 1.0

        # dense output for every grid point inside (t, t_new]
        while next_out < t_grid.size and (t_grid[next_out] - t_new) * direction <= 0:
            s = t_grid[next_out]
            if s == t_new:
                out[next_out] = y_new
            else:
                theta = (s - t) / h
                powers = np.array([theta, theta**2, theta**3, theta**4])
                out[next_out] = y + h * (K.T @ (_P @ powers))
            next_out += 1

        stats.n_steps += 1
        t, y, k1 = t_new, y_new, k7
        stats.reached_t = t
        if fixed_step is None:
            h *= factor

    if stats.status == "ok" and next_out < t_grid.size:
        stats.status = "max_steps"
    return out, stats


def _initial_step(f, t0, y0, f0, direction, rel_tol, abs_tol, t_end, stats) -> float:
    """Hairer-Norsett-Wanner starting step heuristic."""
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = float(np.sqrt(np.mean((y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1

    y1 = y0 + h0 * direction * f0
    f1 = np.asarray(f(t0 + h0 * direction, y1), dtype=float)
    stats.n_rhs_evals += 1
    d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0

    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    h = min(100 * h0, h1, abs(t_end - t0))
    return h * direction
