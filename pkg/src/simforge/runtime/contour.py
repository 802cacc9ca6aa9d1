"""Marching-squares extraction of the zero level set of a gridded field.

Each grid cell contributes 0, 1 or 2 straight segments whose endpoints are
linear interpolations along cell edges; ambiguous saddle cells are resolved
by the sign of the cell-center average.  Segment direction is consistent
within a cell (the positive region stays on the same side).
"""

from __future__ import annotations

import numpy as np

__all__ = ["trace_implicit_grid"]

# segment endpoints per sign case, keyed by edge name; complements of cases
# 1..7 are the same edges traversed in reverse
_BASE_CASES: dict[int, list[tuple[str, str]]] = {
    0: [],
    1: [("W", "S")],
    2: [("S", "E")],
    3: [("W", "E")],
    4: [("E", "N")],
    6: [("S", "N")],
    7: [("W", "N")],
}


def trace_implicit_grid(
    xs: np.ndarray, ys: np.ndarray, f_grid: np.ndarray
) -> list[np.ndarray]:
    """Zero-contour segments of f sampled on the tensor grid xs x ys.

    f_grid[i, j] = f(xs[i], ys[j]).  Returns a list of (2, 2) arrays
    [[x_a, y_a], [x_b, y_b]]; empty when f never changes sign.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    f = np.asarray(f_grid, dtype=float)
    if f.shape != (xs.size, ys.size):
        raise ValueError(
            f"field shape {f.shape} does not match grid {(xs.size, ys.size)}"
        )

    pos = f > 0
    segments: list[np.ndarray] = []

    # cells with any sign change, in deterministic scan order
    change = (
        (pos[:-1, :-1] != pos[1:, :-1])
        | (pos[:-1, :-1] != pos[:-1, 1:])
        | (pos[:-1, :-1] != pos[1:, 1:])
    )
    for i, j in zip(*np.nonzero(change)):
        fa, fb = f[i, j], f[i + 1, j]
        fc, fd = f[i + 1, j + 1], f[i, j + 1]
        case = (
            (1 if fa > 0 else 0)
            | (2 if fb > 0 else 0)
            | (4 if fc > 0 else 0)
            | (8 if fd > 0 else 0)
        )
        if case in (0, 15):
            continue

        x0, x1 = xs[i], xs[i + 1]
        y0, y1 = ys[j], ys[j + 1]

        def edge_point(edge: str) -> np.ndarray:
            if edge == "S":
                return _interp((x0, y0), (x1, y0), fa, fb)
            if edge == "E":
                return _interp((x1, y0), (x1, y1), fb, fc)
            if edge == "N":
                return _interp((x0, y1), (x1, y1), fd, fc)
            return _interp((x0, y0), (x0, y1), fa, fd)  # W

        if case == 5 or case == 10:
            center_positive = (fa + fb + fc + fd) > 0
            if case == 5:
                pairs = (
                    [("W", "N"), ("E", "S")]
                    if center_positive
                    else [("W", "S"), ("E", "N")]
                )
            else:
                pairs = (
                    [("S", "W"), ("N", "E")]
                    if center_positive
                    else [("S", "E"), ("N", "W")]
                )
        elif case in _BASE_CASES:
            pairs = _BASE_CASES[case]
        else:
            pairs = [(b, a) for (a, b) in _BASE_CASES[15 - case]]

        for e1, e2 in pairs:
            segments.append(np.array([edge_point(e1), edge_point(e2)]))

    return segments


def _interp(pa: tuple, pb: tuple, fa: float, fb: float) -> np.ndarray:
    # fa and fb bracket zero (or fa is exactly zero)
    t = fa / (fa - fb)
    return np.array(
        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
    )
