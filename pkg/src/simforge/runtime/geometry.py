"""Domain discretization, curve/surface sampling helpers, point projection."""

from __future__ import annotations

import numpy as np

from .errors import SolverError

__all__ = ["discretize", "project_point_to_polyline"]


def discretize(lower: float, upper: float, n: int, spacing: str = "linear") -> np.ndarray:
    """n points over [lower, upper]: equal steps, or equal ratios for log.

    Endpoints are exact in both modes.
    """
    if not (np.isfinite(lower) and np.isfinite(upper)):
        raise SolverError(f"domain bounds are not finite: [{lower}, {upper}]")
    if not lower < upper:
        raise SolverError(
            f"inverted or degenerate interval [{lower:g}, {upper:g}]"
        )
    if n < 2:
        raise SolverError("domain needs at least 2 points")
    if spacing == "log":
        if lower <= 0:
            raise SolverError(
                f"log spacing requires positive bounds, got [{lower:g}, {upper:g}]"
            )
        grid = np.logspace(np.log10(lower), np.log10(upper), n)
        grid[0] = lower
        grid[-1] = upper
        return grid
    return np.linspace(lower, upper, n)


def project_point_to_polyline(
    p: tuple[float, float], vertices: np.ndarray
) -> np.ndarray:
    """Euclidean nearest point on the polyline.

    Closest among per-segment clamped projections; ties break toward the
    lowest segment index.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[0] < 2 or verts.shape[1] != 2:
        raise SolverError("polyline needs at least 2 vertices")
    point = np.asarray(p, dtype=float)

    best = verts[0]
    best_d2 = np.inf
    for a, b in zip(verts[:-1], verts[1:]):
        ab = b - a
        denom = float(ab @ ab)
        if denom == 0.0:
            candidate = a
        else:
            t = float((point - a) @ ab) / denom
            if t <= 0.0:
                candidate = a
            elif t >= 1.0:
                candidate = b
            else:
                # interior: subtract the normal component, which keeps the
                # coordinate along the segment exact (vertical/horizontal
                # constraints preserve the dragged coordinate bit-for-bit)
                normal = np.array([-ab[1], ab[0]])
                candidate = point - normal * (
                    float((point - a) @ normal) / float(normal @ normal)
                )
        d2 = float(np.sum((point - candidate) ** 2))
        if d2 < best_d2:  # strict: earlier segments win ties
            best_d2 = d2
            best = candidate
    # a point already on the polyline projects to itself exactly, without
    # picking up rounding from the parametric form
    scale = max(1.0, float(np.max(np.abs(point))))
    if np.sqrt(best_d2) <= 1e-12 * scale:
        return point.copy()
    return best
