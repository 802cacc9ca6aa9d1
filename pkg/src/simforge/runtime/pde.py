"""Finite-difference solver for stationary diffusion problems on rectangles.

Discretizes  -div(P grad u) + c u = f  on a tensor grid with second-order
central differences (harmonic-free arithmetic-mean coefficients, nine-point
coupling when P has off-diagonal terms).  Dirichlet rows are eliminated to
identity rows; Neumann conditions use a second-order one-sided stencil for
the outward normal derivative.  The sparse system is solved directly.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SolverError

__all__ = ["solve_pde_rect_grid"]

_EDGES = ("left", "right", "bottom", "top")


def solve_pde_rect_grid(
    xs: np.ndarray,
    ys: np.ndarray,
    p11: np.ndarray,
    p12: np.ndarray,
    p22: np.ndarray,
    c: np.ndarray,
    f: np.ndarray,
    boundary: dict[str, tuple[str, np.ndarray]],
) -> tuple[np.ndarray, list[str]]:
    """Solve on the full grid including boundary nodes.

    Coefficient arrays are nodal values of shape (nx, ny); boundary maps each
    edge to (kind, values-along-edge) with kind "dirichlet" (value) or
    "neumann" (outward normal derivative).  Returns (u, warnings).
    """
    nx, ny = xs.size, ys.size
    if nx < 3 or ny < 3:
        raise SolverError("PDE grid needs at least 3 points per axis")
    for edge in _EDGES:
        if edge not in boundary:
            raise SolverError(f"missing boundary condition for edge {edge!r}")
    hx = float(xs[1] - xs[0])
    hy = float(ys[1] - ys[0])

    warnings: list[str] = []
    det = p11 * p22 - p12 * p12
    bad = (p11 <= 0) | (p22 <= 0) | (det <= 0)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise SolverError(
            f"diffusion matrix is not positive definite at grid point "
            f"({xs[i]:g}, {ys[j]:g})"
        )
    if np.any(c < 0):
        warnings.append("absorption coefficient is negative somewhere on the grid")

    n = nx * ny

    def k(i, j):
        return i * ny + j

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    rhs = np.zeros(n)

    # interior stencil, vectorized over all interior nodes
    ii, jj = np.meshgrid(np.arange(1, nx - 1), np.arange(1, ny - 1), indexing="ij")
    ii = ii.ravel()
    jj = jj.ravel()
    center = k(ii, jj)

    pe = 0.5 * (p11[ii, jj] + p11[ii + 1, jj]) / hx**2
    pw = 0.5 * (p11[ii, jj] + p11[ii - 1, jj]) / hx**2
    pn = 0.5 * (p22[ii, jj] + p22[ii, jj + 1]) / hy**2
    ps = 0.5 * (p22[ii, jj] + p22[ii, jj - 1]) / hy**2

    def add(r, cidx, v):
        rows.append(r)
        cols.append(cidx)
        vals.append(v)

    add(center, center, pe + pw + pn + ps + c[ii, jj])
    add(center, k(ii + 1, jj), -pe)
    add(center, k(ii - 1, jj), -pw)
    add(center, k(ii, jj + 1), -pn)
    add(center, k(ii, jj - 1), -ps)

    if np.any(p12 != 0):
        # -d/dx(p12 du/dy) - d/dy(p12 du/dx), central differences
        q = 1.0 / (4 * hx * hy)
        add(center, k(ii + 1, jj + 1), -(p12[ii + 1, jj] + p12[ii, jj + 1]) * q)
        add(center, k(ii + 1, jj - 1), (p12[ii + 1, jj] + p12[ii, jj - 1]) * q)
        add(center, k(ii - 1, jj + 1), (p12[ii - 1, jj] + p12[ii, jj + 1]) * q)
        add(center, k(ii - 1, jj - 1), -(p12[ii - 1, jj] + p12[ii, jj - 1]) * q)

    rhs[center] = f[ii, jj]

    # boundary rows; Dirichlet edges own their corners, ties to left/right
    def edge_nodes(edge: str) -> tuple[np.ndarray, np.ndarray]:
        if edge == "left":
            return np.zeros(ny, dtype=int), np.arange(ny)
        if edge == "right":
            return np.full(ny, nx - 1), np.arange(ny)
        if edge == "bottom":
            return np.arange(nx), np.zeros(nx, dtype=int)
        return np.arange(nx), np.full(nx, ny - 1)

    # corner ownership: Dirichlet edges beat Neumann ones; within the same
    # kind left/right beat bottom/top
    e_index = {edge: i for i, edge in enumerate(_EDGES)}
    owner = -np.ones((nx, ny), dtype=int)
    for pass_kind in ("neumann", "dirichlet"):
        for edge in ("top", "bottom", "right", "left"):
            if boundary[edge][0] == pass_kind:
                ei, ej = edge_nodes(edge)
                owner[ei, ej] = e_index[edge]

    for edge in _EDGES:
        kind, values = boundary[edge]
        ei, ej = edge_nodes(edge)
        values = np.broadcast_to(np.asarray(values, dtype=float), ei.shape)
        mine = owner[ei, ej] == e_index[edge]
        ei, ej, values = ei[mine], ej[mine], values[mine]
        idx = k(ei, ej)
        if kind == "dirichlet":
            add(idx, idx, np.ones(idx.size))
            rhs[idx] = values
        else:
            if edge == "left":
                s1, s2, h = k(ei + 1, ej), k(ei + 2, ej), hx
            elif edge == "right":
                s1, s2, h = k(ei - 1, ej), k(ei - 2, ej), hx
            elif edge == "bottom":
                s1, s2, h = k(ei, ej + 1), k(ei, ej + 2), hy
            else:
                s1, s2, h = k(ei, ej - 1), k(ei, ej - 2), hy
            # outward normal derivative: (3 u0 - 4 u1 + u2) / (2h) = g
            add(idx, idx, np.full(idx.size, 3.0 / (2 * h)))
            add(idx, s1, np.full(idx.size, -4.0 / (2 * h)))
            add(idx, s2, np.full(idx.size, 1.0 / (2 * h)))
            rhs[idx] = values

    matrix = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )
    import warnings as _warnings

    with _warnings.catch_warnings():
        _warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            u = spla.spsolve(matrix, rhs)
        except (spla.MatrixRankWarning, RuntimeError):
            raise SolverError("singular linear system (check boundary conditions)") from None
    if not np.all(np.isfinite(u)):
        raise SolverError("singular linear system (check boundary conditions)")
    return u.reshape(nx, ny), warnings
