"""Self-contained dense two-phase simplex solver.

Solves  min c.x  subject to  a_ub.x <= b_ub,  a_eq.x = b_eq,  x >= 0.
Phase 1 drives artificial variables out of the basis when the slack
basis is not feasible; phase 2 optimizes the original objective.
Dantzig pricing with a switch to Bland's rule guards against cycling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LpResult", "solve_lp"]

_TOL = 1e-9


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration limit"
    x: np.ndarray | None
    objective: float | None
    duals_ub: np.ndarray | None
    duals_eq: np.ndarray | None
    iterations: int


def _pivot(tab: np.ndarray, z: np.ndarray, basis: np.ndarray, row: int, col: int):
    piv = tab[row, col]
    tab[row] /= piv
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            tab[i] -= tab[i, col] * tab[row]
    if z[col] != 0.0:
        z -= z[col] * tab[row]
    basis[row] = col


def _iterate(
    tab: np.ndarray,
    z: np.ndarray,
    basis: np.ndarray,
    ncols: int,
    maxiter: int,
    blocked=None,
) -> tuple[str, int]:
    """Runs pivots until optimality; z holds reduced costs (z_j - c_j) and
    the running objective in its last slot.  blocked columns never enter."""
    it = 0
    bland_after = max(200, 10 * tab.shape[0])
    while it < maxiter:
        cand = z[:ncols].copy()
        if blocked is not None:
            cand[blocked] = -np.inf
        if it < bland_after:
            col = int(np.argmax(cand))
            if cand[col] <= _TOL:
                return "optimal", it
        else:  # Bland: first improving column
            pos = np.flatnonzero(cand > _TOL)
            if pos.size == 0:
                return "optimal", it
            col = int(pos[0])
        ratios = np.full(tab.shape[0], np.inf)
        positive = tab[:, col] > _TOL
        ratios[positive] = tab[positive, -1] / tab[positive, col]
        row = int(np.argmin(ratios))
        if not np.isfinite(ratios[row]):
            return "unbounded", it
        if it >= bland_after:  # smallest basis index among ties
            tie = np.flatnonzero(np.isclose(ratios, ratios[row], rtol=0, atol=1e-12))
            row = int(tie[np.argmin(basis[tie])])
        _pivot(tab, z, basis, row, col)
        it += 1
    return "iteration limit", it


def solve_lp(
    c,
    a_ub=None,
    b_ub=None,
    a_eq=None,
    b_eq=None,
    maxiter: int = 50_000,
) -> LpResult:
    c = np.asarray(c, dtype=float).reshape(-1)
    nvar = c.size
    a_ub = np.zeros((0, nvar)) if a_ub is None else np.atleast_2d(np.asarray(a_ub, float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, float).reshape(-1)
    a_eq = np.zeros((0, nvar)) if a_eq is None else np.atleast_2d(np.asarray(a_eq, float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, float).reshape(-1)
    n_ub, n_eq = a_ub.shape[0], a_eq.shape[0]
    nrows = n_ub + n_eq
    if nrows == 0:
        if np.all(c >= -_TOL):
            return LpResult("optimal", np.zeros(nvar), 0.0, np.zeros(0), np.zeros(0), 0)
        return LpResult("unbounded", None, None, None, None, 0)

    # standard form: slack for every <= row, then sign-flip rows with b < 0
    a = np.hstack([np.vstack([a_ub, a_eq]), np.vstack([np.eye(n_ub), np.zeros((n_eq, n_ub))])])
    b = np.concatenate([b_ub, b_eq])
    flipped = b < 0
    a[flipped] *= -1.0
    b[flipped] *= -1.0
    nstruct = nvar + n_ub

    # artificials: any flipped <= row (its slack is now -1) and every eq row
    need_art = np.concatenate([flipped[:n_ub], np.ones(n_eq, dtype=bool)])
    art_rows = np.flatnonzero(need_art)
    nart = art_rows.size
    art_block = np.zeros((nrows, nart))
    art_block[art_rows, np.arange(nart)] = 1.0

    tab = np.hstack([a, art_block, b[:, None]])
    ncols = nstruct + nart
    basis = np.empty(nrows, dtype=int)
    basis[~need_art] = nvar + np.flatnonzero(~need_art[:n_ub])  # clean slack rows
    basis[art_rows] = nstruct + np.arange(nart)

    total_it = 0
    if nart:
        # phase 1: minimize the sum of artificials
        cost1 = np.zeros(ncols)
        cost1[nstruct:] = 1.0
        z = np.concatenate([-cost1, [0.0]])
        for i in art_rows:
            z += np.concatenate([tab[i, :ncols], [tab[i, -1]]])
        status, it = _iterate(tab, z, basis, ncols, maxiter)
        total_it += it
        if status != "optimal":
            return LpResult(status, None, None, None, None, total_it)
        if z[-1] > 1e-7 * max(1.0, np.max(np.abs(b)) if b.size else 1.0):
            return LpResult("infeasible", None, None, None, None, total_it)
        # kick residual artificials out of the basis where possible
        for row in np.flatnonzero(basis >= nstruct):
            cols = np.flatnonzero(np.abs(tab[row, :nstruct]) > _TOL)
            if cols.size:
                _pivot(tab, z, basis, int(row), int(cols[0]))

    # phase 2
    cost2 = np.zeros(ncols)
    cost2[:nvar] = c
    zb = np.zeros(ncols + 1)
    zb[:ncols] = -cost2
    for row, bi in enumerate(basis):
        if cost2[bi] != 0.0:
            zb += cost2[bi] * np.concatenate([tab[row, :ncols], [tab[row, -1]]])
    art_cols = np.arange(nstruct, ncols)
    status, it = _iterate(tab, zb, basis, ncols, maxiter, blocked=art_cols)
    total_it += it
    if status != "optimal":
        return LpResult(status, None, None, None, None, total_it)

    x = np.zeros(ncols)
    x[basis] = tab[:, -1]
    # duals from the basis: solve B^T y = c_B on the unflipped system
    full = np.hstack([a, art_block])
    bmat = full[:, basis]
    try:
        y = np.linalg.solve(bmat.T, cost2[basis])
    except np.linalg.LinAlgError:
        y = np.full(nrows, np.nan)
    y[flipped] *= -1.0
    return LpResult(
        status="optimal",
        x=x[:nvar],
        objective=float(cost2[:nvar] @ x[:nvar]),
        duals_ub=y[:n_ub],
        duals_eq=y[n_ub:],
        iterations=total_it,
    )
