"""Dense two-phase primal simplex with Bland's rule.

Solves  min c @ z  subject to  A @ z <= b,  z >= 0.

Bland's entering/leaving rule guarantees termination (no cycling); the
problem sizes here are a few hundred constraints, so the dense tableau is
fine. Phase 1 introduces artificial variables only on rows whose rhs is
negative after adding slacks.
"""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, InfeasibleRegionError, UnboundedRegionError

_TOL = 1e-9


def solve_lp(
    c: np.ndarray, a_ub: np.ndarray, b_ub: np.ndarray, max_pivots: int | None = None
) -> tuple[np.ndarray, float]:
    """Return (z, objective) minimizing c @ z with A z <= b, z >= 0."""
    a = np.asarray(a_ub, dtype=float)
    b = np.asarray(b_ub, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = a.shape
    if max_pivots is None:
        max_pivots = 2000 + 200 * (m + n)

    # slack per row; rows with b < 0 are flipped, their slack becomes -1 and
    # an artificial basic variable is added instead
    flip = b < 0.0
    a = np.where(flip[:, None], -a, a)
    b = np.where(flip, -b, b)
    slack = np.where(flip, -1.0, 1.0)
    art_rows = np.flatnonzero(flip)
    n_art = art_rows.size
    total = n + m + n_art

    tableau = np.zeros((m + 1, total + 1))
    tableau[:m, :n] = a
    tableau[np.arange(m), n + np.arange(m)] = slack
    basis = n + np.arange(m)
    for k, i in enumerate(art_rows):
        col = n + m + k
        tableau[i, col] = 1.0
        basis[i] = col
    tableau[:m, -1] = b

    if n_art:
        # phase 1: minimize the sum of artificials
        obj = np.zeros(total + 1)
        obj[n + m :] = 1.0  # last column stays 0
        obj[-1] = 0.0
        for i in art_rows:
            obj -= tableau[i]
        tableau[-1] = obj
        _pivot_until_optimal(tableau, basis, max_pivots)
        if tableau[-1, -1] < -1e-8 * max(1.0, float(np.abs(b).max())):
            raise InfeasibleRegionError(
                f"phase-1 objective {-tableau[-1, -1]:.3e} > 0"
            )
        tableau, basis, total = _drop_artificials(tableau, basis, n, m)

    # phase 2: restore the real objective in reduced-cost form
    obj = np.zeros(total + 1)
    obj[:n] = c
    for r, col in enumerate(basis):
        if col < n and c[col] != 0.0:
            obj -= c[col] * tableau[r]
    tableau[-1] = obj
    _pivot_until_optimal(tableau, basis, max_pivots)

    z = np.zeros(total)
    z[basis] = tableau[:-1, -1]
    z_orig = z[:n]
    return z_orig, float(c @ z_orig)


def _pivot_until_optimal(tableau: np.ndarray, basis: np.ndarray, max_pivots: int):
    m = tableau.shape[0] - 1
    for _ in range(max_pivots):
        costs = tableau[-1, :-1]
        entering_candidates = np.flatnonzero(costs < -_TOL)
        if entering_candidates.size == 0:
            return
        j = int(entering_candidates[0])  # Bland: lowest variable index
        col = tableau[:m, j]
        rows = np.flatnonzero(col > _TOL)
        if rows.size == 0:
            raise UnboundedRegionError(f"column {j} unbounded below")
        ratios = tableau[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + _TOL * (1.0 + abs(best))]
        i = int(tied[np.argmin(basis[tied])])  # Bland: lowest basis variable
        _pivot(tableau, i, j)
        basis[i] = j
    raise ConvergenceError(f"simplex exceeded {max_pivots} pivots")


def _pivot(tableau: np.ndarray, row: int, col: int):
    tableau[row] /= tableau[row, col]
    piv = tableau[row]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, piv)
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0


def _drop_artificials(tableau, basis, n, m):
    """Pivot basic artificials out (or drop redundant rows), cut art columns."""
    total = tableau.shape[1] - 1
    art_start = n + m
    drop_rows = []
    for r in range(m):
        if basis[r] >= art_start:
            pivot_cols = np.flatnonzero(np.abs(tableau[r, :art_start]) > _TOL)
            if pivot_cols.size:
                j = int(pivot_cols[0])
                _pivot(tableau, r, j)
                basis[r] = j
            else:
                drop_rows.append(r)  # redundant constraint
    keep_rows = [r for r in range(m) if r not in drop_rows] + [m]
    keep_cols = list(range(art_start)) + [total]
    reduced = tableau[np.ix_(keep_rows, keep_cols)].copy()
    new_basis = np.array([basis[r] for r in range(m) if r not in drop_rows])
    return reduced, new_basis, art_start
