"""Self-contained two-phase primal simplex with Bland's rule.

Solves min c.x subject to A x = b, x >= 0.  Exact mode runs on rationals
(Fraction) and reports exact optima; float mode uses double precision
with a 1e-7 feasibility tolerance.  Deterministic pivoting: entering
variable is the lowest eligible index, ties in the ratio test break
toward the lowest basis index (anti-cycling).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

FLOAT_TOL = 1e-9
FEAS_TOL = 1e-7
MAX_ITERATIONS = 50_000


class LPError(RuntimeError):
    """Solver did not converge or hit its iteration limit."""


@dataclass
class LPResult:
    status: str              # "optimal" | "infeasible" | "unbounded"
    objective: object = None
    x: object = None


def solve_lp(A, b, c, *, exact: bool = False) -> LPResult:
    if exact:
        return _solve_exact([[Fraction(v) for v in row] for row in A],
                            [Fraction(v) for v in b],
                            [Fraction(v) for v in c])
    return _solve_float(np.asarray(A, dtype=np.float64),
                        np.asarray(b, dtype=np.float64),
                        np.asarray(c, dtype=np.float64))


# ---------------------------------------------------------------------------
# float path (numpy tableau)


def _solve_float(A: np.ndarray, b: np.ndarray, c: np.ndarray) -> LPResult:
    m, nv = A.shape
    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.where(flip, -b, b)

    # phase 1 tableau: [A | I | b], basis = artificials
    T = np.zeros((m + 1, nv + m + 1))
    T[:m, :nv] = A
    T[:m, nv:nv + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(nv, nv + m))
    # reduced costs for min sum(artificials)
    T[m, :nv] = -A.sum(axis=0)
    T[m, -1] = -b.sum()

    status = _iterate_float(T, basis, nv + m)
    if status == "unbounded":
        raise LPError("phase 1 unbounded (should be impossible)")
    if -T[m, -1] > FEAS_TOL:
        return LPResult("infeasible")

    # drive artificials out of the basis or drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= nv:
            pivot_col = next((j for j in range(nv) if abs(T[i, j]) > FLOAT_TOL), None)
            if pivot_col is None:
                continue  # redundant constraint
            _pivot_float(T, basis, i, pivot_col)
        keep.append(i)
    if len(keep) < m:
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[i] for i in keep]
        m = len(keep)

    # phase 2: drop artificial columns, rebuild objective row
    T2 = np.zeros((m + 1, nv + 1))
    T2[:m, :nv] = T[:m, :nv]
    T2[:m, -1] = T[:m, -1]
    cb = c[basis]
    T2[m, :nv] = c - cb @ T2[:m, :nv]
    T2[m, -1] = -cb @ T2[:m, -1]

    status = _iterate_float(T2, basis, nv)
    if status == "unbounded":
        return LPResult("unbounded")
    x = np.zeros(nv)
    for i, bv in enumerate(basis):
        if bv < nv:
            x[bv] = T2[i, -1]
    return LPResult("optimal", float(-T2[m, -1]), x)


def _iterate_float(T: np.ndarray, basis: list, ncols: int) -> str:
    m = T.shape[0] - 1
    for _ in range(MAX_ITERATIONS):
        negs = np.nonzero(T[m, :ncols] < -FLOAT_TOL)[0]
        if negs.size == 0:
            return "optimal"
        enter = int(negs[0])  # Bland
        col = T[:m, enter]
        rows = np.nonzero(col > FLOAT_TOL)[0]
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + FLOAT_TOL]
        leave = min(tied, key=lambda i: basis[i])
        _pivot_float(T, basis, int(leave), enter)
    raise LPError("simplex iteration limit reached")


def _pivot_float(T: np.ndarray, basis: list, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


# ---------------------------------------------------------------------------
# exact path (Fraction tableau)


def _solve_exact(A: list, b: list, c: list) -> LPResult:
    m = len(A)
    nv = len(c)
    zero = Fraction(0)
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    T = [A[i] + [Fraction(1) if j == i else zero for j in range(m)] + [b[i]]
         for i in range(m)]
    obj = [-sum(T[i][j] for i in range(m)) for j in range(nv)] + \
          [zero] * m + [-sum(b)]
    T.append(obj)
    basis = list(range(nv, nv + m))

    status = _iterate_exact(T, basis, nv + m)
    if status == "unbounded":
        raise LPError("phase 1 unbounded (should be impossible)")
    if -T[m][-1] > 0:
        return LPResult("infeasible")

    keep = []
    for i in range(m):
        if basis[i] >= nv:
            pivot_col = next((j for j in range(nv) if T[i][j] != 0), None)
            if pivot_col is None:
                continue
            _pivot_exact(T, basis, i, pivot_col)
        keep.append(i)
    if len(keep) < m:
        T = [T[i] for i in keep] + [T[-1]]
        basis = [basis[i] for i in keep]
        m = len(keep)

    T2 = [T[i][:nv] + [T[i][-1]] for i in range(m)]
    obj = list(c)
    rhs = zero
    for i in range(m):
        cb = c[basis[i]]
        if cb != 0:
            obj = [o - cb * t for o, t in zip(obj, T2[i][:nv])]
            rhs -= cb * T2[i][-1]
    T2.append(obj + [rhs])

    status = _iterate_exact(T2, basis, nv)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [zero] * nv
    for i, bv in enumerate(basis):
        if bv < nv:
            x[bv] = T2[i][-1]
    return LPResult("optimal", -T2[m][-1], x)


def _iterate_exact(T: list, basis: list, ncols: int) -> str:
    m = len(T) - 1
    for _ in range(MAX_ITERATIONS):
        enter = next((j for j in range(ncols) if T[m][j] < 0), None)
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot_exact(T, basis, leave, enter)
    raise LPError("simplex iteration limit reached")


def _pivot_exact(T: list, basis: list, row: int, col: int) -> None:
    piv = T[row][col]
    T[row] = [v / piv for v in T[row]]
    for r in range(len(T)):
        if r != row and T[r][col] != 0:
            f = T[r][col]
            T[r] = [a - f * p for a, p in zip(T[r], T[row])]
    basis[row] = col
