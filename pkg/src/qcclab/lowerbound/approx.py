"""Approximate degree, dual witnesses and approximate spectral norm via LP.

Degrees are decided by the primal uniform-approximation program and
re-checked against the original constraints; witnesses come from the
dual program and are verified against all three certificate conditions.
Exact rational arithmetic below arity 6, floats with a 1e-7 tolerance
up to arity 8.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..boolfn import BooleanFunction, SymmetricSpec
from .fourier import real_spectrum
from .lp import LPError, solve_lp

ARITY_CAP = 8
EXACT_ARITY = 5
WITNESS_L1_ATOL = 1e-9
WITNESS_FOURIER_ATOL = 1e-8


def _chi(mask: int, x: int) -> int:
    return -1 if (mask & x).bit_count() % 2 else 1


def _monomials(n: int, d: int) -> list:
    return [m for m in range(1 << n) if m.bit_count() <= d]


def min_uniform_error(f: BooleanFunction, d: int, *, exact: bool | None = None):
    """Least max_x |p(x) - f(x)| over polynomials of degree <= d.

    Returns (error, coefficients as {mask: value}).
    """
    n = f.n
    if n > ARITY_CAP:
        raise ValueError(f"LP path capped at arity {ARITY_CAP}")
    if exact is None:
        exact = n <= EXACT_ARITY
    monos = _monomials(n, d)
    nm = len(monos)
    size = 1 << n
    # variables: u_S, v_S (coefficient = u - v), delta, slack per inequality
    nv = 2 * nm + 1 + 2 * size
    A = [[0] * nv for _ in range(2 * size)]
    b = []
    for x in range(size):
        for col, mask in enumerate(monos):
            chi = _chi(mask, x)
            A[2 * x][col] = chi
            A[2 * x][nm + col] = -chi
            A[2 * x + 1][col] = -chi
            A[2 * x + 1][nm + col] = chi
        A[2 * x][2 * nm] = -1
        A[2 * x + 1][2 * nm] = -1
        A[2 * x][2 * nm + 1 + 2 * x] = 1
        A[2 * x + 1][2 * nm + 1 + 2 * x + 1] = 1
        b.append(int(f.table[x]))
        b.append(-int(f.table[x]))
    c = [0] * nv
    c[2 * nm] = 1
    res = solve_lp(A, b, c, exact=exact)
    if res.status != "optimal":
        raise LPError(f"uniform-error LP ended with status {res.status}")
    coeffs = {mask: res.x[i] - res.x[nm + i] for i, mask in enumerate(monos)}
    # re-check the reported optimum against the original constraints
    worst = max(abs(sum(coeffs[mask] * _chi(mask, x) for mask in monos)
                    - int(f.table[x])) for x in range(size))
    err = res.objective
    if worst > err + (0 if exact else 1e-6):
        raise LPError(f"LP optimum {err} fails re-check (true deviation {worst})")
    return err, coeffs


def approx_degree(f: BooleanFunction, eps=Fraction(1, 3), *,
                  exact: bool | None = None) -> int:
    """Least d whose uniform-approximation program is feasible at error eps."""
    n = f.n
    if exact is None:
        exact = n <= EXACT_ARITY
    eps_cmp = Fraction(eps) if exact else float(eps)
    for d in range(n + 1):
        err, _ = min_uniform_error(f, d, exact=exact)
        if exact:
            if err <= eps_cmp:
                return d
        elif err <= float(eps_cmp) + 1e-7:
            return d
    raise LPError("no degree up to n was feasible; LP inconsistency")


@dataclass
class DualWitness:
    """Certificate that the eps-approximate degree is at least d."""

    psi: np.ndarray
    degree_floor: int
    correlation: float

    def l1(self) -> float:
        return float(np.abs(self.psi).sum())

    def low_fourier_mass(self) -> float:
        n = int(math.log2(self.psi.size))
        spec = real_spectrum(self.psi)
        masks = [m for m in range(1 << n) if m.bit_count() < self.degree_floor]
        return max((abs(spec[m]) for m in masks), default=0.0)

    def verify(self, f: BooleanFunction, eps: float = 1 / 3) -> bool:
        corr = float(np.dot(self.psi, f.table.astype(np.float64)))
        return (abs(self.l1() - 1.0) <= WITNESS_L1_ATOL
                and self.low_fourier_mass() <= WITNESS_FOURIER_ATOL
                and corr > float(eps))


def dual_witness(f: BooleanFunction, d: int, eps=Fraction(1, 3), *,
                 exact: bool | None = None) -> DualWitness | None:
    """Solve the dual program at degree floor d.

    Maximizes the correlation with f over psi with unit L1 mass and no
    Fourier weight below level d.  Returns None when the optimum does not
    exceed eps (so the degree is below d).
    """
    n = f.n
    if n > ARITY_CAP:
        raise ValueError(f"LP path capped at arity {ARITY_CAP}")
    if exact is None:
        exact = n <= EXACT_ARITY
    size = 1 << n
    low = [m for m in range(size) if m.bit_count() < d]
    # variables: psi+ then psi-
    rows = []
    rhs = []
    rows.append([1] * (2 * size))
    rhs.append(1)
    for mask in low:
        row = [_chi(mask, x) for x in range(size)]
        rows.append(row + [-v for v in row])
        rhs.append(0)
    c = [-int(f.table[x]) for x in range(size)] + \
        [int(f.table[x]) for x in range(size)]
    res = solve_lp(rows, rhs, c, exact=exact)
    if res.status != "optimal":
        raise LPError(f"dual LP ended with status {res.status}")
    value = -res.objective
    eps_cmp = Fraction(eps) if exact else float(eps) + 1e-9
    if value <= eps_cmp:
        return None
    psi = np.array([float(res.x[i]) - float(res.x[size + i])
                    for i in range(size)])
    l1 = np.abs(psi).sum()
    psi = psi / l1  # overlap between psi+ and psi- only shrinks the mass
    corr = float(np.dot(psi, f.table.astype(np.float64)))
    return DualWitness(psi, d, corr)


def approx_spectral_norm(f: BooleanFunction, eps=Fraction(1, 3), *,
                         exact: bool | None = None):
    """Minimum spectral norm of a polynomial uniformly eps-close to f."""
    n = f.n
    if n > ARITY_CAP:
        raise ValueError(f"LP path capped at arity {ARITY_CAP}")
    if exact is None:
        exact = n <= 4
    size = 1 << n
    eps_v = Fraction(eps) if exact else float(eps)
    # variables: a_S, b_S (fhat = a - b), slack per inequality
    nv = 2 * size + 2 * size
    A = [[0] * nv for _ in range(2 * size)]
    b = []
    for x in range(size):
        for mask in range(size):
            chi = _chi(mask, x)
            A[2 * x][mask] = chi
            A[2 * x][size + mask] = -chi
            A[2 * x + 1][mask] = -chi
            A[2 * x + 1][size + mask] = chi
        A[2 * x][2 * size + 2 * x] = 1
        A[2 * x + 1][2 * size + 2 * x + 1] = 1
        b.append(int(f.table[x]) + eps_v)
        b.append(-(int(f.table[x]) - eps_v))
    c = [1] * (2 * size) + [0] * (2 * size)
    res = solve_lp(A, b, c, exact=exact)
    if res.status != "optimal":
        raise LPError(f"spectral-norm LP ended with status {res.status}")
    return res.objective


# ---------------------------------------------------------------------------
# Independent oracle for symmetric functions


def _subset_minimax(points, values, subset) -> Fraction:
    """Best degree-(len(subset)-2) approximation error on the chosen points,
    by the divided-difference formula."""
    num = Fraction(0)
    den = Fraction(0)
    for i in subset:
        w = Fraction(1)
        for j in subset:
            if j != i:
                w *= points[i] - points[j]
        num += Fraction(values[i]) / w
        den += abs(Fraction(1) / w)
    return abs(num) / den


def symmetric_adeg_oracle(spec: SymmetricSpec, eps=Fraction(1, 3)) -> int:
    """Approximate degree of a symmetric function, no LP involved.

    Symmetrization reduces to univariate approximation on the weights
    0..n; the minimax error over a finite point set is the maximum of the
    divided-difference bound over all (d+2)-point subsets.
    """
    n = spec.n
    points = [Fraction(k) for k in range(n + 1)]
    values = [Fraction(int(v)) for v in spec.weight_values]
    eps = Fraction(eps)
    for d in range(n + 1):
        if d + 2 > n + 1:
            return d  # interpolation is exact
        worst = max(_subset_minimax(points, values, comb)
                    for comb in itertools.combinations(range(n + 1), d + 2))
        if worst <= eps:
            return d
    return n
