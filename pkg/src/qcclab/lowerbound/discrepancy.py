"""Discrepancy, balanced distributions, the correlated-distribution
construction, the XOR lemma check and the generalized-discrepancy bound.

Rectangle maxima are exact: subsets of the smaller side are enumerated
(Gray-code incremental sums) while the other side is optimized by signed
column aggregation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..boolfn import BooleanFunction, Gadget

SUBSET_SIDE_CAP = 20  # enumerating 2^cap subsets is the hard limit
BALANCE_ATOL = 1e-12


@dataclass(frozen=True)
class Distribution:
    """Probability weights over {-1,+1}^nbits under the global index order."""

    nbits: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).copy()
        if w.shape != (1 << self.nbits,):
            raise ValueError("weight count must be 2^nbits")
        if np.any(w < -1e-15):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > BALANCE_ATOL:
            raise ValueError(f"weights sum to {w.sum()}, not 1 within 1e-12")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)


def uniform_distribution(nbits: int) -> Distribution:
    size = 1 << nbits
    return Distribution(nbits, np.full(size, 1.0 / size))


def is_balanced(mu: Distribution, G: Gadget) -> bool:
    """Whether sum G(x,y) mu(x,y) vanishes (within 1e-12)."""
    if mu.nbits != G.j + G.k:
        raise ValueError("distribution shape does not match the gadget")
    return abs(float(np.dot(G.table.astype(np.float64), mu.weights))) <= BALANCE_ATOL


def _weighted_matrix(G: Gadget, lam: Distribution) -> np.ndarray:
    if lam.nbits != G.j + G.k:
        raise ValueError("distribution shape does not match the gadget")
    return (G.table * lam.weights).reshape(1 << G.j, 1 << G.k)


def _rectangle_max(M: np.ndarray) -> float:
    """max over row subsets S, column subsets T of |sum of M over S x T|."""
    rows, cols = M.shape
    transposed = False
    if rows > cols:
        M = M.T
        rows, cols = cols, rows
        transposed = True
    if rows > SUBSET_SIDE_CAP:
        raise ValueError(
            f"subset enumeration over {rows} rows exceeds the 2^{SUBSET_SIDE_CAP} cap")
    best = 0.0
    colsum = np.zeros(cols)
    prev_gray = 0
    # Gray-code walk over row subsets; one row toggles per step
    for g in range(1, 1 << rows):
        gray = g ^ (g >> 1)
        changed = gray ^ prev_gray
        idx = changed.bit_length() - 1
        if gray & changed:
            colsum += M[idx]
        else:
            colsum -= M[idx]
        prev_gray = gray
        pos = colsum[colsum > 0].sum()
        neg = -colsum[colsum < 0].sum()
        best = max(best, pos, neg)
    return float(best)


def discrepancy(G: Gadget, lam: Distribution) -> float:
    """Exact disc_lambda(G): maximum weighted rectangle imbalance."""
    return _rectangle_max(_weighted_matrix(G, lam))


def naive_discrepancy(G: Gadget, lam: Distribution) -> float:
    """Independent all-rectangles double enumeration (small gadgets only)."""
    M = _weighted_matrix(G, lam)
    rows, cols = M.shape
    if rows > 16 or cols > 16:
        raise ValueError("naive enumeration limited to 16 rows/columns")
    row_masks = np.array([[(s >> r) & 1 for r in range(rows)]
                          for s in range(1 << rows)], dtype=np.float64)
    col_masks = np.array([[(s >> c) & 1 for c in range(cols)]
                          for s in range(1 << cols)], dtype=np.float64)
    vals = row_masks @ M @ col_masks.T
    return float(np.abs(vals).max())


def correlation(F: np.ndarray, H: np.ndarray, lam: Distribution) -> float:
    """sum F(x) H(x) lam(x) over the joint space."""
    return float(np.sum(np.asarray(F, dtype=np.float64)
                        * np.asarray(H, dtype=np.float64) * lam.weights))


def product_distribution(mu: Distribution, n: int, a: int, b: int) -> Distribution:
    """mu^{tensor n} on n blocks of (a + b) bits, in composed-table layout
    (all Alice blocks first, then all Bob blocks)."""
    if mu.nbits != a + b:
        raise ValueError("block distribution shape mismatch")
    total_bits = n * (a + b)
    size = 1 << total_bits
    idx = np.arange(size, dtype=np.int64)
    Y = idx & ((1 << (n * b)) - 1)
    X = idx >> (n * b)
    w = np.ones(size, dtype=np.float64)
    for i in range(n):
        xb = (X >> ((n - 1 - i) * a)) & ((1 << a) - 1)
        yb = (Y >> ((n - 1 - i) * b)) & ((1 << b) - 1)
        w *= mu.weights[(xb << b) | yb]
    return Distribution(total_bits, w)


def lambda_construct(nu: Distribution, mu: Distribution, G: Gadget,
                     n: int) -> Distribution:
    """lambda(X,Y) = 2^n nu(G(X,Y)) prod_i mu(X_i, Y_i).

    Requires mu balanced for G; the G-marginal of the result equals nu.
    """
    if nu.nbits != n:
        raise ValueError("nu must live on n bits")
    if not is_balanced(mu, G):
        raise ValueError("mu is not balanced with respect to G")
    a, b = G.j, G.k
    total_bits = n * (a + b)
    size = 1 << total_bits
    idx = np.arange(size, dtype=np.int64)
    Y = idx & ((1 << (n * b)) - 1)
    X = idx >> (n * b)
    w = np.full(size, float(1 << n), dtype=np.float64)
    zidx = np.zeros(size, dtype=np.int64)
    for i in range(n):
        xb = (X >> ((n - 1 - i) * a)) & ((1 << a) - 1)
        yb = (Y >> ((n - 1 - i) * b)) & ((1 << b) - 1)
        sub = (xb << b) | yb
        w *= mu.weights[sub]
        zidx = (zidx << 1) | (G.table[sub] == -1)
    w *= nu.weights[zidx]
    return Distribution(total_bits, w)


def g_marginal(lam: Distribution, G: Gadget, n: int) -> np.ndarray:
    """Push-forward of lambda through z = (G(X_1,Y_1), ..., G(X_n,Y_n))."""
    a, b = G.j, G.k
    size = 1 << lam.nbits
    idx = np.arange(size, dtype=np.int64)
    Y = idx & ((1 << (n * b)) - 1)
    X = idx >> (n * b)
    zidx = np.zeros(size, dtype=np.int64)
    for i in range(n):
        xb = (X >> ((n - 1 - i) * a)) & ((1 << a) - 1)
        yb = (Y >> ((n - 1 - i) * b)) & ((1 << b) - 1)
        zidx = (zidx << 1) | (G.table[(xb << b) | yb] == -1)
    out = np.zeros(1 << n)
    np.add.at(out, zidx, lam.weights)
    return out


def xor_lemma_check(P: Gadget, mu: Distribution, k: int):
    """disc over mu^{tensor k} of PARITY_k o P versus (8 disc_mu(P))^k.

    Returns (lhs, rhs, holds); both sides computed exactly by rectangle
    enumeration.
    """
    from ..boolfn import gadget_library
    parity = gadget_library("parity", k)
    composed = _compose_for_xor(parity, P)
    lam = product_distribution(mu, k, P.j, P.k)
    lhs = discrepancy(composed, lam)
    rhs = (8.0 * discrepancy(P, mu)) ** k
    return lhs, rhs, lhs <= rhs + 1e-12


def _compose_for_xor(f: BooleanFunction, P: Gadget) -> Gadget:
    from ..boolfn import compose
    return compose(f, P)


def gdm_bound(delta: float, eps: float, disc_value: float) -> float:
    """log2((delta + 2 eps - 1) / disc): the generalized-discrepancy argument."""
    num = delta + 2.0 * eps - 1.0
    if num <= 0:
        raise ValueError(f"nonpositive numerator {num}; need delta + 2 eps > 1")
    if disc_value <= 0:
        raise ValueError("discrepancy value must be positive")
    return math.log2(num / disc_value)


def composed_disc_chain(r: BooleanFunction, G: Gadget, mu: Distribution,
                        witness_psi: np.ndarray, *, beta: float = 0.5):
    """The composed-discrepancy inequality at a dual witness of r.

    Builds nu = |psi|, h = sign(psi), lambda from (nu, mu, G) and compares
    disc_lambda(h o G) against disc_mu(G)^(d beta) / (1 - disc_mu(G)^beta),
    with d the witness degree floor.  Returns (lhs, rhs, holds).
    """
    n = r.n
    psi = np.asarray(witness_psi, dtype=np.float64)
    nu = Distribution(n, np.abs(psi))
    h_table = np.where(psi >= 0, 1, -1).astype(np.int8)
    h = BooleanFunction(n, h_table)
    from ..boolfn import compose
    hG = compose(h, G)
    lam = lambda_construct(nu, mu, G, n)
    lhs = discrepancy(hG, lam)
    from .fourier import real_spectrum
    spec = real_spectrum(psi)
    d = min((m.bit_count() for m in range(1 << n) if abs(spec[m]) > 1e-9),
            default=n)
    base = discrepancy(G, mu)
    rhs = base ** (d * beta) / (1.0 - base ** beta)
    return lhs, rhs, lhs <= rhs + 1e-12
