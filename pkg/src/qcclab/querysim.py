"""Quantum query-model simulator with counted phase oracles.

Oracles expose phase semantics |i> -> x_i |i>; a bit read costs one query
via the standard ancilla trick.  Classical post-processing is free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boolfn import BooleanFunction, Gadget, hadamard_codeword
from .indexing import ilog2, index_to_string, is_power_of_two


class QueryOracle:
    """Hidden +/-1 string behind a counted phase oracle."""

    def __init__(self, x):
        self.x = np.asarray(x, dtype=np.int8)
        if not np.all(np.abs(self.x) == 1):
            raise ValueError("oracle string entries must be +/-1")
        self.queries = 0

    @property
    def m(self) -> int:
        return self.x.size

    def phase(self, amps: np.ndarray, offset: int = 0) -> np.ndarray:
        """One query: multiply amplitudes by x over a window of the string."""
        if offset < 0 or offset + amps.size > self.m:
            raise IndexError("oracle window out of range")
        self.queries += 1
        return amps * self.x[offset:offset + amps.size]

    def read_bit(self, i: int) -> int:
        """Bit query (ancilla trick): one counted query, returns x_i."""
        self.queries += 1
        return int(self.x[i])


def bernstein_vazirani(oracle: QueryOracle, rng: np.random.Generator,
                       offset: int = 0, block: int | None = None) -> np.ndarray:
    """One-query codeword decoding.

    On x in +/-H(s) (within the chosen block) returns s with certainty;
    on other inputs, samples the circuit's output distribution.
    """
    n = block if block is not None else oracle.m
    if not is_power_of_two(n):
        raise ValueError("block length must be a power of 2")
    L = ilog2(n)
    amps = np.full(n, 1.0 / math.sqrt(n))
    amps = oracle.phase(amps, offset)
    # normalized Walsh-Hadamard transform
    h = 1
    amps = amps.astype(np.float64)
    while h < n:
        for start in range(0, n, 2 * h):
            a = amps[start:start + h].copy()
            b = amps[start + h:start + 2 * h].copy()
            amps[start:start + h] = (a + b) / math.sqrt(2)
            amps[start + h:start + 2 * h] = (a - b) / math.sqrt(2)
        h *= 2
    probs = amps ** 2
    if probs.max() >= 1.0 - 1e-9:
        out = int(np.argmax(probs))
    else:
        out = int(rng.choice(n, p=probs / probs.sum()))
    return index_to_string(out, L)


@dataclass
class EqualityOutcome:
    equal: bool
    differ_index: int | None
    queries: int


def grover_equality(a: QueryOracle, b, m: int, rng: np.random.Generator) -> EqualityOutcome:
    """Grover search for an index where the two m-bit strings differ.

    b may be a QueryOracle or a plain +/-1 array (classically known, free).
    One-sided: a DIFFER answer is verified by direct queries, and equal
    strings always come back EQUAL.
    """
    start_queries = a.queries
    b_arr = b.x if isinstance(b, QueryOracle) else np.asarray(b, dtype=np.int8)
    b_oracle = b if isinstance(b, QueryOracle) else None

    size = 1 << max(1, math.ceil(math.log2(m)))

    def mark_phase(amps):
        # one joint application of both string oracles
        av = a.phase(np.ones(m, dtype=np.float64))
        if b_oracle is not None:
            bv = b_oracle.phase(np.ones(m, dtype=np.float64))
        else:
            bv = b_arr
        differ = np.ones(size)
        differ[:m] = np.where(av != bv, -1.0, 1.0)
        return amps * differ

    t_guess = size
    while t_guess >= 1:
        iters = int(math.floor((math.pi / 4.0) * math.sqrt(size / t_guess)))
        amps = np.full(size, 1.0 / math.sqrt(size))
        for _ in range(iters):
            amps = mark_phase(amps)
            amps = 2.0 * amps.mean() - amps
        probs = np.abs(amps) ** 2
        cand = int(rng.choice(size, p=probs / probs.sum()))
        if cand < m:
            av = a.read_bit(cand)
            bv = b_oracle.read_bit(cand) if b_oracle is not None else int(b_arr[cand])
            if av != bv:
                return EqualityOutcome(False, cand, a.queries - start_queries)
        t_guess //= 2
    return EqualityOutcome(True, None, a.queries - start_queries)


@dataclass
class HadamardizedRunResult:
    value: int
    queries: int
    decoded: list


def rtilde_hG_query_algorithm(oracle: QueryOracle, r: BooleanFunction, G: Gadget,
                              rng: np.random.Generator) -> HadamardizedRunResult:
    """Evaluate the total completion of r composed with h_G on the oracle input.

    Input layout: n blocks of (X_i, Y_i) with |X_i| = 2^j and |Y_i| = 2^k.
    Decodes every block with one Bernstein-Vazirani run, reads the sign
    bits, then Grover-checks that the reconstruction matches the input.
    Exact on codeword inputs; detects corrupted blocks with probability
    at least 2/3.
    """
    n = r.n
    jl, kl = 1 << G.j, 1 << G.k
    block = jl + kl
    if oracle.m != n * block:
        raise ValueError(
            f"oracle length {oracle.m} != n(j+k) = {n * block}")
    xs, ys, signs_b, signs_c = [], [], [], []
    for i in range(n):
        off = i * block
        xs.append(bernstein_vazirani(oracle, rng, offset=off, block=jl))
        ys.append(bernstein_vazirani(oracle, rng, offset=off + jl, block=kl))
    for i in range(n):
        off = i * block
        signs_b.append(oracle.read_bit(off))        # coordinate 1^{log j}
        signs_c.append(oracle.read_bit(off + jl))   # coordinate 1^{log k}
    rebuilt = np.empty(n * block, dtype=np.int8)
    for i in range(n):
        off = i * block
        rebuilt[off:off + jl] = signs_b[i] * hadamard_codeword(xs[i])
        rebuilt[off + jl:off + block] = signs_c[i] * hadamard_codeword(ys[i])
    eq = grover_equality(oracle, rebuilt, n * block, rng)
    if not eq.equal:
        return HadamardizedRunResult(-1, oracle.queries, list(zip(xs, ys)))
    z_idx = 0
    for i in range(n):
        z_idx = (z_idx << 1) | (G.value(xs[i], ys[i]) == -1)
    return HadamardizedRunResult(r.value(z_idx), oracle.queries, list(zip(xs, ys)))
