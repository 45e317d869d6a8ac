"""Boolean function and gadget algebra.

Truth tables live over {-1,+1} with the global index convention; Hamming
weight counts -1 entries.  Partial functions use 0 for the undefined
symbol (written '*' in files).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .indexing import (all_strings, ilog2, index_to_string, is_power_of_two,
                       string_to_index, weight_of_index)

TABLE_CAP_BITS = 20


class TableCapError(ValueError):
    pass


def _check_arity(n_bits: int) -> None:
    if n_bits > TABLE_CAP_BITS:
        raise TableCapError(
            f"table on {n_bits} bits exceeds the 2^{TABLE_CAP_BITS}-entry cap")


@dataclass(frozen=True)
class BooleanFunction:
    """Total function on {-1,+1}^n as a length-2^n table."""

    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_arity(self.n)
        t = np.asarray(self.table, dtype=np.int8).copy()
        if t.shape != (1 << self.n,):
            raise ValueError(f"table length {t.size} != 2^{self.n}")
        if not np.all(np.abs(t) == 1):
            raise ValueError("table entries must be -1 or +1")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def value(self, x) -> int:
        """Evaluate at a +/-1 string or a basis index."""
        idx = x if isinstance(x, (int, np.integer)) else string_to_index(x)
        return int(self.table[idx])


@dataclass(frozen=True)
class PartialBooleanFunction:
    """Partial function: table entries in {-1, +1, 0} with 0 meaning undefined."""

    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_arity(self.n)
        t = np.asarray(self.table, dtype=np.int8).copy()
        if t.shape != (1 << self.n,):
            raise ValueError(f"table length {t.size} != 2^{self.n}")
        if not np.all(np.isin(t, (-1, 0, 1))):
            raise ValueError("table entries must be -1, +1 or 0 (undefined)")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def value(self, x) -> int:
        idx = x if isinstance(x, (int, np.integer)) else string_to_index(x)
        return int(self.table[idx])


@dataclass(frozen=True)
class Gadget:
    """Two-party function on {-1,+1}^j x {-1,+1}^k with a declared exact cost.

    j and k are Alice's and Bob's input widths in bits.  The cost q is
    declared metadata (exact quantum communication complexity); it is not
    computed here.  q may be None for lower-bound work where no protocol
    is ever run.
    """

    j: int
    k: int
    table: np.ndarray = field(repr=False)
    q: int | None = None
    name: str = ""

    def __post_init__(self):
        _check_arity(self.j + self.k)
        t = np.asarray(self.table, dtype=np.int8).copy()
        if t.shape != (1 << (self.j + self.k),):
            raise ValueError(f"table length {t.size} != 2^{self.j + self.k}")
        if not np.all(np.abs(t) == 1):
            raise ValueError("table entries must be -1 or +1")
        if self.q is not None:
            non_constant = not (np.all(t == 1) or np.all(t == -1))
            if non_constant and self.q < 1:
                raise ValueError("declared cost q must be >= 1 for non-constant G")
            if self.q < 0:
                raise ValueError("declared cost q must be nonnegative")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def value(self, x, y) -> int:
        xi = x if isinstance(x, (int, np.integer)) else string_to_index(x)
        yi = y if isinstance(y, (int, np.integer)) else string_to_index(y)
        return int(self.table[(xi << self.k) | yi])

    def matrix(self) -> np.ndarray:
        """Sign matrix with Alice's inputs as rows."""
        return self.table.reshape(1 << self.j, 1 << self.k)

    def negated(self) -> "Gadget":
        return Gadget(self.j, self.k, -self.table, q=self.q,
                      name=f"neg({self.name})" if self.name else "")

    def require_cost(self) -> int:
        if self.q is None:
            raise ValueError(
                f"gadget {self.name or '<anon>'} has no declared exact cost q")
        return self.q


@dataclass(frozen=True)
class SymmetricSpec:
    """Symmetric function given by its value at each Hamming weight."""

    n: int
    weight_values: np.ndarray = field(repr=False)

    def __post_init__(self):
        wv = np.asarray(self.weight_values, dtype=np.int8).copy()
        if wv.shape != (self.n + 1,):
            raise ValueError(f"need n+1 = {self.n + 1} weight values")
        if not np.all(np.abs(wv) == 1):
            raise ValueError("weight values must be -1 or +1")
        wv.flags.writeable = False
        object.__setattr__(self, "weight_values", wv)

    def value_at_weight(self, w: int) -> int:
        return int(self.weight_values[w])

    def induced(self) -> BooleanFunction:
        _check_arity(self.n)
        idx = np.arange(1 << self.n)
        weights = np.array([weight_of_index(int(i)) for i in idx])
        return BooleanFunction(self.n, self.weight_values[weights])

    def is_constant(self) -> bool:
        return bool(np.all(self.weight_values == self.weight_values[0]))


def gamma(f: SymmetricSpec) -> int:
    """min |2k - n + 1| over weight boundaries k where the value flips.

    Empty-min convention: a constant function returns n + 1.
    """
    n = f.n
    flips = [k for k in range(n)
             if f.weight_values[k] != f.weight_values[k + 1]]
    if not flips:
        return n + 1
    return min(abs(2 * k - n + 1) for k in flips)


def counting_threshold(f: SymmetricSpec) -> int:
    """t = ceil((n - Gamma(f)) / 2); 0 for constant functions."""
    g = gamma(f)
    if g > f.n:
        return 0
    return -((f.n - g) // -2)


# ---------------------------------------------------------------------------
# Hadamard codewords


def _fwht_int(arr: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform over int64, exact."""
    out = arr.astype(np.int64).copy()
    h = 1
    while h < out.size:
        for start in range(0, out.size, 2 * h):
            a = out[start:start + h].copy()
            b = out[start + h:start + 2 * h].copy()
            out[start:start + h] = a + b
            out[start + h:start + 2 * h] = a - b
        h *= 2
    return out


def hadamard_codeword(s) -> np.ndarray:
    """H(s)_t = prod over {i : s_i = -1} of t_i, enumerated in index order."""
    s = np.asarray(s, dtype=np.int8)
    m = s.size
    n = 1 << m
    out = np.ones(n, dtype=np.int8)
    t_idx = np.arange(n)
    for i in range(m):
        if s[i] == -1:
            bit = (t_idx >> (m - 1 - i)) & 1
            out = out * np.where(bit == 1, -1, 1).astype(np.int8)
        elif s[i] != 1:
            raise ValueError("codeword argument entries must be +/-1")
    return out


def decode_codeword(x):
    """Walsh-Hadamard decoding: returns (s, sign) with x = sign*H(s), else None."""
    x = np.asarray(x, dtype=np.int8)
    n = x.size
    if not is_power_of_two(n):
        raise ValueError("codeword length must be a power of 2")
    spec = _fwht_int(x)
    hits = np.nonzero(spec)[0]
    if hits.size != 1 or abs(int(spec[hits[0]])) != n:
        return None
    s_idx = int(hits[0])
    sign = 1 if spec[s_idx] > 0 else -1
    return index_to_string(s_idx, ilog2(n)), sign


def hadamardized_value(G: Gadget, x, y) -> int:
    """h_G on one (x, y) pair without materializing the lifted table; 0 = undefined."""
    dx = decode_codeword(x)
    dy = decode_codeword(y)
    if dx is None or dy is None:
        return 0
    return G.value(dx[0], dy[0])


def hadamardize(G: Gadget) -> PartialBooleanFunction:
    """Lift G on (j, k) bits to the partial function h_G on 2^j + 2^k bits."""
    jl, kl = 1 << G.j, 1 << G.k
    _check_arity(jl + kl)
    # mark which strings of each half are signed codewords
    dec_x = np.full(1 << jl, -1, dtype=np.int64)
    for s_idx in range(1 << G.j):
        cw = hadamard_codeword(index_to_string(s_idx, G.j))
        dec_x[string_to_index(cw)] = s_idx
        dec_x[string_to_index(-cw)] = s_idx
    dec_y = np.full(1 << kl, -1, dtype=np.int64)
    for t_idx in range(1 << G.k):
        cw = hadamard_codeword(index_to_string(t_idx, G.k))
        dec_y[string_to_index(cw)] = t_idx
        dec_y[string_to_index(-cw)] = t_idx

    table = np.zeros(1 << (jl + kl), dtype=np.int8)
    xs = np.nonzero(dec_x >= 0)[0]
    ys = np.nonzero(dec_y >= 0)[0]
    for xi in xs:
        base = int(xi) << kl
        srow = int(dec_x[xi]) << G.k
        for yi in ys:
            table[base | int(yi)] = G.table[srow | int(dec_y[yi])]
    return PartialBooleanFunction(jl + kl, table)


# ---------------------------------------------------------------------------
# Composition


def compose(f: BooleanFunction, G: Gadget) -> Gadget:
    """f composed with G blockwise, as a two-party table on (n*j, n*k) bits."""
    n = f.n
    J, K = n * G.j, n * G.k
    _check_arity(J + K)
    nx, ny = 1 << J, 1 << K
    xs = np.arange(nx, dtype=np.int64)
    ys = np.arange(ny, dtype=np.int64)
    # per-block sub-indices, MSB-first block order
    xblocks = [(xs >> ((n - 1 - i) * G.j)) & ((1 << G.j) - 1) for i in range(n)]
    yblocks = [(ys >> ((n - 1 - i) * G.k)) & ((1 << G.k) - 1) for i in range(n)]
    table = np.empty(nx * ny, dtype=np.int8)
    for xi in range(nx):
        zidx = np.zeros(ny, dtype=np.int64)
        for i in range(n):
            g_vals = G.table[(int(xblocks[i][xi]) << G.k) | yblocks[i]]
            zidx = (zidx << 1) | (g_vals == -1)
        table[xi * ny:(xi + 1) * ny] = f.table[zidx]
    return Gadget(J, K, table, q=None)


def compose_tilde_value(r: BooleanFunction, g: PartialBooleanFunction | Gadget,
                        blocks) -> int:
    """(r tilde-compose g) at one input, given per-block strings or indices.

    g may be a PartialBooleanFunction (blocks are its inputs) or a Gadget
    (blocks are (x, y) string pairs fed through hadamardized_value).
    """
    z_idx = 0
    for blk in blocks:
        if isinstance(g, Gadget):
            v = hadamardized_value(g, blk[0], blk[1])
        else:
            v = g.value(blk)
        if v == 0:
            return -1
        z_idx = (z_idx << 1) | (v == -1)
    return r.value(z_idx)


def compose_tilde(r: BooleanFunction, g: PartialBooleanFunction) -> BooleanFunction:
    """Total completion of r o g: undefined inner values force output -1."""
    n, m = r.n, g.n
    _check_arity(n * m)
    size = 1 << (n * m)
    idx = np.arange(size, dtype=np.int64)
    defined = np.ones(size, dtype=bool)
    z = np.zeros(size, dtype=np.int64)
    for i in range(n):
        sub = (idx >> ((n - 1 - i) * m)) & ((1 << m) - 1)
        vals = g.table[sub]
        defined &= vals != 0
        z = (z << 1) | (vals == -1)
    table = np.where(defined, r.table[z], -1).astype(np.int8)
    return BooleanFunction(n * m, table)


# ---------------------------------------------------------------------------
# Named function library


def _and_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.where(idx == (1 << n) - 1, -1, 1).astype(np.int8)


def _or_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.where(idx == 0, 1, -1).astype(np.int8)


def _parity_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    pop = np.array([int(i).bit_count() for i in idx])
    return np.where(pop % 2 == 1, -1, 1).astype(np.int8)


def _maj_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    pop = np.array([int(i).bit_count() for i in idx])
    return np.where(pop > n / 2, -1, 1).astype(np.int8)


def parity_spec(n: int) -> SymmetricSpec:
    w = np.array([-1 if k % 2 else 1 for k in range(n + 1)], dtype=np.int8)
    return SymmetricSpec(n, w)


def or_spec(n: int) -> SymmetricSpec:
    w = np.array([1] + [-1] * n, dtype=np.int8)
    return SymmetricSpec(n, w)


def nor_spec(n: int) -> SymmetricSpec:
    w = np.array([-1] + [1] * n, dtype=np.int8)
    return SymmetricSpec(n, w)


def maj_spec(n: int) -> SymmetricSpec:
    w = np.array([-1 if k > n / 2 else 1 for k in range(n + 1)], dtype=np.int8)
    return SymmetricSpec(n, w)


def and2_gadget() -> Gadget:
    return Gadget(1, 1, _and_table(2), q=1, name="AND2")


def xor2_gadget() -> Gadget:
    idx = np.arange(4)
    table = np.where(((idx >> 1) ^ (idx & 1)) == 1, -1, 1).astype(np.int8)
    return Gadget(1, 1, table, q=1, name="XOR2")


def ip_gadget(m: int, q: int | None = None) -> Gadget:
    """Inner product on m+m bits: PARITY_m composed with AND_2."""
    g = compose(BooleanFunction(m, _parity_table(m)), and2_gadget())
    return Gadget(g.j, g.k, g.table, q=q, name=f"IP{m}")


def addr_gadget(n: int, q: int | None = None) -> Gadget:
    """Addressing: Alice's log(n) bits select one of Bob's n bits."""
    if not is_power_of_two(n) or n < 2:
        raise ValueError("ADDR size must be a power of 2 and >= 2")
    L = ilog2(n)
    _check_arity(L + n)
    table = np.empty(1 << (L + n), dtype=np.int8)
    ys = np.arange(1 << n, dtype=np.int64)
    for xi in range(n):
        bit = (ys >> (n - 1 - xi)) & 1
        table[xi << n:(xi + 1) << n] = np.where(bit == 1, -1, 1)
    return Gadget(L, n, table, q=q, name=f"ADDR{n}")


def gadget_library(name: str, size: int = 0, q: int | None = None):
    """Named constructors; AND2/XOR2 carry q=1, others need a caller-supplied q."""
    name = name.lower()
    if name == "and2":
        return and2_gadget()
    if name == "xor2":
        return xor2_gadget()
    if name == "ip":
        return ip_gadget(size, q=q)
    if name == "addr":
        return addr_gadget(size, q=q)
    if name == "parity":
        return BooleanFunction(size, _parity_table(size))
    if name == "or":
        return BooleanFunction(size, _or_table(size))
    if name == "nor":
        return BooleanFunction(size, -_or_table(size))
    if name == "and":
        return BooleanFunction(size, _and_table(size))
    if name == "maj":
        return BooleanFunction(size, _maj_table(size))
    raise ValueError(f"unknown function name {name!r}")


# ---------------------------------------------------------------------------
# Transitivity machinery


def transitive_perms(n: int) -> list[np.ndarray]:
    """Generators pi (block swap) and sigma_ell on the 2n coordinates of h_G.

    A permutation array p acts by (p . x)[i] = x[p[i]].
    """
    if not is_power_of_two(n):
        raise ValueError("n must be a power of 2")
    perms = []
    pi = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    perms.append(pi)
    for ell in range(1, n):
        sig = np.arange(n) ^ ell
        perms.append(np.concatenate([sig, sig + n]))
    return perms


def verify_transitive(f, arity: int, perms, *, rng=None, samples: int = 256) -> bool:
    """Check f-invariance under every generator plus single-orbit action.

    f is a callable on +/-1 arrays (or a BooleanFunction / Partial with
    matching arity).  Exhaustive when 2^arity <= 2^16; otherwise uses the
    given number of random inputs per generator (rng required), plus
    structured codeword-style inputs when arity is even.
    """
    if hasattr(f, "value"):
        fn_obj = f
        fn = lambda s: fn_obj.value(string_to_index(s))
    else:
        fn = f

    # single orbit of the generated group action on coordinates
    adj = [[] for _ in range(arity)]
    for p in perms:
        if p.size != arity:
            raise ValueError("permutation size does not match arity")
        for i in range(arity):
            adj[i].append(int(p[i]))
            adj[int(p[i])].append(i)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != arity:
        return False

    if arity <= 16:
        inputs = all_strings(arity)
    else:
        if rng is None:
            raise ValueError("rng required for sampled verification")
        inputs = np.where(
            rng.integers(0, 2, size=(samples, arity)) == 1, -1, 1).astype(np.int8)
        if arity % 2 == 0:
            half = arity // 2
            if is_power_of_two(half):
                extra = []
                L = ilog2(half)
                for _ in range(samples // 4):
                    s = index_to_string(int(rng.integers(0, half)), L)
                    t = index_to_string(int(rng.integers(0, half)), L)
                    bx = -1 if rng.integers(0, 2) else 1
                    by = -1 if rng.integers(0, 2) else 1
                    row = np.concatenate([bx * hadamard_codeword(s),
                                          by * hadamard_codeword(t)])
                    extra.append(row)
                    corrupt = row.copy()
                    corrupt[int(rng.integers(0, arity))] *= -1
                    extra.append(corrupt)
                inputs = np.vstack([inputs, np.array(extra, dtype=np.int8)])

    for x in inputs:
        ref = fn(x)
        for p in perms:
            if fn(x[p]) != ref:
                return False
    return True


# ---------------------------------------------------------------------------
# Truth-table file format


def save_table(path, fn) -> None:
    """Write `n=<arity>` then the table row ('*' for undefined entries)."""
    symbols = {1: "1", -1: "-1", 0: "*"}
    with open(path, "w") as fh:
        fh.write(f"n={fn.n}\n")
        fh.write(" ".join(symbols[int(v)] for v in fn.table) + "\n")


def load_table(path):
    """Read the truth-table format; returns BooleanFunction or Partial."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("n="):
            raise ValueError("first line must be n=<arity>")
        n = int(header[2:])
        toks = fh.readline().split()
    if len(toks) != (1 << n):
        raise ValueError(f"expected {1 << n} entries, got {len(toks)}")
    vals = np.array([0 if t == "*" else int(t) for t in toks], dtype=np.int8)
    if np.any(vals == 0):
        return PartialBooleanFunction(n, vals)
    return BooleanFunction(n, vals)
