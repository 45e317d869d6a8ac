"""Reduction embeddings: codeword padding for the box-composition lemma,
the addressing-based variant with raw target bits, and the monomial
projection onto the inner-product function."""

from __future__ import annotations

import numpy as np

from ..boolfn import (BooleanFunction, Gadget, compose_tilde_value,
                      decode_codeword, gadget_library, hadamard_codeword,
                      ip_gadget)
from ..indexing import all_strings, ilog2, index_to_string

BOXES = ("AND", "XOR")


def _apply_box(box: str, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if box == "AND":
        return np.where((X == -1) & (Y == -1), -1, 1).astype(np.int8)
    if box == "XOR":
        return (X * Y).astype(np.int8)
    raise ValueError(f"box must be one of {BOXES}")


def _eval_tilde_on_string(r: BooleanFunction, G: Gadget, Z: np.ndarray) -> int:
    jl, kl = 1 << G.j, 1 << G.k
    blk = jl + kl
    blocks = [(Z[i * blk:i * blk + jl], Z[i * blk + jl:(i + 1) * blk])
              for i in range(r.n)]
    return compose_tilde_value(r, G, blocks)


def embed_reduction(r: BooleanFunction, G: Gadget, x, y, box: str):
    """Padded codeword inputs realizing r o G inside (r tilde h_G) o box.

    x and y are per-block strings on G's input widths.  The AND path pads
    with -1 blocks, the XOR path with +1 blocks.  The defining equality is
    verified on the spot; a mismatch raises.
    """
    if box not in BOXES:
        raise ValueError(f"box must be one of {BOXES}")
    n = r.n
    x = np.asarray(x, dtype=np.int8).reshape(n, G.j)
    y = np.asarray(y, dtype=np.int8).reshape(n, G.k)
    jl, kl = 1 << G.j, 1 << G.k
    pad = -1 if box == "AND" else 1
    X = np.empty(n * (jl + kl), dtype=np.int8)
    Y = np.empty(n * (jl + kl), dtype=np.int8)
    blk = jl + kl
    for i in range(n):
        X[i * blk:i * blk + jl] = hadamard_codeword(x[i])
        X[i * blk + jl:(i + 1) * blk] = pad
        Y[i * blk:i * blk + jl] = pad
        Y[i * blk + jl:(i + 1) * blk] = hadamard_codeword(y[i])

    z_idx = 0
    for i in range(n):
        z_idx = (z_idx << 1) | (G.value(x[i], y[i]) == -1)
    lhs = r.value(z_idx)
    rhs = _eval_tilde_on_string(r, G, _apply_box(box, X, Y))
    if lhs != rhs:
        raise AssertionError(
            f"reduction equality failed at x={x.tolist()}, y={y.tolist()}: "
            f"{lhs} != {rhs}")
    return X, Y


def check_embed_reduction(r: BooleanFunction, G: Gadget, box: str) -> bool:
    """Exhaustive equality check over every (x, y); sizes must stay small."""
    n = r.n
    if n * (G.j + G.k) > 20:
        raise ValueError("exhaustive check capped at 20 input bits")
    for xi in range(1 << (n * G.j)):
        x = index_to_string(xi, n * G.j).reshape(n, G.j)
        for yi in range(1 << (n * G.k)):
            y = index_to_string(yi, n * G.k).reshape(n, G.k)
            embed_reduction(r, G, x, y, box)
    return True


# ---------------------------------------------------------------------------
# Addressing variant (target bits passed raw)


def ccc20_value(n: int, blocks) -> int:
    """Parity of addressed bits when every X block is a signed codeword,
    else -1.  blocks = [(X_1, Y_1), ..., (X_n, Y_n)] with |X_i| = |Y_i| = n."""
    addr = gadget_library("addr", n)
    z_idx = 0
    for X_i, Y_i in blocks:
        dec = decode_codeword(np.asarray(X_i, dtype=np.int8))
        if dec is None:
            return -1
        z_idx = (z_idx << 1) | (addr.value(dec[0], np.asarray(Y_i, dtype=np.int8)) == -1)
    parity = gadget_library("parity", n)
    return parity.value(z_idx)


def embed_reduction_addressing(n: int, x, y):
    """Appendix-style embedding for parity-of-addressing: codeword address
    halves, raw target halves, -1 padding; verified against the direct value."""
    x = np.asarray(x, dtype=np.int8).reshape(n, ilog2(n))
    y = np.asarray(y, dtype=np.int8).reshape(n, n)
    blk = 2 * n
    X = np.empty(n * blk, dtype=np.int8)
    Y = np.empty(n * blk, dtype=np.int8)
    for i in range(n):
        X[i * blk:i * blk + n] = hadamard_codeword(x[i])
        X[i * blk + n:(i + 1) * blk] = -1
        Y[i * blk:i * blk + n] = -1
        Y[i * blk + n:(i + 1) * blk] = y[i]

    addr = gadget_library("addr", n)
    z_idx = 0
    for i in range(n):
        z_idx = (z_idx << 1) | (addr.value(x[i], y[i]) == -1)
    lhs = gadget_library("parity", n).value(z_idx)

    Z = _apply_box("AND", X, Y)
    rhs = ccc20_value(n, [(Z[i * blk:i * blk + n], Z[i * blk + n:(i + 1) * blk])
                          for i in range(n)])
    if lhs != rhs:
        raise AssertionError(f"addressing reduction failed at x={x.tolist()}, "
                             f"y={y.tolist()}: {lhs} != {rhs}")
    return X, Y


def check_embed_reduction_addressing(n: int) -> bool:
    """Exhaustive over all address/target assignments (n = 2 or 4)."""
    L = ilog2(n)
    if n * (L + n) > 14:
        raise ValueError("exhaustive addressing check limited to tiny n")
    for xi in range(1 << (n * L)):
        x = index_to_string(xi, n * L).reshape(n, L)
        for yi in range(1 << (n * n)):
            y = index_to_string(yi, n * n).reshape(n, n)
            embed_reduction_addressing(n, x, y)
    return True


# ---------------------------------------------------------------------------
# Monomial projection onto the inner-product function


def ip_projection_check(n: int) -> dict:
    """The weight-1 substitution turns parity-of-hadamardized-IP into IP.

    Frees the 2 n log n weight-1 coordinates per block, fixes the empty
    coordinate to 1 and replaces the rest by products; every assignment
    must land on codeword blocks and reproduce IP_(n log n).
    """
    if n not in (2, 4):
        raise ValueError("projection check supports n in {2, 4}")
    L = ilog2(n)
    r = gadget_library("parity", n)
    G = ip_gadget(L)
    ip_big = ip_gadget(n * L)
    nfree = 2 * n * L
    codeword_checked = 0
    for assignment in range(1 << nfree):
        bits = index_to_string(assignment, nfree)
        a = bits[:n * L].reshape(n, L)
        b = bits[n * L:].reshape(n, L)
        blocks = []
        for i in range(n):
            xb = hadamard_codeword(a[i])
            yb = hadamard_codeword(b[i])
            if codeword_checked < 64:
                da = decode_codeword(xb)
                db = decode_codeword(yb)
                if da is None or db is None or da[1] != 1 or db[1] != 1:
                    return {"passed": False, "free_variables": nfree}
                codeword_checked += 1
            blocks.append((xb, yb))
        projected = compose_tilde_value(r, G, blocks)
        if projected != ip_big.value(bits[:n * L], bits[n * L:]):
            return {"passed": False, "free_variables": nfree,
                    "assignment": assignment}
    return {"passed": True, "free_variables": nfree}
