"""Global basis-index convention shared by every module.

A string x in {-1,+1}^m maps to the integer whose bit i (most significant
first) is 1 iff x_i = -1.  Hamming weight |x| counts -1 entries, so the
weight of a string equals the popcount of its index.
"""

from __future__ import annotations

import numpy as np


def string_to_index(s) -> int:
    """Index of a +/-1 string under the MSB-first convention."""
    idx = 0
    for v in s:
        idx <<= 1
        if v == -1:
            idx |= 1
        elif v != 1:
            raise ValueError(f"entries must be +/-1, got {v}")
    return idx


def index_to_string(idx: int, m: int) -> np.ndarray:
    """Inverse of string_to_index; returns an int8 array of +/-1."""
    if not 0 <= idx < (1 << m):
        raise ValueError(f"index {idx} out of range for {m} bits")
    out = np.empty(m, dtype=np.int8)
    for i in range(m):
        out[i] = -1 if (idx >> (m - 1 - i)) & 1 else 1
    return out


def weight_of_index(idx: int) -> int:
    """Hamming weight (number of -1s) of the string encoded by idx."""
    return int(idx).bit_count()


def all_strings(m: int) -> np.ndarray:
    """(2^m, m) array of +/-1 strings in index order."""
    idx = np.arange(1 << m, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(m - 1, -1, -1)[None, :]) & 1
    return np.where(bits == 1, -1, 1).astype(np.int8)


def bits_to_int(bits) -> int:
    """Big-endian 0/1 bit tuple to integer."""
    val = 0
    for b in bits:
        val = (val << 1) | int(b)
    return val


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def ilog2(n: int) -> int:
    if not is_power_of_two(n):
        raise ValueError(f"{n} is not a power of 2")
    return n.bit_length() - 1
