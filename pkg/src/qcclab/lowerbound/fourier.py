"""Fourier spectra of Boolean functions.

Coefficients are indexed by subset masks under the global convention
(coordinate i of the string is bit n-1-i of the mask), so the transform
is the same Walsh matrix that underlies the Hadamard codewords.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..boolfn import BooleanFunction, _fwht_int


@dataclass(frozen=True)
class Spectrum:
    """2^n Fourier coefficients; scaled holds the exact integers 2^n * fhat."""

    n: int
    scaled: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.scaled, dtype=np.int64).copy()
        if s.shape != (1 << self.n,):
            raise ValueError("coefficient count must be 2^n")
        s.flags.writeable = False
        object.__setattr__(self, "scaled", s)

    @property
    def coefficients(self) -> np.ndarray:
        return self.scaled / float(1 << self.n)

    def coefficient(self, mask: int) -> float:
        return float(self.scaled[mask]) / (1 << self.n)

    def l1(self) -> float:
        return float(np.abs(self.scaled).sum()) / (1 << self.n)


def walsh_hadamard(f: BooleanFunction) -> Spectrum:
    """Exact fast transform; Parseval/Plancherel hold integer-exactly."""
    if f.n > 20:
        raise ValueError("transform capped at arity 20")
    return Spectrum(f.n, _fwht_int(f.table))


def inverse_transform(spec: Spectrum) -> BooleanFunction:
    """Inverse transform, exact for spectra of +/-1 tables."""
    vals = _fwht_int(spec.scaled)
    size = 1 << spec.n
    if np.any(vals % size != 0):
        raise ValueError("spectrum is not that of an integer table")
    return BooleanFunction(spec.n, (vals // size).astype(np.int8))


def real_spectrum(values: np.ndarray) -> np.ndarray:
    """Fourier coefficients of an arbitrary real table (float path)."""
    arr = np.asarray(values, dtype=np.float64).copy()
    n = arr.size
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            a = arr[start:start + h].copy()
            b = arr[start + h:start + 2 * h].copy()
            arr[start:start + h] = a + b
            arr[start + h:start + 2 * h] = a - b
        h *= 2
    return arr / n
