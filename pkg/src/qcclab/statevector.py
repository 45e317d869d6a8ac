"""Dense complex statevector engine.

Basis encoding follows the global index convention (qubit 0 is the most
significant bit of a basis index).  States are immutable after
construction; every operation returns a new CVec.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .indexing import ilog2, is_power_of_two

MAX_AMPLITUDES = 1 << 24
NORM_ATOL = 1e-9


class DimensionError(ValueError):
    pass


class UnitarityError(ValueError):
    pass


@dataclass(frozen=True)
class CVec:
    """Complex amplitude vector; unit norm whenever used as a quantum state.

    Unnormalized values are allowed (error states are tracked as raw
    vectors), so the norm invariant is checked at the operation level,
    not at construction.
    """

    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 1:
            raise DimensionError("amps must be a nonempty 1-D array")
        if arr.size > MAX_AMPLITUDES:
            raise DimensionError(
                f"dimension {arr.size} exceeds hard cap {MAX_AMPLITUDES}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def num_qubits(self) -> int:
        return ilog2(self.dim)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def require_normalized(self, atol: float = NORM_ATOL) -> None:
        if abs(self.norm() - 1.0) > atol:
            raise ValueError(f"state norm {self.norm()} not within {atol} of 1")


def basis_state(dim: int, index: int) -> CVec:
    """Standard basis vector e_index."""
    if not 0 <= index < dim:
        raise IndexError(f"basis index {index} out of range for dim {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return CVec(amps)


def maximally_entangled(n: int) -> CVec:
    """(1/sqrt(n)) sum_i |i>|i> on 2*log(n) qubits; first half Alice's."""
    if not is_power_of_two(n) or n < 2:
        raise ValueError(f"n must be a power of 2 and >= 2, got {n}")
    amps = np.zeros(n * n, dtype=np.complex128)
    amps[np.arange(n) * n + np.arange(n)] = 1.0 / np.sqrt(n)
    return CVec(amps)


def uniform_state(dim: int) -> CVec:
    return CVec(np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def overlap(a: CVec, b: CVec) -> complex:
    """Inner product <a|b>."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


class UnitaryOp:
    """Operator description applied through apply()."""

    def apply_to(self, amps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def adjoint(self) -> "UnitaryOp":
        raise NotImplementedError


class DenseOp(UnitaryOp):
    """Dense unitary matrix acting on a named subset of qubits.

    Unitarity is checked at construction (column orthonormality).
    """

    def __init__(self, matrix, qubits):
        mat = np.asarray(matrix, dtype=np.complex128)
        k = len(qubits)
        if mat.shape != (1 << k, 1 << k):
            raise DimensionError(
                f"matrix shape {mat.shape} does not match {k} target qubits")
        if not np.allclose(mat.conj().T @ mat, np.eye(1 << k), atol=NORM_ATOL):
            raise UnitarityError("matrix columns are not orthonormal")
        if len(set(qubits)) != k:
            raise ValueError("duplicate target qubits")
        self.matrix = mat
        self.qubits = tuple(qubits)

    def apply_to(self, amps: np.ndarray) -> np.ndarray:
        m = ilog2(amps.size)
        for q in self.qubits:
            if not 0 <= q < m:
                raise DimensionError(f"target qubit {q} outside register of {m}")
        k = len(self.qubits)
        tensor = amps.reshape([2] * m)
        gate = self.matrix.reshape([2] * (2 * k))
        moved = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), list(self.qubits)))
        # tensordot puts target axes first; restore canonical axis order
        rest = [q for q in range(m) if q not in self.qubits]
        order = np.argsort(list(self.qubits) + rest)
        return np.transpose(moved, order).reshape(amps.size)

    def adjoint(self) -> "DenseOp":
        return DenseOp(self.matrix.conj().T, self.qubits)


class DiagonalPhaseOp(UnitaryOp):
    """Diagonal phase map over full-register basis indices."""

    def __init__(self, phases):
        ph = np.asarray(phases, dtype=np.complex128)
        if not np.allclose(np.abs(ph), 1.0, atol=NORM_ATOL):
            raise UnitarityError("diagonal entries must have unit modulus")
        self.phases = ph

    @classmethod
    def from_predicate(cls, dim: int, predicate, phase: complex = -1.0) -> "DiagonalPhaseOp":
        ph = np.ones(dim, dtype=np.complex128)
        for i in range(dim):
            if predicate(i):
                ph[i] = phase
        return cls(ph)

    def apply_to(self, amps: np.ndarray) -> np.ndarray:
        if amps.size != self.phases.size:
            raise DimensionError("dimension mismatch for diagonal operator")
        return amps * self.phases

    def adjoint(self) -> "DiagonalPhaseOp":
        return DiagonalPhaseOp(self.phases.conj())


class ReflectionOp(UnitaryOp):
    """2|phi><phi| - I about a normalized state phi."""

    def __init__(self, phi: CVec):
        phi.require_normalized()
        self.phi = phi

    def apply_to(self, amps: np.ndarray) -> np.ndarray:
        if amps.size != self.phi.dim:
            raise DimensionError("dimension mismatch for reflection")
        c = np.vdot(self.phi.amps, amps)
        return 2.0 * c * self.phi.amps - amps

    def adjoint(self) -> "ReflectionOp":
        return self


def apply(state: CVec, op: UnitaryOp) -> CVec:
    """op . state, with a norm-preservation check at 1e-9."""
    before = state.norm()
    out = CVec(op.apply_to(state.amps))
    if abs(out.norm() - before) > NORM_ATOL:
        raise UnitarityError(
            f"operator changed norm by {abs(out.norm() - before):.3e}")
    return out


def hadamard_transform(state: CVec, qubits) -> CVec:
    """H on each listed qubit (self-inverse)."""
    m = state.num_qubits
    amps = state.amps.reshape([2] * m).copy()
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for q in qubits:
        if not 0 <= q < m:
            raise DimensionError(f"qubit {q} outside register of {m}")
        a0 = np.take(amps, 0, axis=q)
        a1 = np.take(amps, 1, axis=q)
        lo = (a0 + a1) * inv_sqrt2
        hi = (a0 - a1) * inv_sqrt2
        amps = np.stack([lo, hi], axis=q)
    return CVec(amps.reshape(state.dim))


def measure(state: CVec, qubits, rng: np.random.Generator):
    """Born-rule measurement of the listed qubits.

    Returns (outcome bits in qubit order, collapsed renormalized state).
    Deterministic given the generator state.
    """
    state.require_normalized()
    m = state.num_qubits
    qubits = list(qubits)
    for q in qubits:
        if not 0 <= q < m:
            raise DimensionError(f"qubit {q} outside register of {m}")
    tensor = state.amps.reshape([2] * m)
    rest = [q for q in range(m) if q not in qubits]
    moved = np.transpose(tensor, qubits + rest).reshape(1 << len(qubits), -1)
    probs = (np.abs(moved) ** 2).sum(axis=1)
    probs = np.maximum(probs, 0.0)
    probs /= probs.sum()
    outcome = int(rng.choice(len(probs), p=probs))
    branch = moved[outcome]
    nrm = np.linalg.norm(branch)
    collapsed = np.zeros_like(moved)
    collapsed[outcome] = branch / nrm
    back = collapsed.reshape([2] * m)
    inverse = np.argsort(qubits + rest)
    amps = np.transpose(back, inverse).reshape(state.dim)
    bits = tuple((outcome >> (len(qubits) - 1 - i)) & 1 for i in range(len(qubits)))
    return bits, CVec(amps)
