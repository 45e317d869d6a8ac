"""Distributed Grover-style search for an index with G(X_i, Y_i) = -1.

Runs the noisy amplitude-amplification recursion over the shared
maximally entangled index registers, metering every qubit of
communication.  Two simulation backends compute the same protocol: a
dense statevector on the joint registers, and an exact restriction to
the two-dimensional span of the good/bad diagonal states.  The span
backend is only valid for noise models that preserve that span (perfect
and phase-on-complement reflections); equality of the two backends is
covered by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import amplamp
from .amplamp import NoiseModel, grover_angle, iteration_count
from .boolfn import Gadget
from .indexing import ilog2, index_to_string, is_power_of_two, string_to_index
from .runtime import (CostMeter, DEFAULT_CONSTANTS, Party, ProtocolConstants,
                      TwoPartyState, init_shared, register_modeled)
from .statevector import CVec, maximally_entangled

register_modeled("approx-reflect")
register_modeled("oracle-gadget")
register_modeled("outcome-exchange")
register_modeled("verify-gadget")


@dataclass
class SearchInstance:
    """Blockwise two-party input with the derived solution string z."""

    G: Gadget
    X: np.ndarray  # (n, j) entries +/-1
    Y: np.ndarray  # (n, k) entries +/-1
    z: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.int8)
        self.Y = np.asarray(self.Y, dtype=np.int8)
        n = self.X.shape[0]
        if self.Y.shape[0] != n:
            raise ValueError("X and Y must have the same number of blocks")
        if not is_power_of_two(n):
            raise ValueError("block count must be a power of 2")
        if self.X.shape[1] != self.G.j or self.Y.shape[1] != self.G.k:
            raise ValueError("block widths do not match the gadget")
        if self.z is None:
            self.z = self.recompute_z()
        self.uses_and2_oracle = _is_and2(self.G)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def recompute_z(self) -> np.ndarray:
        return np.array([self.G.value(self.X[i], self.Y[i])
                         for i in range(self.X.shape[0])], dtype=np.int8)

    def solution_indices(self) -> np.ndarray:
        return np.nonzero(self.z == -1)[0]

    def solution_count(self) -> int:
        if not hasattr(self, "_sol_count"):
            self._sol_count = int(np.sum(self.z == -1))
        return self._sol_count

    def copy(self) -> "SearchInstance":
        return SearchInstance(self.G, self.X.copy(), self.Y.copy(),
                              z=self.z.copy())

    def patch(self, i: int) -> None:
        """Replace (X_i, Y_i) by the pre-agreed non-solution inputs."""
        xr, yr = find_preimage(self.G, +1)
        self.X[i] = xr
        self.Y[i] = yr
        if self.z[i] == -1:
            self._sol_count = self.solution_count() - 1
        self.z[i] = 1

    def restrict(self, indices) -> tuple["SearchInstance", list]:
        """Sub-instance on the given blocks, padded to a power of 2 with
        pre-agreed non-solutions.  Returns (instance, local-to-global map)."""
        indices = list(indices)
        m = len(indices)
        size = 1 << max(1, math.ceil(math.log2(max(m, 2))))
        xr, yr = find_preimage(self.G, +1)
        X = np.tile(xr, (size, 1))
        Y = np.tile(yr, (size, 1))
        mapping: list = [None] * size
        for loc, g in enumerate(indices):
            X[loc] = self.X[g]
            Y[loc] = self.Y[g]
            mapping[loc] = g
        return SearchInstance(self.G, X, Y), mapping

    @classmethod
    def planted(cls, n: int, G: Gadget, solutions, rng=None) -> "SearchInstance":
        """Instance whose z has -1 exactly at the given indices."""
        xs, ys = find_preimage(G, -1)
        xn, yn = find_preimage(G, +1)
        X = np.tile(xn, (n, 1))
        Y = np.tile(yn, (n, 1))
        sol = set(int(i) for i in solutions)
        for i in sol:
            if rng is not None:
                xi, yi = random_preimage(G, -1, rng)
                X[i], Y[i] = xi, yi
            else:
                X[i], Y[i] = xs, ys
        return cls(G, X, Y)


def find_preimage(G: Gadget, value: int):
    """First (x, y) in table order with G(x, y) = value ('pre-agreed' inputs)."""
    hits = np.nonzero(G.table == value)[0]
    if hits.size == 0:
        raise ValueError(f"gadget has no input with value {value}")
    idx = int(hits[0])
    return (index_to_string(idx >> G.k, G.j),
            index_to_string(idx & ((1 << G.k) - 1), G.k))


def random_preimage(G: Gadget, value: int, rng):
    hits = np.nonzero(G.table == value)[0]
    if hits.size == 0:
        raise ValueError(f"gadget has no input with value {value}")
    idx = int(hits[rng.integers(0, hits.size)])
    return (index_to_string(idx >> G.k, G.j),
            index_to_string(idx & ((1 << G.k) - 1), G.k))


def _is_and2(G: Gadget) -> bool:
    return G.j == 1 and G.k == 1 and list(G.table) == [1, 1, 1, -1]


# ---------------------------------------------------------------------------
# Oracle and approximate reflection on a TwoPartyState


def oracle_reflection(state: TwoPartyState, instance: SearchInstance) -> None:
    """Phase -1 on |i>|j> with G(X_i, Y_j) = -1.

    For AND_2 the explicit auxiliary-qubit protocol is run gate by gate
    (2 qubits of communication); any other gadget applies the modeled
    diagonal and charges 2q.
    """
    n = instance.n
    if _is_and2(instance.G):
        _oracle_and2_explicit(state, instance)
        return
    q = instance.G.require_cost()
    diag = _oracle_diagonal(instance)
    state.apply_modeled("oracle-gadget", lambda amps: amps * diag, charge=2 * q)


def _oracle_diagonal(instance: SearchInstance) -> np.ndarray:
    n = instance.n
    gx = np.array([string_to_index(instance.X[i]) for i in range(n)])
    gy = np.array([string_to_index(instance.Y[i]) for i in range(n)])
    vals = instance.G.table[(gx[:, None] << instance.G.k) | gy[None, :]]
    return np.where(vals == -1, -1.0, 1.0).reshape(n * n)


def _oracle_and2_explicit(state: TwoPartyState, instance: SearchInstance) -> None:
    """Alice XORs x_i into a fresh ancilla, sends it; Bob phases by y_j^b."""
    n = instance.n
    a_mask = instance.X[:, 0] == -1
    b_mask = instance.Y[:, 0] == -1
    anc = state.add_ancilla(Party.ALICE)

    def alice_xor(amps):
        t = amps.reshape(n, n, 2).copy()
        t[a_mask] = t[a_mask][:, :, ::-1]
        return t.reshape(amps.size)

    def bob_phase(amps):
        t = amps.reshape(n, n, 2).copy()
        t[:, b_mask, 1] *= -1.0
        return t.reshape(amps.size)

    alice_qubits = state.qubits_of(Party.ALICE)
    state.apply_local_transform(Party.ALICE, alice_qubits, alice_xor)
    state.send([anc], Party.BOB)
    bob_qubits = state.qubits_of(Party.BOB)
    state.apply_local_transform(Party.BOB, bob_qubits, bob_phase)
    state.send([anc], Party.ALICE)
    state.apply_local_transform(Party.ALICE, state.qubits_of(Party.ALICE), alice_xor)
    state.drop_last_qubit()


def approx_reflect(state: TwoPartyState, eps: float, noise: NoiseModel,
                   level: int = 1, constants: ProtocolConstants = DEFAULT_CONSTANTS,
                   reflection=None, adjoint: bool = False) -> None:
    """Noisy reflection about the shared maximally entangled state.

    Charges ceil(log2(1/eps)) + 2 qubits (constants configurable).
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if reflection is None:
        n = 1 << (len(state.owner) // 2)
        reflection = noise.make_reflection(maximally_entangled(n).amps, eps, level)
    fn = reflection.apply_adjoint if adjoint else reflection.apply
    state.apply_modeled("approx-reflect", fn, charge=constants.reflection_cost(eps))


# ---------------------------------------------------------------------------
# The search protocol


@dataclass
class SearchOutcome:
    index: int | None
    alice: int
    bob: int
    k: int
    meter: CostMeter


def search_known_t(instance: SearchInstance, t: int, rng: np.random.Generator,
                   noise: NoiseModel, *, constants: ProtocolConstants = DEFAULT_CONSTANTS,
                   meter: CostMeter | None = None, transcript: list | None = None,
                   method: str = "auto", state_probe: dict | None = None) -> SearchOutcome:
    """One amplification run assuming about t solutions; one-sided.

    Returns a verified solution index or None.  The guess t only sets the
    iteration count; correctness never depends on it.  state_probe, when
    given, receives the pre-measurement state for backend-equivalence
    tests.
    """
    n = instance.n
    if not 1 <= t <= n:
        raise ValueError(f"guess t={t} outside [1, {n}]")
    meter = meter if meter is not None else CostMeter()
    k = _iteration_count_cached(t, n)

    if method == "auto":
        method = "dense" if noise.variant == "phases" else "span"
    if method == "span" and noise.variant == "phases":
        raise ValueError("random-phase noise does not preserve the span; use dense")

    if method == "span":
        i, jj = _run_span(instance, k, noise, constants, meter, transcript, rng,
                          state_probe)
    elif method == "dense":
        i, jj = _run_dense(instance, k, noise, constants, meter, transcript, rng,
                           state_probe)
    else:
        raise ValueError(f"unknown method {method!r}")

    L = n.bit_length() - 1
    _charge(meter, transcript, "outcome-exchange", 2 * L)
    found = None
    if i == jj:
        _charge(meter, transcript, "verify-gadget", instance.G.require_cost())
        if instance.z[i] == -1:
            found = int(i)
    return SearchOutcome(found, int(i), int(jj), k, meter)


def _charge(meter, transcript, label, amount):
    meter.charge(label, amount)
    if transcript is not None:
        transcript.append(f"CHARGE {label} {amount}")


_K_CACHE: dict = {}


def _iteration_count_cached(t: int, n: int) -> int:
    key = (t, n)
    k = _K_CACHE.get(key)
    if k is None:
        k = iteration_count(grover_angle(t, n))
        _K_CACHE[key] = k
    return k


_SPAN_CACHE: dict = {}


def _span_run_params(variant: str, k: int, constants: ProtocolConstants):
    key = (variant, k, constants.eps_base, constants.eps_growth,
           constants.reflection_cost_extra)
    hit = _SPAN_CACHE.get(key)
    if hit is None:
        if variant == "perfect":
            phases = (complex(1.0),) * (k + 1)
        else:
            phases = (complex(1.0),) + tuple(
                complex(math.cos(2 * math.asin(constants.epsilon(j) / 2)),
                        math.sin(2 * math.asin(constants.epsilon(j) / 2)))
                for j in range(1, k + 1))
        costs = (0,) + tuple(constants.reflection_cost(constants.epsilon(j))
                             for j in range(1, k + 1))
        hit = (phases, costs)
        _SPAN_CACHE[key] = hit
    return hit


def _run_dense(instance, k, noise, constants, meter, transcript, rng,
               state_probe=None):
    n = instance.n
    L = ilog2(n)
    state = init_shared(n, epr_budget=L, meter=meter, transcript=transcript)
    psi = maximally_entangled(n).amps
    reflections = {j: noise.make_reflection(psi, constants.epsilon(j), j)
                   for j in range(1, k + 1)}
    and2 = instance.uses_and2_oracle
    diag = None if and2 else _oracle_diagonal(instance)
    q = instance.G.require_cost()

    def oracle(adjoint):
        if and2:
            _oracle_and2_explicit(state, instance)
        else:
            state.apply_modeled("oracle-gadget", lambda a: a * diag, charge=2 * q)

    def reflect(level, adjoint):
        approx_reflect(state, constants.epsilon(level), noise, level,
                       constants, reflection=reflections[level], adjoint=adjoint)

    amplamp.unfold(k, oracle, reflect)
    if state_probe is not None:
        state_probe["amps"] = state.joint.amps.copy()
    i = state.measure_party(Party.ALICE, rng)
    jj = state.measure_party(Party.BOB, rng)
    return i, jj


def _run_span(instance, k, noise, constants, meter, transcript, rng,
              state_probe=None):
    """Exact evolution in span{|G>, |B_diag>}; valid for span-preserving noise.

    The whole run is scalar arithmetic on the two span coordinates, so
    this path stays fast enough for the Monte-Carlo harnesses.
    """
    n = instance.n
    L = n.bit_length() - 1
    t_true = instance.solution_count()
    frac = t_true / n
    p0, p1 = math.sqrt(frac), math.sqrt(1.0 - frac)  # (sin, cos) of theta
    phases, refl_costs = _span_run_params(noise.variant, k, constants)
    meter.epr_consumed += L
    and2 = instance.uses_and2_oracle
    q = instance.G.require_cost()
    oracle_charge = 2 if and2 else 2 * q

    holder = [complex(p0), complex(p1)]

    def oracle(adjoint):
        holder[0] = -holder[0]
        if and2:
            meter.qubits_sent += 2
            if transcript is not None:
                transcript.append("SEND 1")
                transcript.append("SEND 1")
        else:
            _charge(meter, transcript, "oracle-gadget", oracle_charge)

    def reflect(level, adjoint):
        # c psi - e^{+/-i delta} (v - c psi) on the two coordinates
        ph = phases[level].conjugate() if adjoint else phases[level]
        a, b = holder
        c = p0 * a + p1 * b
        holder[0] = c * p0 - ph * (a - c * p0)
        holder[1] = c * p1 - ph * (b - c * p1)
        meter.charge("approx-reflect", refl_costs[level])
        if transcript is not None:
            transcript.append(f"CHARGE approx-reflect {refl_costs[level]}")

    amplamp.unfold(k, oracle, reflect)
    a, b = holder
    if state_probe is not None:
        state_probe["span"] = np.array([a, b])
    p_good = abs(a) ** 2 / (abs(a) ** 2 + abs(b) ** 2)
    if t_true > 0 and rng.random() < p_good:
        sols = instance.solution_indices()
        i = int(sols[rng.integers(0, t_true)])
    else:
        non = np.nonzero(instance.z == 1)[0]
        i = int(non[rng.integers(0, non.size)])
    if transcript is not None:
        transcript.append(f"MEASURE A {i}")
        transcript.append(f"MEASURE B {i}")
    return i, i


def search_unknown(instance: SearchInstance, rng: np.random.Generator,
                   noise: NoiseModel, *, constants: ProtocolConstants = DEFAULT_CONSTANTS,
                   meter: CostMeter | None = None, transcript: list | None = None,
                   method: str = "auto") -> SearchOutcome:
    """Exponentially decreasing guesses for t, repeated to push success to 0.99.

    One-sided like search_known_t: 'no' answers are never wrong.
    """
    n = instance.n
    meter = meter if meter is not None else CostMeter()
    last = None
    for _ in range(constants.search_sweeps):
        t = n
        while t >= 1:
            out = search_known_t(instance, t, rng, noise, constants=constants,
                                 meter=meter, transcript=transcript, method=method)
            last = out
            if out.index is not None:
                return out
            t //= 2
    return SearchOutcome(None, last.alice if last else -1,
                         last.bob if last else -1, last.k if last else 0, meter)
