"""Alice/Bob protocol substrate: qubit ownership, metered channel, EPR budget.

Joint operations are only possible through registered modeled
subprotocols, which must declare a communication charge; everything else
goes through per-party local application or an explicit send.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .statevector import CVec, UnitaryOp, apply, maximally_entangled, measure


class Party(Enum):
    ALICE = "A"
    BOB = "B"

    def other(self) -> "Party":
        return Party.BOB if self is Party.ALICE else Party.ALICE


class OwnershipError(RuntimeError):
    pass


class BudgetError(RuntimeError):
    pass


class UnregisteredJointOpError(RuntimeError):
    pass


_MODELED_REGISTRY: set[str] = set()


def register_modeled(label: str) -> None:
    """Allow a joint-modeled subprotocol label; it must charge cost on use."""
    _MODELED_REGISTRY.add(label)


@dataclass
class CostMeter:
    """Monotone counters for the communication resources of one run."""

    qubits_sent: int = 0
    epr_consumed: int = 0
    shared_random_bits: int = 0
    queries: int = 0
    abstract_charges: list = field(default_factory=list)
    _abstract_sum: int = 0

    def charge(self, label: str, amount: int) -> None:
        if amount < 0:
            raise ValueError("charges must be nonnegative")
        self.abstract_charges.append((label, int(amount)))
        self._abstract_sum += int(amount)

    @property
    def abstract_total(self) -> int:
        return self._abstract_sum

    @property
    def total_cost(self) -> int:
        return self.qubits_sent + self.abstract_total

    def snapshot(self) -> dict:
        return {
            "qubits_sent": self.qubits_sent,
            "epr_consumed": self.epr_consumed,
            "shared_random_bits": self.shared_random_bits,
            "queries": self.queries,
            "abstract_total": self.abstract_total,
            "total_cost": self.total_cost,
        }


@dataclass
class ProtocolConstants:
    """Paper constants surfaced as configuration.

    reflection_cost(eps) = ceil(log2(1/eps)) + reflection_cost_extra models
    the O(log(1/eps))-qubit approximate-reflection subprotocol.  The Part-2
    budget constant (200) and its per-run success floor (1/100), the
    epsilon schedule base/growth, and the repetition policies are kept at
    the stated defaults but are overridable.
    """

    reflection_cost_extra: int = 2
    eps_base: int = 100
    eps_growth: int = 4
    pk_budget_constant: int = 200
    pk_success_floor: float = 0.01
    search_sweeps: int = 31
    sweep_success_floor: float = 0.14
    part1_error_target: float = 1.0 / 16.0
    part1_search_success_lb: float = 0.98
    step_budget_pow: int = 12
    bcw_query_constant: float = 1.0

    def reflection_cost(self, eps: float) -> int:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        return math.ceil(math.log2(1.0 / eps) - 1e-12) + self.reflection_cost_extra

    def epsilon(self, j: int) -> float:
        if j < 1:
            raise ValueError("schedule index starts at 1")
        return 1.0 / (self.eps_base * self.eps_growth ** j)


DEFAULT_CONSTANTS = ProtocolConstants()


class TwoPartyState:
    """Joint statevector with per-qubit ownership tags and a cost meter."""

    def __init__(self, joint: CVec, owner: list[Party], meter: CostMeter,
                 transcript: list[str] | None = None):
        if joint.dim != 1 << len(owner):
            raise ValueError("owner tags do not match joint dimension")
        self.joint = joint
        self.owner = list(owner)
        self.meter = meter
        self.transcript = transcript

    def _log(self, line: str) -> None:
        if self.transcript is not None:
            self.transcript.append(line)

    def qubits_of(self, party: Party) -> list[int]:
        return [i for i, p in enumerate(self.owner) if p is party]

    def apply_local(self, party: Party, op: UnitaryOp, qubits=None) -> None:
        """Apply an operator touching only the acting party's qubits."""
        targets = qubits if qubits is not None else getattr(op, "qubits", None)
        if targets is None:
            raise OwnershipError("local application requires explicit target qubits")
        for q in targets:
            if self.owner[q] is not party:
                raise OwnershipError(
                    f"{party.name} cannot act on qubit {q} owned by {self.owner[q].name}")
        self.joint = apply(self.joint, op)

    def apply_local_transform(self, party: Party, qubits, fn) -> None:
        """Local basis transform given as an amps -> amps function."""
        for q in qubits:
            if self.owner[q] is not party:
                raise OwnershipError(
                    f"{party.name} cannot act on qubit {q} owned by {self.owner[q].name}")
        self.joint = CVec(fn(self.joint.amps))

    def apply_modeled(self, label: str, fn, charge: int) -> None:
        """Joint unitary of a registered modeled subprotocol; charges cost."""
        if label not in _MODELED_REGISTRY:
            raise UnregisteredJointOpError(
                f"joint operation {label!r} is not a registered modeled subprotocol")
        self.charge_abstract(label, charge)
        self.joint = CVec(fn(self.joint.amps))

    def send(self, qubits, to: Party) -> None:
        sender = to.other()
        for q in qubits:
            if self.owner[q] is not sender:
                raise OwnershipError(
                    f"cannot send qubit {q}: owned by {self.owner[q].name}, "
                    f"not by {sender.name}")
        for q in qubits:
            self.owner[q] = to
        self.meter.qubits_sent += len(list(qubits))
        self._log(f"SEND {len(list(qubits))}")

    def charge_abstract(self, label: str, amount: int) -> None:
        self.meter.charge(label, amount)
        self._log(f"CHARGE {label} {amount}")

    def shared_random(self, bits: int, rng: np.random.Generator) -> tuple:
        """Uniform bits visible to both parties; metered but free in cost."""
        if bits < 0:
            raise ValueError("bit count must be nonnegative")
        out = tuple(int(b) for b in rng.integers(0, 2, size=bits))
        self.meter.shared_random_bits += bits
        self._log(f"RAND {bits}")
        return out

    def measure_party(self, party: Party, rng: np.random.Generator) -> int:
        qubits = self.qubits_of(party)
        bits, collapsed = measure(self.joint, qubits, rng)
        self.joint = collapsed
        value = 0
        for b in bits:
            value = (value << 1) | b
        self._log(f"MEASURE {party.name} {value}")
        return value

    def add_ancilla(self, party: Party) -> int:
        """Append a |0> qubit owned by party; returns its index."""
        amps = np.zeros(self.joint.dim * 2, dtype=np.complex128)
        amps[0::2] = self.joint.amps
        self.joint = CVec(amps)
        self.owner.append(party)
        return len(self.owner) - 1

    def drop_last_qubit(self, atol: float = 1e-12) -> None:
        """Remove the last qubit, which must be |0> up to atol."""
        amps = self.joint.amps
        residue = float(np.linalg.norm(amps[1::2]))
        if residue > atol:
            raise ValueError(f"ancilla not restored to |0>: residue {residue:.3e}")
        self.joint = CVec(amps[0::2].copy())
        self.owner.pop()


def init_shared(n: int, epr_budget: int, meter: CostMeter | None = None,
                transcript: list[str] | None = None) -> TwoPartyState:
    """Maximally entangled start on log(n)+log(n) qubits, drawn from the budget."""
    need = math.ceil(math.log2(n))
    if epr_budget < need:
        raise BudgetError(
            f"entangled start needs {need} EPR pairs, budget is {epr_budget}")
    meter = meter if meter is not None else CostMeter()
    joint = maximally_entangled(n)
    L = need
    owner = [Party.ALICE] * L + [Party.BOB] * L
    meter.epr_consumed += need
    return TwoPartyState(joint, owner, meter, transcript)
