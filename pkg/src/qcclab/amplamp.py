"""Recursive amplitude amplification, perfect and noisy.

The recursion A_{j+1} = A_j R A_j* O A_j is driven by operator
application on the state, never by materializing matrices.  Noise enters
only through the reflection about the initial state; the good-set
reflection is always exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .statevector import CVec

STEP_BUDGET_POW = 12  # hard cap: at most 3^12 leaf oracle applications


class StepBudgetError(RuntimeError):
    pass


def grover_angle(t: int, n: int) -> float:
    """arcsin(sqrt(t/n)) for t solutions in a size-n space."""
    if n < 1:
        raise ValueError("space size must be positive")
    if not 0 <= t <= n:
        raise ValueError(f"solution count {t} outside [0, {n}]")
    return math.asin(math.sqrt(t / n))


def iteration_count(theta: float) -> int:
    """k = floor(log3(pi / (2 theta))); afterwards 3^k * theta is in (pi/6, pi/2]."""
    if not 0 < theta <= math.pi / 2:
        raise ValueError(f"theta must lie in (0, pi/2], got {theta}")
    k = max(0, math.floor(math.log(math.pi / (2 * theta), 3) + 1e-12))
    while 3 ** (k + 1) * theta <= math.pi / 2:
        k += 1
    while k > 0 and 3 ** k * theta > math.pi / 2:
        k -= 1
    return k


def epsilon_schedule(j: int, base: int = 100, growth: int = 4) -> float:
    """eps_j = 1 / (base * growth^j); the partial sums stay below 1/300."""
    if j < 1:
        raise ValueError("schedule index starts at 1")
    return 1.0 / (base * growth ** j)


# ---------------------------------------------------------------------------
# Noise models for the reflection about the initial state


class Reflection:
    """Realized unitary with ||R - R_psi|| <= eps and R psi = psi."""

    def __init__(self, eps: float):
        self.eps = eps

    def apply(self, amps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply_adjoint(self, amps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def dense(self, dim: int) -> np.ndarray:
        out = np.empty((dim, dim), dtype=np.complex128)
        for i in range(dim):
            e = np.zeros(dim, dtype=np.complex128)
            e[i] = 1.0
            out[:, i] = self.apply(e)
        return out


class PerfectReflection(Reflection):
    def __init__(self, psi: np.ndarray):
        super().__init__(0.0)
        self.psi = psi

    def apply(self, amps):
        return 2.0 * np.vdot(self.psi, amps) * self.psi - amps

    apply_adjoint = apply


class PhaseOnComplementReflection(Reflection):
    """psi><psi| - e^{i delta} (I - |psi><psi|) with |e^{i delta} - 1| = eps."""

    def __init__(self, psi: np.ndarray, eps: float):
        super().__init__(eps)
        self.psi = psi
        self.delta = 2.0 * math.asin(eps / 2.0)
        self._phase = np.exp(1j * self.delta)

    def _run(self, amps, phase):
        c = np.vdot(self.psi, amps)
        return c * self.psi - phase * (amps - c * self.psi)

    def apply(self, amps):
        return self._run(amps, self._phase)

    def apply_adjoint(self, amps):
        return self._run(amps, np.conj(self._phase))


class RandomPhasesReflection(Reflection):
    """i.i.d. phases on a fixed orthonormal basis of the complement of psi.

    The basis is the Householder image of the standard basis, so single
    applications stay O(dim).
    """

    def __init__(self, psi: np.ndarray, eps: float, rng: np.random.Generator):
        super().__init__(eps)
        self.psi = psi
        dim = psi.size
        delta_max = 2.0 * math.asin(eps / 2.0)
        deltas = rng.uniform(-delta_max, delta_max, size=dim)
        diag = -np.exp(1j * deltas)
        diag[0] = 1.0
        self._diag = diag
        # Householder vector w mapping psi to alpha * e_0
        p0 = psi[0]
        alpha = p0 / abs(p0) if abs(p0) > 1e-14 else 1.0
        w = psi.astype(np.complex128).copy()
        w[0] -= alpha
        wn = np.linalg.norm(w)
        self._w = None if wn < 1e-14 else w / wn

    def _householder(self, v):
        if self._w is None:
            return v.copy()
        return v - 2.0 * np.vdot(self._w, v) * self._w

    def apply(self, amps):
        u = self._householder(amps)
        u *= self._diag
        return self._householder(u)

    def apply_adjoint(self, amps):
        u = self._householder(amps)
        u *= np.conj(self._diag)
        return self._householder(u)


@dataclass(frozen=True)
class NoiseModel:
    """PERFECT | PHASE_ON_COMPLEMENT | RANDOM_PHASES, with a seed for the latter."""

    variant: str = "perfect"
    seed: int = 0

    VARIANTS = ("perfect", "phase", "phases")

    def __post_init__(self):
        if self.variant not in self.VARIANTS:
            raise ValueError(f"unknown noise variant {self.variant!r}")

    def make_reflection(self, psi: np.ndarray, eps: float, level: int) -> Reflection:
        if self.variant == "perfect":
            return PerfectReflection(psi)
        if self.variant == "phase":
            return PhaseOnComplementReflection(psi, eps)
        rng = np.random.default_rng([self.seed, level])
        return RandomPhasesReflection(psi, eps, rng)


def verify_reflection_contract(refl: Reflection, psi: np.ndarray,
                               atol: float = 1e-9) -> float:
    """Operator-norm distance to the exact reflection; also checks R psi = psi.

    Materializes dense matrices, so only meant for small dimensions.
    """
    fixed = refl.apply(psi.astype(np.complex128))
    if np.linalg.norm(fixed - psi) > atol:
        raise AssertionError("reflection does not fix psi")
    dim = psi.size
    exact = 2.0 * np.outer(psi, psi.conj()) - np.eye(dim)
    diff = refl.dense(dim) - exact
    return float(np.linalg.svd(diff, compute_uv=False)[0])


# ---------------------------------------------------------------------------
# The recursion driver


def unfold(k: int, oracle, reflect, adjoint: bool = False) -> None:
    """Fire oracle/reflection callbacks in the exact operation order of A_k.

    oracle(adjoint: bool); reflect(level: int, adjoint: bool).  The
    callbacks own the state.
    """
    def a(j: int, adj: bool) -> None:
        if j == 0:
            return
        if not adj:
            a(j - 1, False)
            oracle(False)
            a(j - 1, True)
            reflect(j, False)
            a(j - 1, False)
        else:
            a(j - 1, True)
            reflect(j, True)
            a(j - 1, False)
            oracle(True)
            a(j - 1, True)

    a(k, adjoint)


@dataclass
class AmplSetup:
    """Initial state, good-set projector and the derived rotation angle."""

    initial: CVec
    good_mask: np.ndarray
    theta: float | None = None

    def __post_init__(self):
        mask = np.asarray(self.good_mask, dtype=bool)
        if mask.shape != (self.initial.dim,):
            raise ValueError("good mask must cover every basis index")
        self.good_mask = mask
        amp_good = float(np.linalg.norm(self.initial.amps[mask]))
        derived = math.asin(min(1.0, amp_good))
        if self.theta is None:
            self.theta = derived
        elif abs(math.sin(self.theta) - amp_good) > 1e-9:
            raise ValueError(
                f"sin(theta)={math.sin(self.theta):.12f} != |P_G psi|={amp_good:.12f}")

    @classmethod
    def from_good_set(cls, initial: CVec, good_indices) -> "AmplSetup":
        mask = np.zeros(initial.dim, dtype=bool)
        mask[list(good_indices)] = True
        return cls(initial, mask)

    def good_state(self) -> np.ndarray:
        """|G> = P_G psi / |P_G psi|, or the zero vector when empty."""
        proj = np.where(self.good_mask, self.initial.amps, 0.0)
        nrm = np.linalg.norm(proj)
        return proj / nrm if nrm > 1e-15 else proj

    def bad_state(self) -> np.ndarray:
        proj = np.where(self.good_mask, 0.0, self.initial.amps)
        nrm = np.linalg.norm(proj)
        return proj / nrm if nrm > 1e-15 else proj


@dataclass
class AmplResult:
    final: CVec
    eta_trace: list[float]
    oracle_calls: int
    reflection_calls: list[int]


def run(setup: AmplSetup, noise: NoiseModel, k: int,
        reflect_impl=None, *, eps_schedule_fn=epsilon_schedule,
        on_oracle=None, on_reflection=None) -> AmplResult:
    """Compute A_j psi for j = 0..k with error-state tracking.

    reflect_impl(level, eps) may supply custom Reflection objects (the
    distributed runtime wraps them with cost charges); by default they are
    realized from the noise model.  eta_trace[j] is the norm of
    A_j psi - (sin(3^j theta)|G> + cos(3^j theta)|B>).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if 3 ** k > 3 ** STEP_BUDGET_POW:
        raise StepBudgetError(f"3^{k} leaf steps exceed the 3^{STEP_BUDGET_POW} cap")
    psi = setup.initial.amps
    if reflect_impl is None:
        reflect_impl = lambda level, eps: noise.make_reflection(psi, eps, level)
    reflections = {j: reflect_impl(j, eps_schedule_fn(j)) for j in range(1, k + 1)}
    sign = np.where(setup.good_mask, -1.0, 1.0)

    good = setup.good_state()
    bad = setup.bad_state()
    theta = setup.theta

    state = {"v": psi.copy()}
    counters = {"oracle": 0, "refl": [0] * (k + 1)}

    def oracle(adjoint: bool) -> None:
        state["v"] = state["v"] * sign
        counters["oracle"] += 1
        if on_oracle is not None:
            on_oracle()

    def reflect(level: int, adjoint: bool) -> None:
        r = reflections[level]
        state["v"] = r.apply_adjoint(state["v"]) if adjoint else r.apply(state["v"])
        counters["refl"][level] += 1
        if on_reflection is not None:
            on_reflection(level)

    def eta(j: int) -> float:
        target = math.sin(3 ** j * theta) * good + math.cos(3 ** j * theta) * bad
        return float(np.linalg.norm(state["v"] - target))

    trace = [eta(0)]
    for j in range(k):
        # psi_{j+1} = A_j ( R_{j+1} ( A_j^* ( O psi_j ) ) )
        oracle(False)
        unfold(j, oracle, reflect, adjoint=True)
        reflect(j + 1, False)
        unfold(j, oracle, reflect, adjoint=False)
        trace.append(eta(j + 1))

    return AmplResult(CVec(state["v"]), trace, counters["oracle"], counters["refl"])
