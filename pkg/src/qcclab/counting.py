"""Counting protocols over z = (G(X_1,Y_1), ..., G(X_n,Y_n)).

Part 1 filters out large solution counts by sampling a random subset and
running distributed search on it; Part 2 sweeps solutions out of z by
repeated search-and-patch rounds under an explicit qubit budget.  The
combination reports the exact count or "above threshold" with error at
most 1/8, and two counting runs evaluate any symmetric function of z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .amplamp import NoiseModel
from .boolfn import Gadget, SymmetricSpec, counting_threshold, gamma
from .runtime import CostMeter, DEFAULT_CONSTANTS, ProtocolConstants
from .search import SearchInstance, search_known_t, search_unknown

CASE1 = "CASE1"
CASE2 = "CASE2"


@dataclass
class CountReport:
    """EXACT(count) or ABOVE_THRESHOLD(t), with the meter and phase trace."""

    outcome: str  # "exact" | "above"
    count: int | None
    threshold: int
    meter: CostMeter
    trace: list

    @property
    def is_exact(self) -> bool:
        return self.outcome == "exact"


def subset_hit_probability(n: int, w: int, m: int) -> Fraction:
    """P[at least one of w solutions lands in a uniform m-subset of [n]]."""
    if w <= 0:
        return Fraction(0)
    if m + w > n:
        return Fraction(1)
    return 1 - Fraction(math.comb(n - w, m), math.comb(n, m))


def part1_parameters(n: int, t: int,
                     constants: ProtocolConstants = DEFAULT_CONSTANTS):
    """Subset size, the exact (p1, p2) pair, the decision threshold and the
    Hoeffding repetition count pushing the filter error below its target."""
    m = math.ceil(n / (2 * t))
    p1 = float(subset_hit_probability(n, 2 * t, m))
    p2 = float(subset_hit_probability(n, t, m))
    tau = (p1 + p2) / 2.0
    slb = constants.part1_search_success_lb
    margin1 = p1 * slb - tau
    margin2 = tau - p2
    margin = min(margin1, margin2)
    if margin <= 0:
        raise ValueError(
            f"no decision margin at n={n}, t={t}: p1={p1:.4f}, p2={p2:.4f}")
    reps = math.ceil(math.log(2.0 / constants.part1_error_target)
                     / (2.0 * margin * margin))
    return m, p1, p2, tau, reps


def part1_filter(instance: SearchInstance, t: int, rng: np.random.Generator,
                 noise: NoiseModel = NoiseModel("phase"),
                 constants: ProtocolConstants = DEFAULT_CONSTANTS,
                 meter: CostMeter | None = None, trace: list | None = None,
                 method: str = "auto") -> str:
    """Decide |z| >= 2t (CASE1) versus proceed-to-counting (CASE2)."""
    n = instance.n
    if not 1 <= t <= n // 2:
        raise ValueError(f"threshold t={t} outside [1, {n // 2}]")
    meter = meter if meter is not None else CostMeter()
    m, p1, p2, tau, reps = part1_parameters(n, t, constants)
    hits = 0
    for _ in range(reps):
        subset = rng.choice(n, size=m, replace=False)
        meter.shared_random_bits += m * math.ceil(math.log2(n))
        restricted, _ = instance.restrict(subset)
        out = search_unknown(restricted, rng, noise, constants=constants,
                             meter=meter, method=method)
        if out.index is not None:
            hits += 1
    fraction = hits / reps
    case = CASE1 if fraction > tau else CASE2
    if trace is not None:
        trace.append(f"part1 m={m} reps={reps} fraction={fraction:.4f} "
                     f"tau={tau:.4f} -> {case}")
    return case


def protocol_Pk(work: SearchInstance, k: int, rng: np.random.Generator,
                noise: NoiseModel = NoiseModel("phase"),
                constants: ProtocolConstants = DEFAULT_CONSTANTS,
                meter: CostMeter | None = None, trace: list | None = None,
                method: str = "auto") -> list:
    """Search-and-patch with guess 2^(k-1) until the qubit budget is spent.

    Mutates the working instance (each found solution is replaced by the
    pre-agreed non-solution).  Every returned index was verified.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    meter = meter if meter is not None else CostMeter()
    n = work.n
    q = work.G.require_cost()
    budget = constants.pk_budget_constant * math.sqrt((1 << k) * n) * q
    start = meter.total_cost
    found = []
    while meter.total_cost - start < budget:
        out = search_known_t(work, 1 << (k - 1), rng, noise,
                             constants=constants, meter=meter, method=method)
        if out.index is not None:
            found.append(out.index)
            work.patch(out.index)
    if trace is not None:
        trace.append(f"P_{k} found={len(found)} "
                     f"cost={meter.total_cost - start}")
    return found


def protocol_P(instance: SearchInstance, t: int, rng: np.random.Generator,
               noise: NoiseModel = NoiseModel("phase"),
               constants: ProtocolConstants = DEFAULT_CONSTANTS,
               meter: CostMeter | None = None, trace: list | None = None,
               method: str = "auto") -> CountReport:
    """Find all solutions assuming |z| < 2t; reports EXACT(found)."""
    meter = meter if meter is not None else CostMeter()
    trace = trace if trace is not None else []
    work = instance.copy()
    big_k = max(1, math.ceil(math.log2(2 * t)))
    total = 0
    for k in range(big_k, 0, -1):
        reps = big_k - k + 5
        for _ in range(reps):
            total += len(protocol_Pk(work, k, rng, noise, constants=constants,
                                     meter=meter, trace=trace, method=method))
    return CountReport("exact", total, t, meter, trace)


def count_or_threshold(instance: SearchInstance, t: int, rng: np.random.Generator,
                       noise: NoiseModel = NoiseModel("phase"),
                       constants: ProtocolConstants = DEFAULT_CONSTANTS,
                       method: str = "auto") -> CountReport:
    """Tell |z| exactly or that |z| > t; error probability at most 1/8."""
    meter = CostMeter()
    trace: list = []
    case = part1_filter(instance, t, rng, noise, constants=constants,
                        meter=meter, trace=trace, method=method)
    if case == CASE1:
        return CountReport("above", None, t, meter, trace)
    return protocol_P(instance, t, rng, noise, constants=constants,
                      meter=meter, trace=trace, method=method)


@dataclass
class EvalOutcome:
    value: int
    weight_claimed: int | None
    minus_report: CountReport | None
    plus_report: CountReport | None

    @property
    def total_cost(self) -> int:
        return sum(r.meter.total_cost for r in (self.minus_report, self.plus_report)
                   if r is not None)

    @property
    def epr_consumed(self) -> int:
        return sum(r.meter.epr_consumed for r in (self.minus_report, self.plus_report)
                   if r is not None)


def eval_symmetric(f: SymmetricSpec, G: Gadget, X, Y, rng: np.random.Generator,
                   noise: NoiseModel = NoiseModel("phase"),
                   constants: ProtocolConstants = DEFAULT_CONSTANTS,
                   method: str = "auto") -> EvalOutcome:
    """Evaluate f(G(X_1,Y_1), ..., G(X_n,Y_n)) with error at most 1/4.

    Counts the -1s and the +1s of z up to t = ceil((n - Gamma(f))/2); when
    both counts exceed t the weight sits in the interval where f is
    constant.  Constant f short-circuits at zero quantum cost.
    """
    n = f.n
    t = counting_threshold(f)
    if t == 0:
        return EvalOutcome(int(f.weight_values[0]), None, None, None)
    instance = SearchInstance(G, X, Y)
    minus = count_or_threshold(instance, t, rng, noise, constants=constants,
                               method=method)
    plus_instance = SearchInstance(G.negated(), X, Y)
    plus = count_or_threshold(plus_instance, t, rng, noise, constants=constants,
                              method=method)
    if minus.is_exact:
        w = minus.count
    elif plus.is_exact:
        w = n - plus.count
    else:
        w = t + 1  # f is constant on [t+1, n-t-1]
    return EvalOutcome(f.value_at_weight(w), w, minus, plus)


def bcw_baseline_cost(f: SymmetricSpec, n: int, G: Gadget,
                      constants: ProtocolConstants = DEFAULT_CONSTANTS) -> int:
    """Query-simulation cost model: Theta(sqrt((n - Gamma) n)) queries,
    each charged 2 ceil(log n) + 2 qubits.  Not a simulation."""
    if f.is_constant():
        return 0
    g = gamma(f)
    queries = math.ceil(constants.bcw_query_constant * math.sqrt((n - g) * n))
    return queries * (2 * math.ceil(math.log2(n)) + 2)
