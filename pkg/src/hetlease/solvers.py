"""Per-slot decision procedures for the switching problem.

Four methods share one contract: given a scenario and a slot, return a
feasible switch vector, its revenue through the canonical objective, and
the number of objective evaluations spent.

* ``sa_solve_slot``: simulated annealing over the on/off lattice with
  three neighborhood moves applied sequentially (flip one bit, flip two
  bits, exchange two bits), linear cooling, and a shaking restart from
  the incumbent best at every temperature change.
* ``es_solve_slot``: exhaustive enumeration of all 2^N vectors; the
  ground-truth oracle, capped to keep runtime bounded.
* ``sorting_solve_slot``: greedy heuristics that rank SBSs by a
  lease-versus-load utility and switch them off in ranked order until
  the macro cell is full (descending = D-type, ascending = A-type).
"""

from __future__ import annotations

import enum
import hashlib
import logging
import math
import random
import time
from dataclasses import dataclass

from .economics import sbs_off_weights, total_revenue_slot
from .feasibility import is_feasible, offload_contribution
from .model import (
    DegenerateInstanceError,
    EnumerationCapError,
    InfeasibleSwitchError,
    RevenueBreakdown,
    Scenario,
    SolverResult,
    SwitchVector,
    daily_breakdown,
)

logger = logging.getLogger(__name__)

# exhaustive search hard cap: 2^24 states per slot is the most we ever enumerate
ES_MAX_SBS = 24

# random candidate draws before falling back to enumerating the neighborhood
_RETRY_DRAWS = 32

# random initial-solution draws before falling back to all-on
_INIT_DRAWS = 10_000


@dataclass(frozen=True)
class SaParams:
    """Annealing schedule and acceptance parameters.

    Cooling is linear: the temperature starts at ``t_init`` and drops by
    ``alpha`` after every level until it would reach ``t_final``.  Each
    level runs ``k_factor * N`` local iterations, and each iteration
    tries all three neighborhoods in a fixed order.
    """

    t_init: float = 1.0
    t_final: float = 0.01
    alpha: float = 0.01
    k_factor: int = 10
    boltzmann_k: float = 1.0
    shake_flip_prob: float = 0.2
    rng_seed: int = 0

    def __post_init__(self):
        if not self.t_init > self.t_final > 0:
            raise ValueError("need t_init > t_final > 0")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.k_factor < 1:
            raise ValueError("k_factor must be at least 1")
        if self.boltzmann_k <= 0:
            raise ValueError("boltzmann_k must be positive")
        if not 0.0 <= self.shake_flip_prob <= 1.0:
            raise ValueError("shake_flip_prob must lie in [0, 1]")

    def temperature_levels(self) -> int:
        """Number of temperature levels the cooling loop executes.

        Defaults give ceil((1 - 0.01) / 0.01) = 99 levels; the epsilon
        guards against float noise flipping the ceiling.
        """
        span = (self.t_init - self.t_final) / self.alpha
        return max(0, math.ceil(span - 1e-9))


class Method(enum.Enum):
    """Solver identifiers used by day-level runs, benchmarks, and the CLI."""

    SA = "sa"
    ES = "es"
    A_TYPE = "atype"
    D_TYPE = "dtype"

    @classmethod
    def from_str(cls, token: str) -> "Method":
        aliases = {
            "sa": cls.SA,
            "es": cls.ES,
            "atype": cls.A_TYPE,
            "a-type": cls.A_TYPE,
            "a": cls.A_TYPE,
            "dtype": cls.D_TYPE,
            "d-type": cls.D_TYPE,
            "d": cls.D_TYPE,
        }
        try:
            return aliases[token.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown method {token!r}") from None


class SortOrder(enum.Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


def _slot_rng(seed: int, slot: int) -> random.Random:
    """Private RNG per (seed, slot); parallel and serial runs agree."""
    digest = hashlib.blake2b(f"{seed}:{slot}".encode(), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


# --- neighborhood moves over the SBS bits -------------------------------
#
# Internally a state is an int bitmask over SBSs: bit j set means SBS
# j+1 is off.  The macro bit never appears in the mask.

def _off_mask(switch: SwitchVector) -> int:
    return switch.off_mask()


def _two_distinct(rng: random.Random, n: int) -> tuple[int, int]:
    # uniform over ordered pairs of distinct indices
    a = rng.randrange(n)
    b = rng.randrange(n - 1)
    if b >= a:
        b += 1
    return a, b


def _move_flip_one(mask: int, rng: random.Random, n: int) -> int:
    return mask ^ (1 << rng.randrange(n))


def _move_flip_two(mask: int, rng: random.Random, n: int) -> int:
    a, b = _two_distinct(rng, n)
    return mask ^ (1 << a) ^ (1 << b)


def _move_swap(mask: int, rng: random.Random, n: int) -> int:
    a, b = _two_distinct(rng, n)
    if (mask >> a) & 1 != (mask >> b) & 1:
        return mask ^ (1 << a) ^ (1 << b)
    return mask


def _neighborhood_masks(kind: int, mask: int, n: int) -> list[int]:
    """Every mask one move away, listed once per underlying index choice."""
    if kind == 0:
        return [mask ^ (1 << j) for j in range(n)]
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            if kind == 1:
                out.append(mask ^ (1 << a) ^ (1 << b))
            elif (mask >> a) & 1 != (mask >> b) & 1:
                out.append(mask ^ (1 << a) ^ (1 << b))
            else:
                out.append(mask)
    return out


def neighbor_one_reserve(switch: SwitchVector, rng: random.Random) -> SwitchVector:
    """Flip one uniformly chosen SBS bit; the macro bit is never touched."""
    n = switch.num_sbs
    if n < 1:
        raise DegenerateInstanceError("one-reserve move needs at least one SBS")
    return SwitchVector.from_off_mask(_move_flip_one(_off_mask(switch), rng, n), n)


def neighbor_two_reserve(switch: SwitchVector, rng: random.Random) -> SwitchVector:
    """Flip two distinct uniformly chosen SBS bits."""
    n = switch.num_sbs
    if n < 2:
        raise DegenerateInstanceError("two-reserve move needs at least two SBSs")
    return SwitchVector.from_off_mask(_move_flip_two(_off_mask(switch), rng, n), n)


def neighbor_swap(switch: SwitchVector, rng: random.Random) -> SwitchVector:
    """Exchange the values of two distinct SBS positions; off-count preserved."""
    n = switch.num_sbs
    if n < 2:
        raise DegenerateInstanceError("swap move needs at least two SBSs")
    return SwitchVector.from_off_mask(_move_swap(_off_mask(switch), rng, n), n)


def shake(switch: SwitchVector, params: SaParams, rng: random.Random) -> SwitchVector:
    """Diversification kick: flip each SBS bit independently with
    probability ``shake_flip_prob``.  The result may be infeasible; the
    annealing loop only ever moves to feasible candidates afterwards."""
    n = switch.num_sbs
    mask = _off_mask(switch)
    p = params.shake_flip_prob
    for j in range(n):
        if rng.random() < p:
            mask ^= 1 << j
    return SwitchVector.from_off_mask(mask, n)


def metropolis_accept(
    current_revenue: float,
    candidate_revenue: float,
    temperature: float,
    params: SaParams,
    rng: random.Random,
) -> bool:
    """Accept a candidate: always if it does not lose revenue, otherwise
    with probability exp(-gap / (K * temperature)) from one uniform draw."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if candidate_revenue >= current_revenue:
        return True
    gap = current_revenue - candidate_revenue
    return rng.random() < math.exp(-gap / (params.boltzmann_k * temperature))


def sa_solve_slot(
    scenario: Scenario,
    slot: int,
    params: SaParams | None = None,
    trace: list | None = None,
) -> tuple[SwitchVector, RevenueBreakdown, int]:
    """Simulated annealing over one slot's switch lattice.

    The search walks on the additive per-SBS revenue weights (an exact
    linear decomposition of the objective), keeping feasibility checks
    in the same accumulation order as the canonical path so both agree
    on every boundary case.  The returned revenue is re-evaluated
    through the canonical objective.

    Candidate generation redraws a move when it lands on an infeasible
    state; after a bounded number of draws the neighborhood is resolved
    exactly (enumerate it, pick uniformly among its feasible states, or
    skip the step when none exists).  The evaluation count therefore
    equals levels x k x neighborhoods whenever every neighborhood stays
    non-empty, and only provably-empty steps are skipped.

    Args:
        scenario: problem instance.
        slot: slot index in range(scenario.num_slots).
        params: annealing parameters; defaults to SaParams().
        trace: optional list collecting the best-so-far search value
            after every evaluation (monotonically non-decreasing).

    Returns:
        (best switch, canonical revenue, objective evaluations).
    """
    if params is None:
        params = SaParams()
    n = scenario.num_sbs
    if n == 0:
        only = scenario.all_on()
        return only, total_revenue_slot(scenario, slot, only), 0

    rng = _slot_rng(params.rng_seed, slot)
    rnd = rng.random
    exp = math.exp
    base = scenario.load(0, slot)
    cap = scenario.mbs_capacity_limit
    contrib = [offload_contribution(scenario, j, slot) for j in range(1, n + 1)]
    weights = sbs_off_weights(scenario, slot)

    load_cache: dict[int, float] = {}
    value_cache: dict[int, float] = {}
    lc_get = load_cache.get
    vc_get = value_cache.get

    def load_of(mask: int) -> float:
        # ascending-index accumulation, identical to offloaded_mbs_load
        load = base
        m = mask
        j = 0
        while m:
            if m & 1:
                load += contrib[j]
            m >>= 1
            j += 1
        load_cache[mask] = load
        return load

    def value_of(mask: int) -> float:
        value = 0.0
        m = mask
        j = 0
        while m:
            if m & 1:
                value += weights[j]
            m >>= 1
            j += 1
        value_cache[mask] = value
        return value

    # neighborhoods with no feasible state, resolved by full enumeration;
    # keyed by (state, move kind) packed into one int
    empty_steps: set[int] = set()
    feasible_sets: dict[int, list[int]] = {}

    def resolve_by_enumeration(kind: int, cur: int, key: int) -> int | None:
        feas = feasible_sets.get(key)
        if feas is None:
            feas = []
            for c in _neighborhood_masks(kind, cur, n):
                lv = lc_get(c)
                if lv is None:
                    lv = load_of(c)
                if lv <= cap:
                    feas.append(c)
            feasible_sets[key] = feas
            if not feas:
                empty_steps.add(key)
                logger.debug(
                    "slot %d: neighborhood %d empty from state %#x", slot, kind, cur
                )
        if not feas:
            return None
        return feas[int(rnd() * len(feas))]

    # random feasible initial solution; all-on is the guaranteed fallback
    current = 0
    for _ in range(_INIT_DRAWS):
        probe = rng.getrandbits(n)
        lv = lc_get(probe)
        if lv is None:
            lv = load_of(probe)
        if lv <= cap:
            current = probe
            break
    cur_val = vc_get(current)
    if cur_val is None:
        cur_val = value_of(current)
    best, best_val = current, cur_val

    neighborhoods = (0, 1, 2) if n >= 2 else (0,)
    k = params.k_factor * n
    kboltz = params.boltzmann_k
    nm1 = n - 1
    p_shake = params.shake_flip_prob
    evaluations = 0
    skipped = 0

    for level in range(params.temperature_levels()):
        kt = kboltz * (params.t_init - level * params.alpha)
        for _ in range(k):
            for kind in neighborhoods:
                key = (current << 2) | kind
                if key in empty_steps:
                    skipped += 1
                    continue
                # rejection-sample a feasible neighbor (same move semantics
                # as the public neighbor_* operations)
                cand = -1
                for _draw in range(_RETRY_DRAWS):
                    if kind == 0:
                        c = current ^ (1 << int(rnd() * n))
                    else:
                        a = int(rnd() * n)
                        b = int(rnd() * nm1)
                        if b >= a:
                            b += 1
                        if kind == 1 or ((current >> a) ^ (current >> b)) & 1:
                            c = current ^ (1 << a) ^ (1 << b)
                        else:
                            c = current  # swap of equal bits
                    lv = lc_get(c)
                    if lv is None:
                        lv = load_of(c)
                    if lv <= cap:
                        cand = c
                        break
                if cand < 0:
                    resolved = resolve_by_enumeration(kind, current, key)
                    if resolved is None:
                        skipped += 1
                        continue
                    cand = resolved
                val = vc_get(cand)
                if val is None:
                    val = value_of(cand)
                evaluations += 1
                if val >= cur_val or rnd() < exp((val - cur_val) / kt):
                    current, cur_val = cand, val
                if val > best_val:
                    best, best_val = cand, val
                if trace is not None:
                    trace.append(best_val)
        # diversify: restart the walk from a kicked copy of the best
        mask = best
        for j in range(n):
            if rnd() < p_shake:
                mask ^= 1 << j
        current = mask
        cur_val = vc_get(current)
        if cur_val is None:
            cur_val = value_of(current)

    if skipped:
        logger.debug(
            "slot %d: %d neighborhood steps had no feasible move", slot, skipped
        )
    switch = SwitchVector.from_off_mask(best, n)
    return switch, total_revenue_slot(scenario, slot, switch), evaluations


def es_solve_slot(
    scenario: Scenario, slot: int, cap: int = ES_MAX_SBS
) -> tuple[SwitchVector, RevenueBreakdown, int]:
    """Enumerate every switch vector and return the feasible revenue maximizer.

    Every mask is pushed through the canonical feasibility check and
    objective.  Ties are broken toward fewer SBSs off, then the lower
    off-bitmask value.  The evaluation count equals the number of masks
    visited, 2^N, infeasible ones included.
    """
    n = scenario.num_sbs
    if n > cap:
        raise EnumerationCapError(
            f"{n} SBSs means 2^{n} states; enumeration is capped at {cap} SBSs"
        )
    best_switch = None
    best_revenue = None
    best_key = None
    evaluations = 0
    for mask in range(1 << n):
        evaluations += 1
        switch = SwitchVector.from_off_mask(mask, n)
        if not is_feasible(scenario, slot, switch).feasible:
            continue
        revenue = total_revenue_slot(scenario, slot, switch)
        key = (-revenue.total, mask.bit_count(), mask)
        if best_key is None or key < best_key:
            best_switch, best_revenue, best_key = switch, revenue, key
    # mask 0 (all-on) is always feasible, so a maximizer always exists
    assert best_switch is not None and best_revenue is not None
    return best_switch, best_revenue, evaluations


def utility_vector(scenario: Scenario, slot: int) -> list[float]:
    """Per-SBS ranking score: leasable demand (as a fraction of the SBS's
    own resource blocks) minus its traffic load.  High scores mark cells
    that are cheap to offload and lucrative to lease."""
    out = []
    for j in range(1, scenario.num_sbs + 1):
        cap = scenario.stations[j].rb_capacity
        out.append(scenario.demand(j, slot) / cap - scenario.load(j, slot))
    return out


def sorting_solve_slot(
    scenario: Scenario, slot: int, order: SortOrder
) -> tuple[SwitchVector, RevenueBreakdown]:
    """Greedy utility-ranked switching.

    Ranks SBSs by the utility score (ties by index), then walks the
    ranking switching each SBS off while the macro cell still has room,
    stopping at the first one that does not fit.  The chosen off-set is
    always a prefix of the ranking.
    """
    n = scenario.num_sbs
    util = utility_vector(scenario, slot)
    if order is SortOrder.DESCENDING:
        ranked = sorted(range(n), key=lambda j: (-util[j], j))
    else:
        ranked = sorted(range(n), key=lambda j: (util[j], j))

    cap = scenario.mbs_capacity_limit
    contrib = [offload_contribution(scenario, j, slot) for j in range(1, n + 1)]
    base = scenario.load(0, slot)

    def load_of(mask: int) -> float:
        load = base
        for j in range(n):
            if (mask >> j) & 1:
                load += contrib[j]
        return load

    mask = 0
    for j in ranked:
        trial = mask | (1 << j)
        if load_of(trial) <= cap:
            mask = trial
        else:
            break
    switch = SwitchVector.from_off_mask(mask, n)
    return switch, total_revenue_slot(scenario, slot, switch)


def solve_day(
    scenario: Scenario,
    method: Method | str,
    params: SaParams | None = None,
    es_cap: int = ES_MAX_SBS,
) -> SolverResult:
    """Run one method independently on every slot and aggregate the day.

    Each slot is a self-contained decision; the loop re-checks every
    returned vector against the canonical feasibility gate before
    accepting it into the result.
    """
    if isinstance(method, str):
        method = Method.from_str(method)
    if params is None:
        params = SaParams()

    switches: list[SwitchVector] = []
    revenues: list[RevenueBreakdown] = []
    evaluations = 0
    started = time.perf_counter_ns()
    for slot in range(scenario.num_slots):
        if method is Method.SA:
            switch, revenue, evals = sa_solve_slot(scenario, slot, params)
        elif method is Method.ES:
            switch, revenue, evals = es_solve_slot(scenario, slot, cap=es_cap)
        else:
            order = (
                SortOrder.ASCENDING if method is Method.A_TYPE else SortOrder.DESCENDING
            )
            switch, revenue = sorting_solve_slot(scenario, slot, order)
            evals = 1
        report = is_feasible(scenario, slot, switch)
        if not report.feasible:
            raise InfeasibleSwitchError(
                f"{method.value} produced an infeasible switch in slot {slot}"
            )
        switches.append(switch)
        revenues.append(revenue)
        evaluations += evals
    runtime_ns = time.perf_counter_ns() - started

    return SolverResult(
        method=method.value,
        per_slot_switch=switches,
        per_slot_revenue=revenues,
        daily=daily_breakdown(revenues),
        evaluations=evaluations,
        runtime_ns=runtime_ns,
    )
