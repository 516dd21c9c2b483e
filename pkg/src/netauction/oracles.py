"""Independent brute-force references for the mechanisms.

These are deliberately unscalable: the size guards hard-fail so the oracles
can never be mistaken for production paths.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .model import AgentId, HetInstance, with_report
from .money import Money, ZERO, simplest_between
from .network import reachable_market

MAX_ORACLE_SUPPLIERS = 12
MAX_ORACLE_DEMAND = 30
MAX_SETCOVER_SUPPLIERS = 20


class OracleSizeError(ValueError):
    """Instance too large for exhaustive search."""


def min_cost_multiunit_oracle(suppliers, demand: int, reserve_unit: Money):
    """Exhaustive minimum-cost fill of ``demand`` units.

    ``suppliers`` is a list of (agent, ability, unit_cost); leftover units
    fall to the requester at the reserve price.  Returns (allocation, cost)
    where the allocation maps agents to units and "self" to the residue.
    """
    if len(suppliers) > MAX_ORACLE_SUPPLIERS:
        raise OracleSizeError(f"{len(suppliers)} suppliers exceeds oracle limit")
    if demand > MAX_ORACLE_DEMAND:
        raise OracleSizeError(f"demand {demand} exceeds oracle limit")
    rows = list(suppliers)

    @lru_cache(maxsize=None)
    def best(i: int, left: int) -> tuple[Money, int]:
        # returns (min cost, units taken from rows[i]) over rows[i:]
        if i == len(rows):
            return left * reserve_unit, 0
        _, ability, unit_cost = rows[i]
        best_cost, best_take = None, 0
        for take in range(min(ability, left) + 1):
            cost = take * unit_cost + best(i + 1, left - take)[0]
            if best_cost is None or cost < best_cost:
                best_cost, best_take = cost, take
        return best_cost, best_take

    allocation = {}
    left = demand
    for i, (agent, _, _) in enumerate(rows):
        _, take = best(i, left)
        if take:
            allocation[agent] = take
        left -= take
    if left:
        allocation["self"] = left
    return allocation, best(0, demand)[0]


def min_social_cost_ht(instance: HetInstance):
    """Exhaustive minimum social cost over subsets of reachable suppliers.

    Weighted-set-cover search: uncovered tasks are bought back at reserve.
    Enumerates subsets in Gray-code order, updating coverage counts and the
    uncovered value incrementally.  Returns (winner set, cost).
    """
    market = reachable_market(instance)
    members = sorted(market.members)
    if len(members) > MAX_SETCOVER_SUPPLIERS:
        raise OracleSizeError(f"{len(members)} suppliers exceeds set-cover oracle limit")
    reserve = instance.requester.reserve
    bundles = [instance.suppliers[a].bundle for a in members]
    costs = [instance.suppliers[a].total_cost for a in members]

    uncovered_value = sum((reserve[t] for t in instance.requester.tasks), ZERO)
    cover_count = {t: 0 for t in instance.requester.tasks}
    subset_cost = ZERO
    in_set = [False] * len(members)

    best_cost = uncovered_value
    best_set: frozenset[AgentId] = frozenset()

    for g in range(1, 1 << len(members)):
        flip = (g & -g).bit_length() - 1
        if in_set[flip]:
            in_set[flip] = False
            subset_cost -= costs[flip]
            for t in bundles[flip]:
                cover_count[t] -= 1
                if cover_count[t] == 0:
                    uncovered_value += reserve[t]
        else:
            in_set[flip] = True
            subset_cost += costs[flip]
            for t in bundles[flip]:
                if cover_count[t] == 0:
                    uncovered_value -= reserve[t]
                cover_count[t] += 1
        total = subset_cost + uncovered_value
        if total < best_cost:
            best_cost = total
            best_set = frozenset(a for a, inside in zip(members, in_set) if inside)

    return best_set, best_cost


BISECT_STEPS = 20


def critical_cost_search(mechanism, instance, agent: AgentId,
                         report_neighbors=None) -> Money | None:
    """Supremum report cost at which ``agent`` still wins, or None if she never does.

    Exact-rational bisection down to 2**-20 of the cost range, snapped to the
    simplest rational in the final bracket and verified by boundary re-runs.
    """
    if report_neighbors is not None:
        instance = with_report(instance, agent, neighbors=report_neighbors)

    def wins(cost: Money) -> bool:
        outcome = mechanism(with_report(instance, agent, cost=cost))
        return outcome.allocation.get(agent, 0) > 0

    lo = ZERO
    if not wins(lo):
        return None
    hi = instance.requester.budget + 1
    for _ in range(64):
        if not wins(hi):
            break
        hi *= 2
    else:
        raise RuntimeError("no losing cost found; mechanism not value-bounded")

    resolution = (hi - lo) / (1 << BISECT_STEPS)
    probe = resolution / 1024
    for _ in range(3):
        while hi - lo > resolution:
            mid = (lo + hi) / 2
            if wins(mid):
                lo = mid
            else:
                hi = mid
        snapped = simplest_between(lo, hi)
        below = lo if snapped == lo else snapped - probe
        if wins(below) and not wins(snapped + probe):
            return snapped
        # bracket contained more than one breakpoint; tighten and retry
        resolution /= 1 << BISECT_STEPS
    return lo
