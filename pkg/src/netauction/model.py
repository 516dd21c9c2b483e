"""Domain types shared by every mechanism, plus utility and cost accounting.

Agents are integers; id 0 is reserved for the requester (the market root).
All types are immutable values after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Union

from .money import Money, ZERO

AgentId = int
TaskId = Union[int, str]

REQUESTER: AgentId = 0


@dataclass(frozen=True)
class SupplierHM:
    """Homogeneous supplier: units she can provide, unit cost, invitees."""

    ability: int
    unit_cost: Money
    neighbors: frozenset[AgentId]

    def __post_init__(self):
        if self.ability < 0:
            raise ValueError("ability must be non-negative")


@dataclass(frozen=True)
class SupplierHT:
    """Heterogeneous supplier: task bundle, total bundle cost, invitees."""

    bundle: frozenset[TaskId]
    total_cost: Money
    neighbors: frozenset[AgentId]


@dataclass(frozen=True)
class RequesterHM:
    demand: int
    reserve_unit: Money
    neighbors: frozenset[AgentId]

    def __post_init__(self):
        if self.demand < 0:
            raise ValueError("demand must be non-negative")
        if self.reserve_unit < 0:
            raise ValueError("reserve must be non-negative")

    @property
    def budget(self) -> Money:
        return self.demand * self.reserve_unit


@dataclass(frozen=True)
class RequesterHT:
    tasks: frozenset[TaskId]
    reserve: Mapping[TaskId, Money]
    neighbors: frozenset[AgentId]

    def __post_init__(self):
        missing = self.tasks - set(self.reserve)
        if missing:
            raise ValueError(f"reserve missing for tasks {sorted(map(str, missing))}")
        if any(v < 0 for v in self.reserve.values()):
            raise ValueError("reserve must be non-negative")

    @property
    def budget(self) -> Money:
        return sum((self.reserve[t] for t in self.tasks), ZERO)


def _check_suppliers(requester, suppliers, labels):
    if REQUESTER in suppliers:
        raise ValueError(f"agent id {REQUESTER} is reserved for the requester")
    known = set(suppliers)
    for agent, sup in suppliers.items():
        if agent in sup.neighbors:
            raise ValueError(f"agent {labels.get(agent, agent)} lists herself as neighbor")
        dangling = sup.neighbors - known - {REQUESTER}
        if dangling:
            raise ValueError(f"agent {labels.get(agent, agent)} invites unknown agents {sorted(dangling)}")
    dangling = requester.neighbors - known
    if dangling:
        raise ValueError(f"requester invites unknown agents {sorted(dangling)}")


@dataclass(frozen=True)
class HomInstance:
    """A homogeneous procurement market: requester plus reported suppliers."""

    requester: RequesterHM
    suppliers: Mapping[AgentId, SupplierHM]
    labels: Mapping[AgentId, str] = field(default_factory=dict)

    variant = "homogeneous"

    def __post_init__(self):
        _check_suppliers(self.requester, self.suppliers, self.labels)

    def label(self, agent: AgentId) -> str:
        return self.labels.get(agent, str(agent))

    def neighbor_map(self) -> dict[AgentId, frozenset[AgentId]]:
        return {a: s.neighbors for a, s in self.suppliers.items()}


@dataclass(frozen=True)
class HetInstance:
    """A heterogeneous procurement market."""

    requester: RequesterHT
    suppliers: Mapping[AgentId, SupplierHT]
    labels: Mapping[AgentId, str] = field(default_factory=dict)

    variant = "heterogeneous"

    def __post_init__(self):
        _check_suppliers(self.requester, self.suppliers, self.labels)
        for agent, sup in self.suppliers.items():
            extra = sup.bundle - self.requester.tasks
            if extra:
                raise ValueError(
                    f"agent {self.label(agent)} offers tasks outside the market: {sorted(map(str, extra))}"
                )

    def label(self, agent: AgentId) -> str:
        return self.labels.get(agent, str(agent))

    def neighbor_map(self) -> dict[AgentId, frozenset[AgentId]]:
        return {a: s.neighbors for a, s in self.suppliers.items()}


Instance = Union[HomInstance, HetInstance]


def with_report(instance, agent: AgentId, *, cost: Money | None = None,
                neighbors=None, valuation: Money | None = None):
    """A copy of ``instance`` where ``agent`` reports a different type.

    Only cost (valuation for forward bidders) and the invitation set can be
    misreported; ability is public knowledge.
    """
    sup = instance.suppliers[agent] if hasattr(instance, "suppliers") else instance.bidders[agent]
    kwargs = {}
    if neighbors is not None:
        neighbors = frozenset(neighbors)
        if not neighbors <= sup.neighbors:
            raise ValueError("reported neighbors must be a subset of the true set")
        kwargs["neighbors"] = neighbors
    if isinstance(sup, SupplierHM):
        if cost is not None:
            kwargs["unit_cost"] = cost
        new = replace(sup, **kwargs)
        return replace(instance, suppliers={**instance.suppliers, agent: new})
    if isinstance(sup, SupplierHT):
        if cost is not None:
            kwargs["total_cost"] = cost
        new = replace(sup, **kwargs)
        return replace(instance, suppliers={**instance.suppliers, agent: new})
    # forward bidder
    if valuation is None:
        valuation = cost
    if valuation is not None:
        kwargs["valuation"] = valuation
    new = replace(sup, **kwargs)
    return replace(instance, bidders={**instance.bidders, agent: new})


@dataclass(frozen=True)
class Outcome:
    """Allocation plus payment per supplier.

    ``allocation`` holds units for homogeneous markets and 0/1 selection for
    heterogeneous ones.  ``self_supplied`` is the residual demand (an int) or
    the uncovered task set the requester handles at reserve cost.
    """

    allocation: Mapping[AgentId, int]
    payments: Mapping[AgentId, Money]
    self_supplied: Union[int, frozenset]

    def winners(self) -> list[AgentId]:
        return sorted(a for a, units in self.allocation.items() if units > 0)


def utility_hm(outcome: Outcome, agent: AgentId, true_type: SupplierHM) -> Money:
    """x_i minus units supplied times the *true* unit cost."""
    if agent not in outcome.allocation:
        raise ValueError(f"agent {agent} not in outcome")
    return outcome.payments.get(agent, ZERO) - outcome.allocation[agent] * true_type.unit_cost


def utility_ht(outcome: Outcome, agent: AgentId, true_type: SupplierHT) -> Money:
    """x_i minus the full bundle cost when selected."""
    if agent not in outcome.allocation:
        raise ValueError(f"agent {agent} not in outcome")
    pay = outcome.payments.get(agent, ZERO)
    return pay - true_type.total_cost if outcome.allocation[agent] else pay


def requester_cost(outcome: Outcome, requester) -> Money:
    """Realized expenditure: payments plus reserve cost of the self-supplied residue."""
    total = sum(outcome.payments.values(), ZERO)
    if isinstance(requester, RequesterHM):
        return total + outcome.self_supplied * requester.reserve_unit
    return total + sum((requester.reserve[t] for t in outcome.self_supplied), ZERO)


def budget_slack(outcome: Outcome, requester) -> Money:
    """u_p: total reserve value minus realized expenditure (>= 0 iff weakly budget balanced)."""
    return requester.budget - requester_cost(outcome, requester)


def social_cost(outcome: Outcome, instance: Instance) -> Money:
    """Winners' production cost plus reserve cost of whatever the requester covers."""
    total = ZERO
    if instance.variant == "homogeneous":
        for agent, units in outcome.allocation.items():
            if units:
                total += units * instance.suppliers[agent].unit_cost
        return total + outcome.self_supplied * instance.requester.reserve_unit
    for agent, selected in outcome.allocation.items():
        if selected:
            total += instance.suppliers[agent].total_cost
    return total + sum((instance.requester.reserve[t] for t in outcome.self_supplied), ZERO)


def validate_outcome(instance: Instance, outcome: Outcome, *, losers_unpaid: bool = True) -> None:
    """Check the feasibility invariant (and optionally that non-winners get 0)."""
    if instance.variant == "homogeneous":
        supplied = sum(outcome.allocation.values())
        if supplied + outcome.self_supplied != instance.requester.demand:
            raise AssertionError(
                f"infeasible: {supplied} supplied + {outcome.self_supplied} self != demand"
            )
        for agent, units in outcome.allocation.items():
            if units < 0 or units > instance.suppliers[agent].ability:
                raise AssertionError(f"agent {agent} allocated {units} beyond ability")
    else:
        covered = set()
        for agent, selected in outcome.allocation.items():
            if selected:
                covered |= instance.suppliers[agent].bundle
        if covered | set(outcome.self_supplied) != set(instance.requester.tasks):
            raise AssertionError("infeasible: coverage plus self-supply misses tasks")
    if losers_unpaid:
        for agent, pay in outcome.payments.items():
            if not outcome.allocation.get(agent) and pay != 0:
                raise AssertionError(f"non-winner {agent} paid {pay}")
