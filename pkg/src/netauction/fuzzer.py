"""Mechanized property checking: IR, IC, WBB, and the two monotonicities.

The deviation space follows the reporting model: an agent may lower (or
otherwise change) her cost and may invite any subset of her true neighbors,
never new ones.  All comparisons are exact; a witness records a reproducible
violation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from . import forward as fwd
from . import heterogeneous as het
from . import homogeneous as hom
from .model import (
    AgentId,
    REQUESTER,
    budget_slack,
    utility_hm,
    utility_ht,
    with_report,
)
from .money import Money, ZERO

EXHAUSTIVE_NEIGHBOR_LIMIT = 8


@dataclass(frozen=True)
class Mechanism:
    """Uniform handle the fuzzer and CLI share."""

    name: str
    variant: str  # homogeneous | heterogeneous | forward
    run: Callable

    def utility(self, true_instance, outcome, agent: AgentId) -> Money:
        if self.variant == "homogeneous":
            return utility_hm(outcome, agent, true_instance.suppliers[agent])
        if self.variant == "heterogeneous":
            return utility_ht(outcome, agent, true_instance.suppliers[agent])
        return fwd.utility_forward(outcome, agent, true_instance.bidders[agent].valuation)

    def agents(self, instance) -> Mapping[AgentId, object]:
        return instance.bidders if self.variant == "forward" else instance.suppliers

    def report_cost(self, agent_type) -> Money:
        if self.variant == "homogeneous":
            return agent_type.unit_cost
        if self.variant == "heterogeneous":
            return agent_type.total_cost
        return agent_type.valuation


MECHANISMS: dict[str, Mechanism] = {
    "ran-hm": Mechanism("ran-hm", "homogeneous", hom.ran_hm),
    "d-vcg": Mechanism("d-vcg", "homogeneous", hom.d_vcg),
    "nd-vcg": Mechanism("nd-vcg", "homogeneous", hom.nd_vcg),
    "non-monotone": Mechanism("non-monotone", "homogeneous", hom.non_monotone_auction),
    "ran-ht": Mechanism("ran-ht", "heterogeneous", het.ran_ht),
    "local-greedy": Mechanism("local-greedy", "heterogeneous", het.local_greedy),
    "idm": Mechanism("idm", "forward", fwd.idm),
    "dna-mu": Mechanism("dna-mu", "forward", fwd.dna_mu),
}


@dataclass(frozen=True)
class DeviationWitness:
    """A recorded property violation, replayable from its fields."""

    property: str
    agent: AgentId
    true_cost: Money | None = None
    true_neighbors: frozenset[AgentId] | None = None
    reported_cost: Money | None = None
    reported_neighbors: frozenset[AgentId] | None = None
    truthful_utility: Money | None = None
    deviant_utility: Money | None = None
    truthful_allocation: int | None = None
    deviant_allocation: int | None = None

    def __post_init__(self):
        if self.property == "ic" and not self.deviant_utility > self.truthful_utility:
            raise ValueError("an IC witness needs a strictly profitable deviation")

    def sort_key(self):
        return (
            self.agent,
            self.property,
            self.reported_cost if self.reported_cost is not None else ZERO,
            tuple(sorted(self.reported_neighbors)) if self.reported_neighbors is not None else (),
        )

    def to_json(self, label=str) -> dict:
        def money(x):
            return None if x is None else str(x)

        def agents(xs):
            return None if xs is None else sorted(label(a) for a in xs)

        return {
            "property": self.property,
            "agent": label(self.agent),
            "true_cost": money(self.true_cost),
            "true_neighbors": agents(self.true_neighbors),
            "reported_cost": money(self.reported_cost),
            "reported_neighbors": agents(self.reported_neighbors),
            "truthful_utility": money(self.truthful_utility),
            "deviant_utility": money(self.deviant_utility),
            "truthful_allocation": self.truthful_allocation,
            "deviant_allocation": self.deviant_allocation,
        }


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    mode: str  # "exhaustive" or "sampled"
    witnesses: tuple[DeviationWitness, ...] = ()

    @property
    def witness(self) -> DeviationWitness | None:
        return self.witnesses[0] if self.witnesses else None


def check_ir(mech: Mechanism, instance) -> CheckResult:
    """Every truthful participant's utility is non-negative."""
    outcome = mech.run(instance)
    bad = []
    for agent, agent_type in sorted(mech.agents(instance).items()):
        if agent not in outcome.allocation:
            continue
        utility = mech.utility(instance, outcome, agent)
        if utility < 0:
            bad.append(DeviationWitness(
                property="ir", agent=agent,
                true_cost=mech.report_cost(agent_type),
                true_neighbors=agent_type.neighbors,
                truthful_utility=utility,
                truthful_allocation=outcome.allocation.get(agent, 0),
            ))
    return CheckResult(ok=not bad, mode="exhaustive", witnesses=tuple(bad))


def check_wbb(mech: Mechanism, instance) -> CheckResult:
    """The requester never pays out more than her total reserve value."""
    outcome = mech.run(instance)
    slack = budget_slack(outcome, instance.requester)
    if slack >= 0:
        return CheckResult(ok=True, mode="exhaustive")
    witness = DeviationWitness(property="wbb", agent=REQUESTER, truthful_utility=slack)
    return CheckResult(ok=False, mode="exhaustive", witnesses=(witness,))


def _reserve_values(mech: Mechanism, instance) -> list[Money]:
    if mech.variant == "homogeneous":
        return [instance.requester.reserve_unit]
    if mech.variant == "heterogeneous":
        return sorted(set(instance.requester.reserve.values()))
    return []


def cost_grid(mech: Mechanism, instance, agent: AgentId, *, refine: int = 0,
              truthful_payment: Money | None = None, sampled: bool = False) -> list[Money]:
    """Candidate misreport costs for ``agent``.

    Other agents' reported costs, the reserve values, their consecutive
    midpoints, zero, the agent's own true cost, and a small probe around her
    truthful payment; mechanisms piecewise constant in the report have a
    representative of every utility level in here.  Exhaustive mode stays at
    or below the highest reserve (anything above every reserve is dominated);
    sampled mode keeps a sanity band up to twice that.
    """
    agents = mech.agents(instance)
    points = {mech.report_cost(t) for a, t in agents.items() if a != agent}
    reserves = _reserve_values(mech, instance)
    points.update(reserves)
    points.add(ZERO)
    for _ in range(refine + 1):
        ordered = sorted(points)
        points.update((x + y) / 2 for x, y in zip(ordered, ordered[1:]))
    if reserves:
        bound = max(reserves) * (2 if sampled else 1)
        points = {p for p in points if p <= bound}
    gaps = [y - x for x, y in zip(sorted(points), sorted(points)[1:]) if y > x]
    epsilon = min(gaps) / 1024 if gaps else Fraction(1, 1024)
    if truthful_payment is not None and truthful_payment > 0:
        points.update((truthful_payment - epsilon, truthful_payment, truthful_payment + epsilon))
    points.add(mech.report_cost(agents[agent]))
    if mech.variant == "forward":
        points.add(max(points) + 1)
    return sorted(p for p in points if p >= 0)


def _neighbor_subsets(neighbors, rng: random.Random | None, samples: int):
    ordered = sorted(neighbors)
    if len(ordered) <= EXHAUSTIVE_NEIGHBOR_LIMIT:
        subsets = []
        for size in range(len(ordered) + 1):
            subsets.extend(frozenset(c) for c in itertools.combinations(ordered, size))
        return subsets, True
    rng = rng or random.Random(0)
    subsets = {frozenset(ordered), frozenset()}
    while len(subsets) < samples:
        subsets.add(frozenset(a for a in ordered if rng.random() < 0.5))
    return sorted(subsets, key=lambda s: (len(s), tuple(sorted(s)))), False


class _Evaluator:
    """Caches mechanism runs for one agent's deviation scan."""

    def __init__(self, mech: Mechanism, instance, agent: AgentId):
        self.mech = mech
        self.instance = instance
        self.agent = agent
        self._cache: dict = {}

    def __call__(self, neighbors: frozenset[AgentId], cost: Money):
        key = (neighbors, cost)
        if key not in self._cache:
            reported = with_report(self.instance, self.agent,
                                   cost=cost, neighbors=neighbors)
            outcome = self.mech.run(reported)
            self._cache[key] = (
                outcome.allocation.get(self.agent, 0),
                self.mech.utility(self.instance, outcome, self.agent),
            )
        return self._cache[key]


def check_ic(mech: Mechanism, instance, agent: AgentId, *, rng=None,
             samples: int = 64, grid: list[Money] | None = None,
             evaluator: _Evaluator | None = None) -> CheckResult:
    """No (cost, neighbor-subset) report beats truth-telling, utility at true cost."""
    agent_type = mech.agents(instance)[agent]
    true_cost = mech.report_cost(agent_type)
    evaluate = evaluator or _Evaluator(mech, instance, agent)
    truthful_alloc, truthful_utility = evaluate(agent_type.neighbors, true_cost)
    outcome = mech.run(instance)
    if grid is None:
        pay = outcome.payments.get(agent) if truthful_alloc else None
        grid = cost_grid(mech, instance, agent, truthful_payment=pay)
    subsets, exhaustive = _neighbor_subsets(agent_type.neighbors, rng, samples)

    witnesses = []
    for reported_neighbors in subsets:
        for cost in grid:
            alloc, utility = evaluate(reported_neighbors, cost)
            if utility > truthful_utility:
                witnesses.append(DeviationWitness(
                    property="ic", agent=agent,
                    true_cost=true_cost, true_neighbors=agent_type.neighbors,
                    reported_cost=cost, reported_neighbors=reported_neighbors,
                    truthful_utility=truthful_utility, deviant_utility=utility,
                    truthful_allocation=truthful_alloc, deviant_allocation=alloc,
                ))
    witnesses.sort(key=DeviationWitness.sort_key)
    return CheckResult(ok=not witnesses,
                       mode="exhaustive" if exhaustive else "sampled",
                       witnesses=tuple(witnesses))


def check_value_monotone(mech: Mechanism, instance, agent: AgentId, *,
                         grid: list[Money] | None = None,
                         evaluator: _Evaluator | None = None) -> CheckResult:
    """A stronger cost report (lower cost; higher bid forward) never shrinks the allocation."""
    agent_type = mech.agents(instance)[agent]
    evaluate = evaluator or _Evaluator(mech, instance, agent)
    if grid is None:
        grid = cost_grid(mech, instance, agent)
    # scan from weakest to strongest report
    ordered = sorted(grid) if mech.variant == "forward" else sorted(grid, reverse=True)
    witnesses = []
    best_so_far = None
    prev = None
    for cost in ordered:
        alloc, _ = evaluate(agent_type.neighbors, cost)
        if best_so_far is not None and alloc < best_so_far:
            witnesses.append(DeviationWitness(
                property="value-monotone", agent=agent,
                true_cost=prev, true_neighbors=agent_type.neighbors,
                reported_cost=cost, reported_neighbors=agent_type.neighbors,
                truthful_allocation=best_so_far, deviant_allocation=alloc,
            ))
        if best_so_far is None or alloc > best_so_far:
            best_so_far = alloc
        prev = cost
    witnesses.sort(key=DeviationWitness.sort_key)
    return CheckResult(ok=not witnesses, mode="exhaustive", witnesses=tuple(witnesses))


def check_diffusion_monotone(mech: Mechanism, instance, agent: AgentId, *,
                             rng=None, samples: int = 64,
                             evaluator: _Evaluator | None = None) -> CheckResult:
    """Inviting fewer neighbors never shrinks the allocation (pairwise over subsets)."""
    agent_type = mech.agents(instance)[agent]
    true_cost = mech.report_cost(agent_type)
    evaluate = evaluator or _Evaluator(mech, instance, agent)
    subsets, exhaustive = _neighbor_subsets(agent_type.neighbors, rng, samples)
    allocs = {sub: evaluate(sub, true_cost)[0] for sub in subsets}
    witnesses = []
    for small, large in itertools.combinations(subsets, 2):
        if small <= large and allocs[small] < allocs[large]:
            witnesses.append(DeviationWitness(
                property="diffusion-monotone", agent=agent,
                true_cost=true_cost, true_neighbors=large,
                reported_cost=true_cost, reported_neighbors=small,
                truthful_allocation=allocs[large], deviant_allocation=allocs[small],
            ))
    witnesses.sort(key=DeviationWitness.sort_key)
    return CheckResult(ok=not witnesses,
                       mode="exhaustive" if exhaustive else "sampled",
                       witnesses=tuple(witnesses))


ALL_CHECKS = ("ir", "wbb", "ic", "value-monotone", "diffusion-monotone")


@dataclass
class FuzzReport:
    mechanism: str
    mode: str
    witnesses: list[DeviationWitness] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.witnesses


def fuzz_instance(mech: Mechanism, instance, checks=ALL_CHECKS, *,
                  rng=None, samples: int = 64) -> FuzzReport:
    """Run the selected property checks over every agent of one instance."""
    report = FuzzReport(mechanism=mech.name, mode="exhaustive")
    if "ir" in checks:
        report.witnesses.extend(check_ir(mech, instance).witnesses)
    if "wbb" in checks and mech.variant != "forward":
        report.witnesses.extend(check_wbb(mech, instance).witnesses)
    per_agent = [c for c in checks if c in ("ic", "value-monotone", "diffusion-monotone")]
    for agent in sorted(mech.agents(instance)):
        evaluator = _Evaluator(mech, instance, agent)
        for check in per_agent:
            if check == "ic":
                result = check_ic(mech, instance, agent, rng=rng, samples=samples,
                                  evaluator=evaluator)
            elif check == "value-monotone":
                result = check_value_monotone(mech, instance, agent, evaluator=evaluator)
            else:
                result = check_diffusion_monotone(mech, instance, agent, rng=rng,
                                                  samples=samples, evaluator=evaluator)
            if result.mode == "sampled":
                report.mode = "sampled"
            report.witnesses.extend(result.witnesses)
    report.witnesses.sort(key=DeviationWitness.sort_key)
    return report
