"""Forward-auction mechanisms used as monotonicity counterexamples.

Single-item IDM allocates along the critical diffusion sequence toward the
highest bidder; DNA-MU sells k unit-demand items at k-th-highest prices with
each bidder's children excluded from her own price.  Both are implemented to
demonstrate where multi-unit diffusion auctions lose truthfulness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .model import AgentId, Money
from .money import ZERO
from .network import children, reachable_market


@dataclass(frozen=True)
class ForwardBidder:
    valuation: Money
    neighbors: frozenset[AgentId]

    def __post_init__(self):
        if self.valuation < 0:
            raise ValueError("valuation must be non-negative")


@dataclass(frozen=True)
class Seller:
    units: int
    neighbors: frozenset[AgentId]


@dataclass(frozen=True)
class ForwardInstance:
    seller: Seller
    bidders: Mapping[AgentId, ForwardBidder]
    labels: Mapping[AgentId, str] = field(default_factory=dict)

    variant = "forward"

    def label(self, agent: AgentId) -> str:
        return self.labels.get(agent, str(agent))


@dataclass(frozen=True)
class ForwardOutcome:
    """Allocation and payments; positive payment flows to the seller.

    ``prices`` records the threshold each bidder faced when her turn came
    (None once the supply ran out).
    """

    allocation: Mapping[AgentId, int]
    payments: Mapping[AgentId, Money]
    prices: Mapping[AgentId, Money | None] = field(default_factory=dict)

    def winners(self) -> list[AgentId]:
        return sorted(a for a, got in self.allocation.items() if got > 0)

    @property
    def revenue(self) -> Money:
        return sum(self.payments.values(), ZERO)


def utility_forward(outcome: ForwardOutcome, agent: AgentId, true_valuation: Money) -> Money:
    if agent not in outcome.allocation:
        raise ValueError(f"agent {agent} not in outcome")
    won = outcome.allocation[agent]
    return won * true_valuation - outcome.payments.get(agent, ZERO)


def _best_bid(instance, pool) -> Money:
    return max((instance.bidders[a].valuation for a in pool), default=ZERO)


def idm(instance: ForwardInstance) -> ForwardOutcome:
    """Information Diffusion Mechanism, single item.

    Walks the chain of agents every path to the top bidder runs through; the
    first whose bid tops the market once the next link's subtree is removed
    wins and pays the best bid absent herself, earlier links are rewarded
    the spread their diffusion created.
    """
    market = reachable_market(instance)
    allocation = {a: 0 for a in market.members}
    payments = {a: ZERO for a in market.members}
    if not market.members:
        return ForwardOutcome(allocation=allocation, payments=payments)

    top = max(market.members,
              key=lambda a: (instance.bidders[a].valuation, -a))
    subtree = {}
    sequence = []
    for agent in sorted(market.members, key=lambda a: (market.distance[a], a)):
        kids = children(instance, agent).children
        subtree[agent] = {agent} | kids
        if agent == top or top in kids:
            sequence.append(agent)

    for pos, agent in enumerate(sequence):
        nxt = sequence[pos + 1] if pos + 1 < len(sequence) else None
        contenders = market.members - subtree[nxt] if nxt else market.members
        best_wo_self = _best_bid(instance, market.members - subtree[agent])
        if instance.bidders[agent].valuation == _best_bid(instance, contenders):
            allocation[agent] = 1
            payments[agent] = best_wo_self
            break
        payments[agent] = best_wo_self - _best_bid(instance, market.members - subtree[nxt])
    return ForwardOutcome(allocation=allocation, payments=payments)


def dna_mu(instance: ForwardInstance, k: int | None = None) -> ForwardOutcome:
    """DNA-MU with unit-demand bidders and k identical items.

    Bidders are visited by (distance, id); each faces the k'-th highest
    valuation among non-winners outside her own subtree and wins iff her bid
    strictly beats it.  Fewer than k' candidate values means a zero price;
    exhausted supply makes the price infinite.
    """
    if k is None:
        k = instance.seller.units
    if k < 1:
        raise ValueError("k must be at least 1")
    market = reachable_market(instance)
    order = sorted(market.members, key=lambda a: (market.distance[a], a))
    allocation = {a: 0 for a in market.members}
    payments = {a: ZERO for a in market.members}
    prices: dict[AgentId, Money | None] = {}
    winners: set[AgentId] = set()
    left = k

    for agent in order:
        if left <= 0:
            prices[agent] = None
            continue
        kids = children(instance, agent).children
        pool = market.members - kids - winners - {agent}
        values = sorted((instance.bidders[a].valuation for a in pool), reverse=True)
        price = values[left - 1] if len(values) >= left else ZERO
        prices[agent] = price
        if instance.bidders[agent].valuation > price:
            allocation[agent] = 1
            payments[agent] = price
            winners.add(agent)
            left -= 1

    return ForwardOutcome(allocation=allocation, payments=payments, prices=prices)
