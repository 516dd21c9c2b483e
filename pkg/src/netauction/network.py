"""Invitation closure, shortest distances, and the layered market division.

Edges are directed invitations: information flows from the requester outward
over *reported* neighbor sets, so a supplier who withholds invitations cuts
her children out of the market.  Edges pointing back at the requester carry
no information and are ignored.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import AgentId, REQUESTER


@dataclass(frozen=True)
class ReachableMarket:
    """Suppliers reachable from the requester, with their BFS distances."""

    members: frozenset[AgentId]
    distance: dict[AgentId, int]


@dataclass(frozen=True)
class MarketDivision:
    """Ordered layers: layer k holds exactly the suppliers at distance k."""

    layers: tuple[frozenset[AgentId], ...]

    @property
    def d_star(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class ChildrenSet:
    agent: AgentId
    children: frozenset[AgentId]


def _root_and_neighbors(instance):
    if hasattr(instance, "suppliers"):
        return instance.requester.neighbors, instance.neighbor_map()
    return instance.seller.neighbors, {a: b.neighbors for a, b in instance.bidders.items()}


def reachable_market(instance, reports: dict[AgentId, frozenset[AgentId]] | None = None) -> ReachableMarket:
    """Breadth-first closure from the requester over reported invitations.

    ``reports`` overrides individual neighbor sets (the fuzzer passes
    misreports); anyone not reachable is simply absent from the market.
    """
    root_neighbors, neighbor_map = _root_and_neighbors(instance)
    if reports:
        neighbor_map = {**neighbor_map, **{a: frozenset(r) for a, r in reports.items()}}
    distance: dict[AgentId, int] = {}
    queue = deque()
    for agent in root_neighbors:
        if agent in neighbor_map and agent not in distance:
            distance[agent] = 1
            queue.append(agent)
    while queue:
        agent = queue.popleft()
        for nxt in neighbor_map[agent]:
            if nxt != REQUESTER and nxt in neighbor_map and nxt not in distance:
                distance[nxt] = distance[agent] + 1
                queue.append(nxt)
    return ReachableMarket(members=frozenset(distance), distance=distance)


def market_division(market: ReachableMarket) -> MarketDivision:
    """Partition reachable suppliers into layers by distance."""
    if not market.members:
        return MarketDivision(layers=())
    d_star = max(market.distance.values())
    layers = [set() for _ in range(d_star)]
    for agent, dist in market.distance.items():
        layers[dist - 1].add(agent)
    return MarketDivision(layers=tuple(frozenset(layer) for layer in layers))


def children(instance, agent: AgentId) -> ChildrenSet:
    """Suppliers who only enter the market through ``agent``'s invitations."""
    _, neighbor_map = _root_and_neighbors(instance)
    if agent not in neighbor_map:
        raise ValueError(f"unknown agent {agent}")
    full = reachable_market(instance).members
    pruned = reachable_market(instance, reports={agent: frozenset()}).members
    return ChildrenSet(agent=agent, children=full - pruned)
