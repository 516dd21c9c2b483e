"""Mechanisms for homogeneous (multi-unit) procurement.

RAN-HM runs the auction layer by layer over the market division; the two VCG
baselines and the deliberately non-monotone sequential auction are kept for
comparison and for exhibiting their property failures.
"""

from __future__ import annotations

from .model import (
    AgentId,
    HomInstance,
    Outcome,
)
from .money import Money, ZERO
from .network import children, market_division, reachable_market

# Sentinel id for the virtual supplier (the requester selling to herself).
# Sorts after every real supplier at equal unit cost: prefer outsourcing.
PHI = "phi"


def _entry_key(entry):
    agent, _, cost = entry
    return (cost, 1, 0) if agent is PHI else (cost, 0, agent)


def optimal_multiunit_allocation(entries, demand: int) -> dict:
    """Cheapest-first fill of ``demand`` units from (agent, ability, unit_cost) entries.

    Exactly optimal for additive unit costs.  Ties break by ascending agent
    id with the virtual supplier last.  Raises if the entries cannot cover
    the demand (callers include the virtual supplier when self-supply is an
    option).
    """
    if demand < 0:
        raise ValueError("demand must be non-negative")
    allocation: dict = {}
    left = demand
    for agent, ability, _ in sorted(entries, key=_entry_key):
        if left == 0:
            break
        take = min(ability, left)
        if take > 0:
            allocation[agent] = allocation.get(agent, 0) + take
            left -= take
    if left > 0:
        raise ValueError(f"demand unfillable: {left} units short")
    return allocation


def _fill_cost(entries, demand: int) -> Money:
    cost = ZERO
    unit_cost = {e[0]: e[2] for e in entries}
    for agent, units in optimal_multiunit_allocation(entries, demand).items():
        cost += units * unit_cost[agent]
    return cost


def _empty_outcome(members) -> tuple[dict, dict]:
    return {a: 0 for a in members}, {a: ZERO for a in members}


def ran_hm(instance: HomInstance) -> Outcome:
    """Layered reverse auction for homogeneous goods.

    Shallow layers are served first.  A layer that cannot cover the residual
    demand sells everything eligible at the reserve price; the first layer
    that can cover it runs a within-layer VCG (against the virtual supplier)
    and the auction stops there.
    """
    market = reachable_market(instance)
    division = market_division(market)
    req = instance.requester
    tau = req.demand
    reserve = req.reserve_unit
    allocation, payments = _empty_outcome(market.members)

    for layer in division.layers:
        if tau <= 0:
            break
        eligible = sorted(a for a in layer if instance.suppliers[a].unit_cost <= reserve)
        supply = sum(instance.suppliers[a].ability for a in eligible)
        if tau >= supply:
            for a in eligible:
                units = instance.suppliers[a].ability
                allocation[a] = units
                payments[a] = units * reserve
            tau -= supply
            continue
        # Oversupply: within-layer VCG against the virtual supplier.
        entries = [(a, instance.suppliers[a].ability, instance.suppliers[a].unit_cost)
                   for a in eligible]
        entries.append((PHI, tau, reserve))
        opt = optimal_multiunit_allocation(entries, tau)
        opt_cost = _fill_cost(entries, tau)
        for a in eligible:
            units = opt.get(a, 0)
            allocation[a] = units
            if units:
                without = [e for e in entries if e[0] != a]
                pivot = _fill_cost(without, tau)
                payments[a] = pivot - (opt_cost - units * instance.suppliers[a].unit_cost)
        tau = opt.get(PHI, 0)
        break

    return Outcome(allocation=allocation, payments=payments, self_supplied=tau)


def _vcg_over(instance, members, subtree) -> Outcome:
    """VCG where removing an agent also removes ``subtree(agent)`` from the market."""
    req = instance.requester
    tau = req.demand
    members = sorted(members)
    entries = [(a, instance.suppliers[a].ability, instance.suppliers[a].unit_cost)
               for a in members]
    entries.append((PHI, tau, req.reserve_unit))
    allocation, payments = _empty_outcome(members)
    if tau == 0:
        return Outcome(allocation=allocation, payments=payments, self_supplied=0)
    opt = optimal_multiunit_allocation(entries, tau)
    opt_cost = _fill_cost(entries, tau)
    for a in members:
        units = opt.get(a, 0)
        allocation[a] = units
        removed = subtree(a)
        without = [e for e in entries if e[0] is PHI or e[0] not in removed]
        pivot = _fill_cost(without, tau)
        pay = pivot - (opt_cost - units * instance.suppliers[a].unit_cost)
        if pay != 0:
            payments[a] = pay
    return Outcome(allocation=allocation, payments=payments,
                   self_supplied=opt.get(PHI, 0))


def d_vcg(instance: HomInstance) -> Outcome:
    """VCG over the whole diffusion-closed market.

    An agent's participation includes her invitations, so the pivot removes
    her children too; losers whose diffusion lowered the optimum collect the
    externality.  Efficient, but neither weakly budget balanced nor safe for
    the requester on tree-like markets.
    """
    market = reachable_market(instance)
    kids = {a: children(instance, a).children for a in market.members}
    return _vcg_over(instance, market.members, lambda a: {a} | kids[a])


def nd_vcg(instance: HomInstance) -> Outcome:
    """VCG restricted to the requester's direct neighborhood (no diffusion)."""
    market = reachable_market(instance)
    direct = {a for a in market.members if market.distance[a] == 1}
    return _vcg_over(instance, direct, lambda a: {a})


def non_monotone_auction(instance: HomInstance) -> Outcome:
    """The sequential diffusion auction whose allocation is not monotone.

    Agents are visited by distance; each buys into the optimum over the
    not-yet-visited market with her children removed, and is paid a Clarke
    pivot where her absence takes her children along.  Implemented solely to
    exhibit its incentive failures.
    """
    market = reachable_market(instance)
    req = instance.requester
    order = sorted(market.members, key=lambda a: (market.distance[a], a))
    kids = {a: children(instance, a).children for a in market.members}
    allocation, payments = _empty_outcome(market.members)
    remaining = set(market.members)
    tau = req.demand

    for agent in order:
        if tau <= 0:
            break
        pool = remaining - kids[agent]
        sup = instance.suppliers
        entries = [(a, sup[a].ability, sup[a].unit_cost) for a in sorted(pool)]
        entries.append((PHI, tau, req.reserve_unit))
        opt = optimal_multiunit_allocation(entries, tau)
        opt_cost = _fill_cost(entries, tau)
        units = opt.get(agent, 0)
        without = [e for e in entries if e[0] != agent]
        pivot = _fill_cost(without, tau)
        allocation[agent] = units
        pay = pivot - (opt_cost - units * sup[agent].unit_cost)
        if pay != 0:
            payments[agent] = pay
        remaining.discard(agent)
        tau -= units

    return Outcome(allocation=allocation, payments=payments, self_supplied=tau)
