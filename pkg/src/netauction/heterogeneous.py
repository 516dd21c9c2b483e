"""RAN-HT: greedy marginal-utility selection per layer with critical payments.

Selection repeatedly takes the supplier whose uncovered-task value most
exceeds her cost; payments replay the greedy without the winner and charge
the highest report that would still have beaten every substitute.
"""

from __future__ import annotations

from .model import AgentId, HetInstance, Outcome, SupplierHT
from .money import Money, ZERO
from .network import market_division, reachable_market


def marginal_valuation(supplier: SupplierHT, uncovered, reserve) -> Money:
    """Total reserve value of the uncovered tasks the supplier can take on."""
    return sum((reserve[t] for t in supplier.bundle if t in uncovered), ZERO)


def marginal_utility(supplier: SupplierHT, uncovered, reserve) -> Money:
    """Marginal valuation minus the supplier's full bundle cost; may be negative."""
    return marginal_valuation(supplier, uncovered, reserve) - supplier.total_cost


def _pick(candidates, uncovered, reserve, suppliers, skip_zero_marginal):
    """Argmax marginal utility among ``candidates`` (ties: ascending id).

    Suppliers whose marginal valuation is zero cover nothing; by default they
    are unselectable even when their utility is exactly zero.
    """
    best = None
    best_util = None
    for agent in sorted(candidates):
        mv = marginal_valuation(suppliers[agent], uncovered, reserve)
        if skip_zero_marginal and mv == 0:
            continue
        util = mv - suppliers[agent].total_cost
        if util < 0:
            continue
        if best is None or util > best_util:
            best, best_util = agent, util
    return best


def greedy_layer_selection(layer, uncovered, reserve, suppliers,
                           skip_zero_marginal: bool = True):
    """Winners of one sub-market, in selection order, plus what stays uncovered."""
    selected: list[AgentId] = []
    left = set(uncovered)
    remaining = set(layer)
    while remaining:
        agent = _pick(remaining, left, reserve, suppliers, skip_zero_marginal)
        if agent is None:
            break
        selected.append(agent)
        remaining.discard(agent)
        left -= suppliers[agent].bundle
    return selected, frozenset(left)


def ran_ht_payment(winner: AgentId, layer, entry_uncovered, reserve, suppliers,
                   skip_zero_marginal: bool = True) -> Money:
    """Critical winning cost of ``winner``: replay her layer without her.

    At every substitute selection the winner must have beaten the substitute
    on the then-uncovered tasks; once the replay stops she could still have
    taken whatever is left, so the final uncovered set contributes a last
    bid ceiling.
    """
    if winner not in layer:
        raise ValueError(f"agent {winner} is not in the layer")
    me = suppliers[winner]
    others = set(layer) - {winner}
    left = set(entry_uncovered)
    price = ZERO
    while others:
        rival = _pick(others, left, reserve, suppliers, skip_zero_marginal)
        if rival is None:
            break
        mine = marginal_valuation(me, left, reserve)
        rival_util = marginal_utility(suppliers[rival], left, reserve)
        price = max(price, mine - rival_util)
        others.discard(rival)
        left -= suppliers[rival].bundle
    return max(price, marginal_valuation(me, left, reserve))


def _run_layers(instance: HetInstance, max_layers, skip_zero_marginal) -> Outcome:
    market = reachable_market(instance)
    division = market_division(market)
    layers = division.layers if max_layers is None else division.layers[:max_layers]
    reserve = instance.requester.reserve
    allocation = {a: 0 for a in market.members}
    payments = {a: ZERO for a in market.members}
    uncovered = frozenset(instance.requester.tasks)

    for layer in layers:
        if not uncovered:
            break
        winners, after = greedy_layer_selection(
            layer, uncovered, reserve, instance.suppliers, skip_zero_marginal)
        for agent in winners:
            allocation[agent] = 1
            payments[agent] = ran_ht_payment(
                agent, layer, uncovered, reserve, instance.suppliers, skip_zero_marginal)
        uncovered = after

    return Outcome(allocation=allocation, payments=payments, self_supplied=uncovered)


def ran_ht(instance: HetInstance, skip_zero_marginal: bool = True) -> Outcome:
    """Layered reverse auction for heterogeneous goods."""
    return _run_layers(instance, None, skip_zero_marginal)


def local_greedy(instance: HetInstance, skip_zero_marginal: bool = True) -> Outcome:
    """RAN-HT confined to the requester's direct neighborhood."""
    return _run_layers(instance, 1, skip_zero_marginal)
