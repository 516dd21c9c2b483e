import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from netauction.model import HomInstance, RequesterHM, SupplierHM
from netauction.network import children, market_division, reachable_market

from conftest import hom_instance


def test_fig2_layers(example2):
    market = reachable_market(example2)
    assert market.members == frozenset(range(1, 9))
    assert market.distance == {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 2, 7: 2, 8: 3}
    division = market_division(market)
    assert division.d_star == 3
    assert division.layers[0] == frozenset({1, 2, 3})
    assert division.layers[1] == frozenset({4, 5, 6, 7})
    assert division.layers[2] == frozenset({8})


def test_empty_market():
    inst = hom_instance(2, 10, [(1, 1, 4, ())], ())
    market = reachable_market(inst)
    assert market.members == frozenset()
    assert market_division(market).layers == ()


def test_star_graph_single_layer():
    inst = hom_instance(2, 10, [(i, 1, 4, ()) for i in (1, 2, 3)], (1, 2, 3))
    division = market_division(reachable_market(inst))
    assert division.layers == (frozenset({1, 2, 3}),)


def test_withholding_removes_exactly_the_children(example2):
    s6 = 6
    full = reachable_market(example2).members
    kids = children(example2, s6).children
    pruned = reachable_market(example2, reports={s6: frozenset()}).members
    assert full - pruned == kids == frozenset({8})


def test_children_of_leaf(example2):
    assert children(example2, 7).children == frozenset()


def test_children_chain():
    inst = hom_instance(1, 10, [(1, 1, 1, (2,)), (2, 1, 1, (3,)), (3, 1, 1, ())], (1,))
    assert children(inst, 1).children == frozenset({2, 3})
    with pytest.raises(ValueError):
        children(inst, 99)


def test_edges_to_requester_are_ignored():
    suppliers = {
        1: SupplierHM(1, Fraction(1), frozenset({0, 2})),
        2: SupplierHM(1, Fraction(1), frozenset({0})),
    }
    inst = HomInstance(
        requester=RequesterHM(demand=1, reserve_unit=Fraction(10), neighbors=frozenset({1})),
        suppliers=suppliers)
    market = reachable_market(inst)
    assert market.distance == {1: 1, 2: 2}


@st.composite
def random_instances(draw):
    n = draw(st.integers(min_value=1, max_value=7))
    seed = draw(st.integers(min_value=0, max_value=10**6))
    rng = random.Random(seed)
    suppliers = {}
    for i in range(1, n + 1):
        others = [j for j in range(1, n + 1) if j != i]
        invites = frozenset(j for j in others if rng.random() < 0.4)
        suppliers[i] = SupplierHM(ability=1, unit_cost=Fraction(1), neighbors=invites)
    roots = frozenset(j for j in range(1, n + 1) if rng.random() < 0.5) or frozenset({1})
    return HomInstance(
        requester=RequesterHM(demand=1, reserve_unit=Fraction(10), neighbors=roots),
        suppliers=suppliers)


@settings(max_examples=120, deadline=None)
@given(random_instances(), st.data())
def test_nobody_changes_own_layer(inst, data):
    """Restated sub-market stability: a misreport never moves any same-layer agent."""
    market = reachable_market(inst)
    if not market.members:
        return
    agent = data.draw(st.sampled_from(sorted(market.members)))
    true_neighbors = sorted(inst.suppliers[agent].neighbors)
    subset = frozenset(data.draw(st.sets(st.sampled_from(true_neighbors))) if true_neighbors else set())
    misreported = reachable_market(inst, reports={agent: subset})

    own_layer = market.distance[agent]
    # she stays, at the same distance
    assert misreported.distance[agent] == own_layer
    # her whole layer is unchanged, and so is everything shallower
    for depth in range(1, own_layer + 1):
        truthful = {a for a, d in market.distance.items() if d == depth}
        after = {a for a, d in misreported.distance.items() if d == depth}
        assert truthful == after
    # anything that disappeared is one of her children
    kids = children(inst, agent).children
    assert market.members - misreported.members <= kids


@settings(max_examples=80, deadline=None)
@given(random_instances(), st.data())
def test_reachability_is_monotone_in_reports(inst, data):
    market = reachable_market(inst)
    if not market.members:
        return
    agent = data.draw(st.sampled_from(sorted(market.members)))
    true_neighbors = sorted(inst.suppliers[agent].neighbors)
    small = frozenset(data.draw(st.sets(st.sampled_from(true_neighbors))) if true_neighbors else set())
    big = frozenset(data.draw(st.sets(st.sampled_from(true_neighbors))) if true_neighbors else set()) | small
    members_small = reachable_market(inst, reports={agent: small}).members
    members_big = reachable_market(inst, reports={agent: big}).members
    assert members_small <= members_big
