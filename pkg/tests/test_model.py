from fractions import Fraction

import pytest

from netauction.heterogeneous import ran_ht
from netauction.model import (
    Outcome,
    RequesterHM,
    RequesterHT,
    SupplierHM,
    budget_slack,
    requester_cost,
    social_cost,
    utility_hm,
    utility_ht,
    validate_outcome,
    with_report,
)

from conftest import hom_instance


def test_nonwinner_utility_is_zero():
    out = Outcome(allocation={1: 0}, payments={1: Fraction(0)}, self_supplied=0)
    assert utility_hm(out, 1, SupplierHM(3, Fraction(7), frozenset())) == 0


def test_utility_hm_per_unit():
    out = Outcome(allocation={1: 2}, payments={1: Fraction(20)}, self_supplied=0)
    assert utility_hm(out, 1, SupplierHM(2, Fraction(3), frozenset())) == 14


def test_utility_unknown_agent():
    out = Outcome(allocation={1: 0}, payments={}, self_supplied=0)
    with pytest.raises(ValueError):
        utility_hm(out, 9, SupplierHM(1, Fraction(1), frozenset()))
    with pytest.raises(ValueError):
        utility_ht(out, 9, None)


def test_utility_ht_on_example2(example2):
    out = ran_ht(example2)
    s1, s3 = 1, 3
    assert utility_ht(out, s1, example2.suppliers[s1]) == 23 - 12
    assert utility_ht(out, s3, example2.suppliers[s3]) == 0


def test_requester_cost_example2(example2):
    out = ran_ht(example2)
    assert requester_cost(out, example2.requester) == 50
    assert example2.requester.budget == 69
    assert budget_slack(out, example2.requester) == 19


def test_requester_cost_all_self_supplied():
    req = RequesterHT(tasks=frozenset({"x", "y"}),
                      reserve={"x": Fraction(2), "y": Fraction(5)},
                      neighbors=frozenset())
    out = Outcome(allocation={}, payments={}, self_supplied=frozenset({"x", "y"}))
    assert requester_cost(out, req) == 7
    empty = RequesterHT(tasks=frozenset(), reserve={}, neighbors=frozenset())
    none = Outcome(allocation={}, payments={}, self_supplied=frozenset())
    assert requester_cost(none, empty) == 0


def test_social_cost_example2(example2):
    out = ran_ht(example2)
    assert social_cost(out, example2) == 31


def test_social_cost_no_winners(example2):
    everyone_loses = Outcome(
        allocation={a: 0 for a in example2.suppliers},
        payments={},
        self_supplied=frozenset(example2.requester.tasks))
    assert social_cost(everyone_loses, example2) == 69


def test_validate_outcome_catches_infeasibility():
    inst = hom_instance(3, 10, [(1, 2, 4, ())], (1,))
    bad = Outcome(allocation={1: 2}, payments={1: Fraction(8)}, self_supplied=0)
    with pytest.raises(AssertionError):
        validate_outcome(inst, bad)
    good = Outcome(allocation={1: 2}, payments={1: Fraction(8)}, self_supplied=1)
    validate_outcome(inst, good)


def test_validate_outcome_catches_paid_loser():
    inst = hom_instance(1, 10, [(1, 1, 4, ())], (1,))
    paid = Outcome(allocation={1: 0}, payments={1: Fraction(5)}, self_supplied=1)
    with pytest.raises(AssertionError):
        validate_outcome(inst, paid)
    validate_outcome(inst, paid, losers_unpaid=False)


def test_requester_validates():
    with pytest.raises(ValueError):
        RequesterHM(demand=-1, reserve_unit=Fraction(1), neighbors=frozenset())
    with pytest.raises(ValueError):
        RequesterHT(tasks=frozenset({"a"}), reserve={}, neighbors=frozenset())


def test_with_report_rejects_new_neighbors():
    inst = hom_instance(1, 10, [(1, 1, 4, ()), (2, 1, 5, ())], (1, 2))
    with pytest.raises(ValueError):
        with_report(inst, 1, neighbors=frozenset({2}))
    shrunk = with_report(inst, 1, cost=Fraction(3), neighbors=frozenset())
    assert shrunk.suppliers[1].unit_cost == 3
    assert inst.suppliers[1].unit_cost == 4  # original untouched
