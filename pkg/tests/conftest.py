import random
from fractions import Fraction
from pathlib import Path

import pytest

from netauction.instances import load_instance
from netauction.model import HomInstance, RequesterHM, SupplierHM
from netauction.simulate import random_small_instance

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
CONFIGS = REPO / "configs"


@pytest.fixture(scope="session")
def example1():
    return load_instance(FIXTURES / "example1.json")


@pytest.fixture(scope="session")
def example2():
    return load_instance(FIXTURES / "example2.json")


@pytest.fixture(scope="session")
def fig1():
    return load_instance(FIXTURES / "fig1.json")


@pytest.fixture(scope="session")
def idm_case():
    return load_instance(FIXTURES / "idm_case.json")


def hom_instance(demand, reserve, supplier_rows, requester_neighbors):
    """Shorthand: rows of (id, ability, cost, neighbors)."""
    suppliers = {
        agent: SupplierHM(ability=ability, unit_cost=Fraction(cost),
                          neighbors=frozenset(neighbors))
        for agent, ability, cost, neighbors in supplier_rows
    }
    return HomInstance(
        requester=RequesterHM(demand=demand, reserve_unit=Fraction(reserve),
                              neighbors=frozenset(requester_neighbors)),
        suppliers=suppliers)


def small_corpus(variant, count, seed=20260809):
    rng = random.Random(seed)
    return [random_small_instance(variant, rng) for _ in range(count)]
