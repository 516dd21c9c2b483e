import random
from fractions import Fraction

from netauction.fuzzer import (
    MECHANISMS,
    Mechanism,
    check_diffusion_monotone,
    check_ic,
    check_ir,
    check_value_monotone,
    check_wbb,
    cost_grid,
    fuzz_instance,
)
from netauction.model import Outcome, with_report, utility_hm

from conftest import hom_instance, small_corpus
from test_homogeneous import DEFICIT_CHAIN


def broken_mechanism(instance):
    """Selects the cheapest supplier for everything and pays nothing."""
    suppliers = sorted(instance.suppliers, key=lambda a: instance.suppliers[a].unit_cost)
    winner = suppliers[0]
    allocation = {a: 0 for a in instance.suppliers}
    allocation[winner] = min(instance.suppliers[winner].ability, instance.requester.demand)
    return Outcome(allocation=allocation,
                   payments={a: Fraction(0) for a in instance.suppliers},
                   self_supplied=instance.requester.demand - allocation[winner])


BROKEN = Mechanism("broken", "homogeneous", broken_mechanism)


def test_check_ir_flags_unpaid_winner():
    inst = hom_instance(1, 10, [(1, 1, 4, ())], (1,))
    result = check_ir(BROKEN, inst)
    assert not result.ok
    assert result.witness.property == "ir"
    assert result.witness.truthful_utility == -4


def test_check_ir_passes_ran_hm_and_d_vcg():
    for inst in small_corpus("homogeneous", 25, seed=5):
        assert check_ir(MECHANISMS["ran-hm"], inst).ok
        assert check_ir(MECHANISMS["d-vcg"], inst).ok


def test_check_wbb_d_vcg_deficit_witness():
    result = check_wbb(MECHANISMS["d-vcg"], DEFICIT_CHAIN)
    assert not result.ok
    assert result.witness.truthful_utility == -8
    assert check_wbb(MECHANISMS["ran-hm"], DEFICIT_CHAIN).ok


def test_check_wbb_empty_market():
    inst = hom_instance(2, 10, [(1, 1, 4, ())], ())
    assert check_wbb(MECHANISMS["ran-hm"], inst).ok


def test_ic_witness_for_non_monotone_on_example1(example1):
    d = next(a for a in example1.suppliers if example1.label(a) == "d")
    result = check_ic(MECHANISMS["non-monotone"], example1, d)
    assert not result.ok
    witness = result.witness
    assert witness.reported_cost < Fraction(3, 2)
    # profitable only while diffusing a cheap child
    assert witness.reported_neighbors
    assert witness.reported_neighbors <= example1.suppliers[d].neighbors
    assert witness.deviant_utility > witness.truthful_utility
    assert result.mode == "exhaustive"
    # the full-diffusion deviation is profitable too
    full = [w for w in result.witnesses
            if w.reported_neighbors == example1.suppliers[d].neighbors]
    assert full and all(w.reported_cost < Fraction(3, 2) for w in full)


def test_ic_witness_for_dna_mu_on_fig1(fig1):
    f = next(a for a in fig1.bidders if fig1.label(a) == "f")
    result = check_ic(MECHANISMS["dna-mu"], fig1, f)
    assert not result.ok
    assert result.witness.reported_neighbors == frozenset()


def test_witnesses_replay_exactly(example1):
    d = next(a for a in example1.suppliers if example1.label(a) == "d")
    witness = check_ic(MECHANISMS["non-monotone"], example1, d).witness
    replayed = with_report(example1, d, cost=witness.reported_cost,
                           neighbors=witness.reported_neighbors)
    out = MECHANISMS["non-monotone"].run(replayed)
    assert utility_hm(out, d, example1.suppliers[d]) == witness.deviant_utility
    assert out.allocation[d] == witness.deviant_allocation


def test_value_monotone_passes_ran_ht_s1(example2):
    assert check_value_monotone(MECHANISMS["ran-ht"], example2, 1).ok


def test_value_monotone_constant_mechanism():
    inst = hom_instance(1, 10, [(1, 1, 4, ())], (1,))
    constant = Mechanism("constant", "homogeneous", lambda i: Outcome(
        allocation={1: 1}, payments={1: Fraction(10)}, self_supplied=0))
    assert check_value_monotone(constant, inst, 1).ok


def test_diffusion_monotone_witness_for_dna_mu_agent_e(fig1):
    e = next(a for a in fig1.bidders if fig1.label(a) == "e")
    result = check_diffusion_monotone(MECHANISMS["dna-mu"], fig1, e)
    assert not result.ok
    witness = result.witness
    assert witness.reported_neighbors == frozenset()
    assert witness.truthful_allocation == 1 and witness.deviant_allocation == 0


def test_diffusion_monotone_vacuous_for_leaf(fig1):
    g = next(a for a in fig1.bidders if fig1.label(a) == "g")
    assert check_diffusion_monotone(MECHANISMS["dna-mu"], fig1, g).ok


def test_diffusion_monotone_passes_ran_mechanisms(example2, example1):
    for agent in example2.suppliers:
        assert check_diffusion_monotone(MECHANISMS["ran-ht"], example2, agent).ok
    for agent in example1.suppliers:
        assert check_diffusion_monotone(MECHANISMS["ran-hm"], example1, agent).ok


def test_fuzz_instance_aggregates_and_sorts(fig1):
    report = fuzz_instance(MECHANISMS["dna-mu"], fig1)
    assert not report.ok
    agents = {w.agent for w in report.witnesses}
    e = next(a for a in fig1.bidders if fig1.label(a) == "e")
    f = next(a for a in fig1.bidders if fig1.label(a) == "f")
    assert {e, f} <= agents
    assert report.witnesses == sorted(report.witnesses, key=lambda w: w.sort_key())


def test_sampled_mode_reported():
    rows = [(i, 1, 5, ()) for i in range(2, 12)]
    inst = hom_instance(1, 10, [(1, 1, 4, tuple(range(2, 12)))] + rows, (1,))
    result = check_ic(MECHANISMS["ran-hm"], inst, 1, rng=random.Random(0), samples=16)
    assert result.mode == "sampled"
    assert result.ok


def test_grid_refinement_finds_nothing_new():
    """4x finer cost grids surface no additional witnesses on a small corpus."""
    mech = MECHANISMS["ran-hm"]
    for inst in small_corpus("homogeneous", 12, seed=11):
        for agent in sorted(inst.suppliers):
            coarse = check_ic(mech, inst, agent)
            fine = check_ic(mech, inst, agent,
                            grid=cost_grid(mech, inst, agent, refine=2))
            assert coarse.ok == fine.ok == True


def test_exhaustive_deviations_never_invent_neighbors(example2):
    result = check_ic(MECHANISMS["ran-ht"], example2, 1)
    assert result.ok
    # the scan stayed within subsets of the true invitation set by construction
    truthful = example2.suppliers[1].neighbors
    assert all(w.reported_neighbors <= truthful for w in result.witnesses)
