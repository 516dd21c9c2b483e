"""Networked reverse auctions over invitation graphs.

Mechanisms for homogeneous (multi-unit) and heterogeneous (task-bundle)
procurement, the VCG baselines they are measured against, brute-force
oracles, a strategic-deviation fuzzer, and a reproducible simulation
harness.
"""

from .forward import ForwardBidder, ForwardInstance, ForwardOutcome, Seller, dna_mu, idm, utility_forward
from .fuzzer import (
    ALL_CHECKS,
    CheckResult,
    DeviationWitness,
    MECHANISMS,
    Mechanism,
    check_diffusion_monotone,
    check_ic,
    check_ir,
    check_value_monotone,
    check_wbb,
    fuzz_instance,
)
from .heterogeneous import (
    greedy_layer_selection,
    local_greedy,
    marginal_utility,
    marginal_valuation,
    ran_ht,
    ran_ht_payment,
)
from .homogeneous import PHI, d_vcg, nd_vcg, non_monotone_auction, optimal_multiunit_allocation, ran_hm
from .instances import InstanceFormatError, dump_instance, load_instance
from .model import (
    HetInstance,
    HomInstance,
    Outcome,
    REQUESTER,
    RequesterHM,
    RequesterHT,
    SupplierHM,
    SupplierHT,
    budget_slack,
    requester_cost,
    social_cost,
    utility_hm,
    utility_ht,
    validate_outcome,
    with_report,
)
from .money import Money, format_decimal, format_money, parse_money
from .network import ChildrenSet, MarketDivision, ReachableMarket, children, market_division, reachable_market
from .oracles import OracleSizeError, critical_cost_search, min_cost_multiunit_oracle, min_social_cost_ht
from .simulate import (
    ExperimentConfig,
    GraphConfig,
    RunRecord,
    gen_instance_hm,
    gen_instance_ht,
    gen_random_graph,
    random_small_instance,
    run_sweep,
    write_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
