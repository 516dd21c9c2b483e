"""Command-line entry points.

Exit codes are part of the contract: 0 success, 1 property violation found,
2 instance parse failure, 3 mechanism/instance variant mismatch, 4 instance
too large for an oracle.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import oracles
from .fuzzer import ALL_CHECKS, MECHANISMS, fuzz_instance
from .heterogeneous import ran_ht
from .homogeneous import d_vcg, ran_hm
from .instances import InstanceFormatError, load_instance
from .model import budget_slack, requester_cost, social_cost
from .money import format_money
from .network import market_division, reachable_market
from .simulate import ExperimentConfig, random_small_instance, run_sweep, write_csv

EXIT_OK = 0
EXIT_WITNESS = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_ORACLE_SIZE = 4


def _load(path):
    try:
        return load_instance(path)
    except InstanceFormatError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _mechanism(name, instance):
    mech = MECHANISMS[name]
    if mech.variant != instance.variant:
        print(f"error: mechanism {name} needs a {mech.variant} instance, "
              f"got {instance.variant}", file=sys.stderr)
        raise SystemExit(EXIT_MISMATCH)
    return mech


def _env_seed(seed):
    override = os.environ.get("NETAUCTION_SEED")
    return int(override) if override else seed


def cmd_run(args) -> int:
    instance = _load(args.instance)
    mech = _mechanism(args.mechanism, instance)
    outcome = mech.run(instance)
    label = instance.label

    winners = outcome.winners()
    print(f"mechanism: {mech.name}")
    print("winners: " + (", ".join(label(a) for a in winners) if winners else "(none)"))
    for agent in sorted(outcome.allocation):
        units = outcome.allocation[agent]
        pay = outcome.payments.get(agent, 0)
        if units or pay:
            print(f"  {label(agent)}: allocation={units} payment={format_money(pay)}")
    if mech.variant == "forward":
        print(f"seller revenue: {format_money(outcome.revenue)}")
    else:
        expenditure = requester_cost(outcome, instance.requester)
        print(f"social cost: {format_money(social_cost(outcome, instance))}")
        print(f"requester expenditure: {format_money(expenditure)}")
        print(f"budget: {format_money(instance.requester.budget)}")
        print(f"u_p: {format_money(budget_slack(outcome, instance.requester))}")
    return EXIT_OK


def cmd_fuzz(args) -> int:
    rng = random.Random(_env_seed(args.seed))
    mech = MECHANISMS[args.mechanism]
    if args.instance:
        instances = [(args.instance, _load(args.instance))]
        if instances[0][1].variant != mech.variant:
            _mechanism(args.mechanism, instances[0][1])
    else:
        instances = [(f"random[{i}]", random_small_instance(mech.variant, rng))
                     for i in range(args.random)]

    checks = tuple(args.checks.split(",")) if args.checks else ALL_CHECKS
    mode = "exhaustive"
    failures = 0
    for name, instance in instances:
        report = fuzz_instance(mech, instance, checks, rng=rng, samples=args.samples)
        if report.mode == "sampled":
            mode = "sampled"
        if not report.ok:
            failures += 1
            seen = set()
            for witness in report.witnesses:
                key = (witness.agent, witness.property)
                if key in seen:
                    continue
                seen.add(key)
                print(json.dumps({"instance": name, **witness.to_json(instance.label)}))
    if failures:
        print(f"FAIL: {failures}/{len(instances)} instance(s) produced witnesses", file=sys.stderr)
        return EXIT_WITNESS
    print(f"pass ({mode}): {len(instances)} instance(s), checks={','.join(checks)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        config = ExperimentConfig.from_json(args.config)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    seed = _env_seed(None)
    if seed is not None:
        config = ExperimentConfig(**{**config.__dict__, "seed": seed})
    records = run_sweep(config, threads=args.threads)
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = _load(args.instance)
    try:
        if instance.variant == "homogeneous":
            market = reachable_market(instance)
            entries = [(a, instance.suppliers[a].ability, instance.suppliers[a].unit_cost)
                       for a in sorted(market.members)]
            _, best = oracles.min_cost_multiunit_oracle(
                entries, instance.requester.demand, instance.requester.reserve_unit)
            outcome = d_vcg(instance)
            achieved = social_cost(outcome, instance)
            print(f"oracle minimum social cost: {format_money(best)}")
            print(f"d-vcg social cost:          {format_money(achieved)} "
                  f"(gap {format_money(achieved - best)})")
            ran = social_cost(ran_hm(instance), instance)
            print(f"ran-hm social cost:         {format_money(ran)} "
                  f"(gap {format_money(ran - best)})")
        elif instance.variant == "heterogeneous":
            winners, best = oracles.min_social_cost_ht(instance)
            achieved = social_cost(ran_ht(instance), instance)
            print(f"oracle minimum social cost: {format_money(best)} "
                  f"via {{{', '.join(instance.label(a) for a in sorted(winners))}}}")
            print(f"ran-ht social cost:         {format_money(achieved)} "
                  f"(gap {format_money(achieved - best)})")
        else:
            print("error: oracle comparison needs a procurement instance", file=sys.stderr)
            return EXIT_MISMATCH
    except oracles.OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_SIZE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netauction",
        description="Networked reverse auctions: run mechanisms, fuzz their properties, sweep experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one mechanism on an instance file")
    run.add_argument("instance")
    run.add_argument("--mechanism", "-m", required=True, choices=sorted(MECHANISMS))
    run.set_defaults(func=cmd_run)

    fuzz = sub.add_parser("fuzz", help="search for IR/IC/WBB/monotonicity violations")
    fuzz.add_argument("instance", nargs="?")
    fuzz.add_argument("--mechanism", "-m", required=True, choices=sorted(MECHANISMS))
    fuzz.add_argument("--random", type=int, default=0, metavar="N",
                      help="fuzz N random desk-scale instances instead of a file")
    fuzz.add_argument("--exhaustive", action="store_true",
                      help="(default) exhaust neighbor subsets up to the size limit")
    fuzz.add_argument("--samples", type=int, default=64,
                      help="subset samples when a neighbor set is too large")
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.add_argument("--checks", help="comma-separated subset of: " + ",".join(ALL_CHECKS))
    fuzz.set_defaults(func=cmd_fuzz)

    sweep = sub.add_parser("sweep", help="run an experiment sweep to CSV")
    sweep.add_argument("config")
    sweep.add_argument("out")
    sweep.add_argument("--threads", type=int, default=1)
    sweep.set_defaults(func=cmd_sweep)

    oracle = sub.add_parser("oracle", help="compare a mechanism against the brute-force optimum")
    oracle.add_argument("instance")
    oracle.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fuzz" and not args.instance and not args.random:
        print("error: fuzz needs an instance file or --random N", file=sys.stderr)
        return EXIT_PARSE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
