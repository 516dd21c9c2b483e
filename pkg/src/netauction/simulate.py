"""Random market generation and the experiment sweeps.

Graphs are generated pairwise-at-random and regenerated until connected;
edges become bidirectional invitations.  Every run owns an RNG seeded from
(base seed, sweep point, repetition), so a sweep is reproducible record for
record.
"""

from __future__ import annotations

import json
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import heterogeneous as het
from . import homogeneous as hom
from .model import (
    HetInstance,
    HomInstance,
    RequesterHM,
    RequesterHT,
    SupplierHM,
    SupplierHT,
    requester_cost,
    social_cost,
)
from .money import Money, format_decimal

log = logging.getLogger(__name__)

MAX_GRAPH_ATTEMPTS = 10**6

CSV_HEADER = "sweep_axis,point,rep,mechanism,n,tasks,prob,social_cost,payment,budget,winners,ms"

HOM_MECHANISMS = ("nd-vcg", "d-vcg", "ran-hm")
HET_MECHANISMS = ("local-greedy", "ran-ht")

_RUNNERS = {
    "nd-vcg": hom.nd_vcg,
    "d-vcg": hom.d_vcg,
    "ran-hm": hom.ran_hm,
    "local-greedy": het.local_greedy,
    "ran-ht": het.ran_ht,
}


@dataclass(frozen=True)
class GraphConfig:
    n: int
    prob: float
    seed: int


def _connected(n: int, adjacency: dict[int, set[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        node = stack.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == n + 1


def gen_random_graph(config: GraphConfig) -> frozenset[tuple[int, int]]:
    """Pairwise random edges over nodes 0..n (0 is the requester), retried until connected."""
    if config.n < 1:
        raise ValueError("need at least one supplier")
    rng = random.Random(config.seed)
    for _ in range(MAX_GRAPH_ATTEMPTS):
        edges = set()
        adjacency = {i: set() for i in range(config.n + 1)}
        for i in range(config.n + 1):
            for j in range(i + 1, config.n + 1):
                if rng.random() < config.prob:
                    edges.add((i, j))
                    adjacency[i].add(j)
                    adjacency[j].add(i)
        if _connected(config.n, adjacency):
            return frozenset(edges)
    raise RuntimeError(f"no connected graph after {MAX_GRAPH_ATTEMPTS} attempts (prob={config.prob})")


def complete_graph(n: int) -> frozenset[tuple[int, int]]:
    return frozenset((i, j) for i in range(n + 1) for j in range(i + 1, n + 1))


def random_tree(n: int, rng: random.Random) -> frozenset[tuple[int, int]]:
    """Uniform random recursive tree rooted at the requester."""
    return frozenset((rng.randint(0, i - 1), i) for i in range(1, n + 1))


def _neighbor_sets(n: int, edges) -> dict[int, frozenset[int]]:
    adjacency = {i: set() for i in range(n + 1)}
    for i, j in edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    return {i: frozenset(adjacency[i]) for i in range(n + 1)}


def _grid_fraction(rng: random.Random, lo: int, hi: int) -> Fraction:
    # continuous U[lo, hi] snapped to thousandths, keeping arithmetic exact
    return Fraction(rng.randint(lo * 1000, hi * 1000), 1000)


def gen_instance_hm(edges, n: int, demand: int, rng: random.Random,
                    reserve_unit: Money = Fraction(10)) -> HomInstance:
    """Abilities uniform on 1..10, unit costs uniform on [1, 10] (thousandth grid)."""
    nbr = _neighbor_sets(n, edges)
    suppliers = {
        i: SupplierHM(ability=rng.randint(1, 10),
                      unit_cost=_grid_fraction(rng, 1, 10),
                      neighbors=nbr[i] - {0})
        for i in range(1, n + 1)
    }
    requester = RequesterHM(demand=demand, reserve_unit=reserve_unit, neighbors=nbr[0])
    return HomInstance(requester=requester, suppliers=suppliers)


def gen_instance_ht(edges, n: int, num_tasks: int, rng: random.Random) -> HetInstance:
    """Bundle sizes uniform on 2..10 (capped), costs U[5, 20], reserves U[1, 10]."""
    nbr = _neighbor_sets(n, edges)
    tasks = list(range(num_tasks))
    reserve = {t: _grid_fraction(rng, 1, 10) for t in tasks}
    if num_tasks < 2:
        log.warning("only %d task(s): bundle sizes capped", num_tasks)
    suppliers = {}
    for i in range(1, n + 1):
        size = min(rng.randint(2, 10), num_tasks)
        bundle = frozenset(rng.sample(tasks, size))
        suppliers[i] = SupplierHT(bundle=bundle,
                                  total_cost=_grid_fraction(rng, 5, 20),
                                  neighbors=nbr[i] - {0})
    requester = RequesterHT(tasks=frozenset(tasks), reserve=reserve, neighbors=nbr[0])
    return HetInstance(requester=requester, suppliers=suppliers)


def random_small_instance(variant: str, rng: random.Random):
    """A desk-scale market (n <= 8) for fuzzing and oracle comparisons."""
    n = rng.randint(2, 8)
    edges = gen_random_graph(GraphConfig(n=n, prob=0.4, seed=rng.getrandbits(32)))
    if variant == "homogeneous":
        return gen_instance_hm(edges, n, demand=rng.randint(1, 12), rng=rng)
    return gen_instance_ht(edges, n, num_tasks=rng.randint(3, 6), rng=rng)


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: an axis, fixed market sizes, mechanisms, repetitions."""

    variant: str                      # homogeneous | heterogeneous
    axis: str                         # prob | tasks | suppliers
    points: tuple                     # axis values
    sizes: tuple                      # (n, tasks) pairs held fixed per column
    mechanisms: tuple
    repetitions: int = 20
    prob: float = 0.05                # used when prob is not the axis
    topology: str = "random"          # random | complete | tree
    seed: int = 0

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.axis not in ("prob", "tasks", "suppliers"):
            raise ValueError(f"unknown sweep axis {self.axis!r}")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as handle:
            raw = json.load(handle)
        return cls(
            variant=raw["variant"],
            axis=raw["axis"],
            points=tuple(raw["points"]),
            sizes=tuple(tuple(s) for s in raw["sizes"]),
            mechanisms=tuple(raw.get("mechanisms") or (
                HOM_MECHANISMS if raw["variant"] == "homogeneous" else HET_MECHANISMS)),
            repetitions=raw.get("repetitions", 20),
            prob=raw.get("prob", 0.05),
            topology=raw.get("topology", "random"),
            seed=raw.get("seed", 0),
        )

    def grid(self):
        """(point, n, tasks) for every cell, in output order."""
        for point in self.points:
            for n, tasks in self.sizes:
                if self.axis == "tasks":
                    tasks = point
                elif self.axis == "suppliers":
                    n = point
                yield point, n, tasks

    def expected_rows(self) -> int:
        return len(list(self.grid())) * self.repetitions * len(self.mechanisms)


@dataclass(frozen=True)
class RunRecord:
    sweep_axis: str
    point: object
    rep: int
    mechanism: str
    n: int
    tasks: int
    prob: float
    social_cost: Money
    payment: Money
    budget: Money
    winners: int
    ms: int

    def csv_row(self) -> str:
        return ",".join(str(v) for v in (
            self.sweep_axis, self.point, self.rep, self.mechanism,
            self.n, self.tasks, self.prob,
            format_decimal(self.social_cost), format_decimal(self.payment),
            format_decimal(self.budget), self.winners, self.ms,
        ))


def _run_seed(base: int, point_index: int, rep: int) -> int:
    return (base * 1_000_003 + point_index) * 1_000_003 + rep


def _make_instance(config: ExperimentConfig, n: int, tasks: int, prob: float,
                   rng: random.Random, seed: int):
    if config.topology == "complete":
        edges = complete_graph(n)
    elif config.topology == "tree":
        edges = random_tree(n, rng)
    else:
        edges = gen_random_graph(GraphConfig(n=n, prob=prob, seed=seed))
    if config.variant == "homogeneous":
        return gen_instance_hm(edges, n, demand=tasks, rng=rng)
    return gen_instance_ht(edges, n, num_tasks=tasks, rng=rng)


def _run_point(config: ExperimentConfig, point_index: int, point, n: int,
               tasks: int) -> list[RunRecord]:
    records = []
    prob = point if config.axis == "prob" else config.prob
    for rep in range(config.repetitions):
        seed = _run_seed(config.seed, point_index, rep)
        # separate streams for the graph and the type draws
        rng = random.Random(seed + 500_009)
        instance = _make_instance(config, n, tasks, prob, rng, seed)
        for name in config.mechanisms:
            mechanism = _RUNNERS[name]
            started = time.perf_counter()
            try:
                outcome = mechanism(instance)
            except Exception:
                log.exception("%s failed on point=%s rep=%d", name, point, rep)
                continue
            elapsed_ms = int((time.perf_counter() - started) * 1000)
            records.append(RunRecord(
                sweep_axis=config.axis, point=point, rep=rep, mechanism=name,
                n=n, tasks=tasks, prob=prob,
                social_cost=social_cost(outcome, instance),
                payment=requester_cost(outcome, instance.requester),
                budget=instance.requester.budget,
                winners=len(outcome.winners()),
                ms=elapsed_ms,
            ))
    return records


def run_sweep(config: ExperimentConfig, threads: int = 1) -> list[RunRecord]:
    """Generate, run and record every (point, repetition, mechanism) cell.

    A mechanism failure is logged and skipped; the sweep continues.  Output
    order is by sweep point regardless of ``threads``.
    """
    cells = list(enumerate(config.grid()))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = pool.map(
                lambda cell: _run_point(config, cell[0], *cell[1]), cells)
            return [record for chunk in chunks for record in chunk]
    records = []
    for point_index, (point, n, tasks) in cells:
        records.extend(_run_point(config, point_index, point, n, tasks))
    return records


def write_csv(records, path) -> None:
    with open(path, "w") as handle:
        handle.write(CSV_HEADER + "\n")
        for record in records:
            handle.write(record.csv_row() + "\n")
