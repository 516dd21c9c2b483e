"""Instance file format: JSON with exactly-parsed numbers.

Decimal literals are routed through strings so nothing is rounded; costs may
also be written as "p/q".  Agent ids may be integers or string labels; labels
are mapped to internal integer ids in listing order (the requester is 0) and
kept for display.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .forward import ForwardBidder, ForwardInstance, Seller
from .model import (
    HetInstance,
    HomInstance,
    RequesterHM,
    RequesterHT,
    SupplierHM,
    SupplierHT,
)
from .money import format_money, parse_money


class InstanceFormatError(ValueError):
    """Bad instance file; carries line/column when the JSON itself is broken."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


def _id_mapper(rows, key="id"):
    labels = {}
    ids = {}
    for row in rows:
        raw = row.get(key)
        if raw is None:
            raise InstanceFormatError("supplier without an id")
        if raw in ids:
            raise InstanceFormatError(f"duplicate agent id {raw!r}")
        agent = len(ids) + 1
        ids[raw] = agent
        labels[agent] = str(raw)
    return ids, labels


def _neighbors(raw, ids, who):
    out = set()
    for entry in raw or ():
        if entry not in ids:
            raise InstanceFormatError(f"{who} invites unknown agent {entry!r}")
        out.add(ids[entry])
    return frozenset(out)


def load_instance(path):
    """Parse an instance file; raises InstanceFormatError on any defect."""
    with open(path) as handle:
        text = handle.read()
    try:
        raw = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno, column=exc.colno) from exc
    try:
        return _build(raw)
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(str(exc)) from exc


def _build(raw):
    variant = raw.get("variant")
    if variant not in ("homogeneous", "heterogeneous", "forward"):
        raise InstanceFormatError(f"unknown variant {variant!r}")
    if variant == "forward":
        rows = raw["bidders"]
        ids, labels = _id_mapper(rows)
        bidders = {
            ids[row["id"]]: ForwardBidder(
                valuation=parse_money(row["valuation"]),
                neighbors=_neighbors(row.get("neighbors"), ids, row["id"]),
            )
            for row in rows
        }
        seller = Seller(units=int(raw["seller"].get("units", 1)),
                        neighbors=_neighbors(raw["seller"].get("neighbors"), ids, "seller"))
        return ForwardInstance(seller=seller, bidders=bidders, labels=labels)

    rows = raw["suppliers"]
    ids, labels = _id_mapper(rows)
    req = raw["requester"]
    if variant == "homogeneous":
        suppliers = {}
        for row in rows:
            ability = row["ability"]
            if not isinstance(ability, int):
                raise InstanceFormatError(f"homogeneous ability must be an integer, got {ability!r}")
            suppliers[ids[row["id"]]] = SupplierHM(
                ability=ability,
                unit_cost=parse_money(row["cost"]),
                neighbors=_neighbors(row.get("neighbors"), ids, row["id"]),
            )
        requester = RequesterHM(
            demand=int(req["demand"]),
            reserve_unit=parse_money(req["reserve"]),
            neighbors=_neighbors(req.get("neighbors"), ids, "requester"),
        )
        return HomInstance(requester=requester, suppliers=suppliers, labels=labels)

    tasks = req["tasks"]
    reserve_raw = req["reserve"]
    if isinstance(reserve_raw, dict):
        reserve = {t: parse_money(reserve_raw[str(t)]) for t in tasks}
    else:
        reserve = {t: parse_money(reserve_raw) for t in tasks}
    suppliers = {}
    for row in rows:
        bundle = row["ability"]
        if not isinstance(bundle, list):
            raise InstanceFormatError(f"heterogeneous ability must be a task list, got {bundle!r}")
        suppliers[ids[row["id"]]] = SupplierHT(
            bundle=frozenset(bundle),
            total_cost=parse_money(row["cost"]),
            neighbors=_neighbors(row.get("neighbors"), ids, row["id"]),
        )
    requester = RequesterHT(
        tasks=frozenset(tasks),
        reserve=reserve,
        neighbors=_neighbors(req.get("neighbors"), ids, "requester"),
    )
    return HetInstance(requester=requester, suppliers=suppliers, labels=labels)


def dump_instance(instance, path=None):
    """Serialize back to the file format; parse(dump(x)) == x."""
    label = instance.label

    def money(value):
        text = format_money(value)
        return int(text) if text.lstrip("-").isdigit() else text

    if instance.variant == "forward":
        raw = {
            "variant": "forward",
            "seller": {
                "units": instance.seller.units,
                "neighbors": sorted(label(a) for a in instance.seller.neighbors),
            },
            "bidders": [
                {
                    "id": label(agent),
                    "valuation": money(b.valuation),
                    "neighbors": sorted(label(x) for x in b.neighbors),
                }
                for agent, b in sorted(instance.bidders.items())
            ],
        }
    elif instance.variant == "homogeneous":
        raw = {
            "variant": "homogeneous",
            "requester": {
                "demand": instance.requester.demand,
                "reserve": money(instance.requester.reserve_unit),
                "neighbors": sorted(label(a) for a in instance.requester.neighbors),
            },
            "suppliers": [
                {
                    "id": label(agent),
                    "ability": s.ability,
                    "cost": money(s.unit_cost),
                    "neighbors": sorted(label(x) for x in s.neighbors),
                }
                for agent, s in sorted(instance.suppliers.items())
            ],
        }
    else:
        tasks = sorted(instance.requester.tasks, key=str)
        raw = {
            "variant": "heterogeneous",
            "requester": {
                "tasks": tasks,
                "reserve": {str(t): money(instance.requester.reserve[t]) for t in tasks},
                "neighbors": sorted(label(a) for a in instance.requester.neighbors),
            },
            "suppliers": [
                {
                    "id": label(agent),
                    "ability": sorted(s.bundle, key=str),
                    "cost": money(s.total_cost),
                    "neighbors": sorted(label(x) for x in s.neighbors),
                }
                for agent, s in sorted(instance.suppliers.items())
            ],
        }
    text = json.dumps(raw, indent=2)
    if path is not None:
        with open(path, "w") as handle:
            handle.write(text + "\n")
    return text
