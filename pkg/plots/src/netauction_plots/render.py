"""Render sweep CSVs as the experiment figures.

Layout: one column per fixed market size, two rows (social cost on top,
requester payment below).  Each mechanism contributes a mean line with a
shaded band spanning the pointwise min/max over repetitions; heterogeneous
sweeps also carry the requester's total budget as a bold green line.

Rendering is deterministic: fixed style, fixed SVG hash salt, no embedded
timestamps.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams.update({
    "svg.hashsalt": "netauction",
    "svg.fonttype": "none",
    "figure.dpi": 100,
})

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = [
    "sweep_axis", "point", "rep", "mechanism", "n", "tasks", "prob",
    "social_cost", "payment", "budget", "winners", "ms",
]

FIGURES = ("networks", "tasks", "suppliers", "topologies")

AXIS_LABELS = {
    "prob": "edge probability",
    "tasks": "number of tasks",
    "suppliers": "number of suppliers",
}

MECHANISM_STYLE = {
    "nd-vcg": {"color": "#d62728"},
    "d-vcg": {"color": "#7f7f7f"},
    "ran-hm": {"color": "#1f77b4"},
    "local-greedy": {"color": "#d62728"},
    "ran-ht": {"color": "#1f77b4"},
}

HET_MECHANISMS = {"ran-ht", "local-greedy"}


class CsvContractError(ValueError):
    """The CSV does not match the sweep output contract."""


def load_rows(csv_path) -> list[dict]:
    with open(csv_path, newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise CsvContractError(f"missing columns: {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise CsvContractError("no data rows")
    for row in rows:
        for col in ("point", "prob", "social_cost", "payment", "budget"):
            row[col] = float(row[col])
        for col in ("rep", "n", "tasks", "winners"):
            row[col] = int(row[col])
    return rows


def _column_key(axis: str):
    # the dimension held fixed per subplot column
    if axis == "tasks":
        return lambda row: ("suppliers", row["n"])
    if axis == "suppliers":
        return lambda row: ("tasks", row["tasks"])
    return lambda row: ("market", (row["n"], row["tasks"]))


def _series(rows, value_col):
    """point -> (mean, min, max) over repetitions."""
    per_point = defaultdict(list)
    for row in rows:
        per_point[row["point"]].append(row[value_col])
    points = sorted(per_point)
    mean = [sum(per_point[p]) / len(per_point[p]) for p in points]
    low = [min(per_point[p]) for p in points]
    high = [max(per_point[p]) for p in points]
    return points, mean, low, high


def render(csv_path, out_dir, figure: str = "networks",
           formats=("png", "svg")) -> list[Path]:
    """Write <figure>.<ext> under out_dir for each requested format."""
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; pick one of {FIGURES}")
    rows = load_rows(csv_path)
    axis = rows[0]["sweep_axis"]
    key = _column_key(axis)
    columns = sorted({key(row) for row in rows}, key=lambda c: c[1])
    mechanisms = sorted({row["mechanism"] for row in rows})
    heterogeneous = bool(HET_MECHANISMS & set(mechanisms))

    fig, axes = plt.subplots(2, len(columns), squeeze=False,
                             figsize=(4.2 * len(columns), 6.4))
    for col_index, column in enumerate(columns):
        col_rows = [row for row in rows if key(row) == column]
        for row_index, value_col in enumerate(("social_cost", "payment")):
            ax = axes[row_index][col_index]
            for name in mechanisms:
                own = [r for r in col_rows if r["mechanism"] == name]
                points, mean, low, high = _series(own, value_col)
                style = MECHANISM_STYLE.get(name, {})
                ax.plot(points, mean, label=name, **style)
                ax.fill_between(points, low, high, alpha=0.2,
                                color=style.get("color"))
            if heterogeneous:
                points, mean, _, _ = _series(col_rows, "budget")
                ax.plot(points, mean, label="budget", color="green",
                        linewidth=2.5)
            ax.set_xlabel(AXIS_LABELS.get(axis, axis))
            ax.set_ylabel("social cost" if value_col == "social_cost"
                          else "requester payment")
            kind, value = column
            ax.set_title(f"{kind}={value}")
            if row_index == 0 and col_index == 0:
                ax.legend()
    fig.suptitle(f"{figure} sweep")
    fig.tight_layout()

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for ext in formats:
        path = out_dir / f"{figure}.{ext}"
        fig.savefig(path, metadata=_clean_metadata(ext))
        written.append(path)
    plt.close(fig)
    return written


def _clean_metadata(ext: str):
    if ext == "svg":
        return {"Date": None}
    if ext == "png":
        return {"Software": None}
    return None


def svg_structure(path) -> dict:
    """Shape summary of an SVG for golden-file comparison.

    Counts elements by tag and keeps the readable text labels; ignores
    geometry so the comparison survives font-metric jitter.
    """
    import xml.etree.ElementTree as ET

    tree = ET.parse(path)
    counts = defaultdict(int)
    texts = []
    for element in tree.iter():
        tag = element.tag.rsplit("}", 1)[-1]
        counts[tag] += 1
        if tag == "text" and element.text:
            texts.append(element.text.strip())
    return {"tags": dict(sorted(counts.items())), "texts": sorted(texts)}
