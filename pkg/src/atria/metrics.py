"""Timing metrics over expression trees.

Traces record inclusive time per node (own work plus everything awaited
for its operands). Exclusive time is derived against the operand
children: raw = inclusive - sum(child inclusive). Under asynchronous
execution children overlap their parent, so raw can go negative; the
reported exclusive value clamps at zero and the overshoot is kept
separately as negative slack. The identity

    sum(exclusive) - sum(negative_slack) == root inclusive

always holds, and for fully synchronous runs the slack term is zero,
so exclusive time is conserved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .errors import EmptyInput
from .model import Run
from .tree import ExpressionTree


class Metric(Enum):
    INCLUSIVE = "inclusive"
    EXCLUSIVE = "exclusive"


@dataclass(frozen=True)
class TimeView:
    metric: Metric
    values: dict[int, int]
    negative_slack: dict[int, int] = field(default_factory=dict)


def inclusive_times(run: Run) -> dict[int, int]:
    return {n.id: n.inclusive_time_ns for n in run.nodes}


def exclusive_times(tree: ExpressionTree) -> tuple[dict[int, int], dict[int, int]]:
    """Per-node exclusive time and the clamped-away negative slack."""
    incl = inclusive_times(tree.run)
    values, slack = {}, {}
    for nid in incl:
        raw = incl[nid] - sum(incl[c] for c in tree.children[nid])
        values[nid] = max(raw, 0)
        slack[nid] = max(-raw, 0)
    return values, slack


def time_view(tree: ExpressionTree, metric: Metric) -> TimeView:
    if metric is Metric.INCLUSIVE:
        return TimeView(metric, inclusive_times(tree.run))
    values, slack = exclusive_times(tree)
    return TimeView(metric, values, slack)


def hotspots(tree: ExpressionTree, metric: Metric, limit: int) -> list[tuple[int, int]]:
    """Top nodes by the chosen metric as (node_id, value) pairs.

    Ties break by name, then id, so the ranking is total and stable.
    """
    if limit < 0:
        raise ValueError(f"limit must be non-negative, got {limit}")
    view = time_view(tree, metric)
    by_id = tree.run.nodes_by_id
    ranked = sorted(view.values.items(),
                    key=lambda kv: (-kv[1], by_id[kv[0]].name, kv[0]))
    return ranked[:limit]


def saturation_scale(values: Mapping[int, float]) -> dict[int, float]:
    """Map non-negative magnitudes onto [0, 1] by dividing by the max.

    An all-zero input maps everything to 0 rather than dividing by zero.
    """
    if not values:
        raise EmptyInput("saturation scale needs at least one value")
    peak = max(values.values())
    if peak == 0:
        return {k: 0.0 for k in values}
    return {k: v / peak for k, v in values.items()}


def diverging_scale(deltas: Mapping[int, float]) -> dict[int, float]:
    """Map signed deltas onto [-1, 1], preserving sign, by dividing by
    the largest absolute value. All-zero input maps to 0."""
    if not deltas:
        raise EmptyInput("diverging scale needs at least one value")
    peak = max(abs(v) for v in deltas.values())
    if peak == 0:
        return {k: 0.0 for k in deltas}
    return {k: v / peak for k, v in deltas.items()}
