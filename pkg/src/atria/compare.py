"""Two-run comparison keyed on provenance paths.

Nodes match across runs exactly when their full provenance paths are
equal; the match is partial, and nodes present in only one run are
reported separately so a view can dim them. Deltas are run B minus
run A under the chosen metric.
"""

from __future__ import annotations

from dataclasses import dataclass

from .metrics import Metric, time_view
from .model import ExecutionMode, Run, path_string
from .tree import build_expression_tree


@dataclass(frozen=True)
class MatchedPair:
    node_a: int
    node_b: int
    path: tuple[tuple[str, int], ...]
    time_a: int
    time_b: int
    delta_ns: int
    mode_a: ExecutionMode
    mode_b: ExecutionMode
    mode_changed: bool


@dataclass(frozen=True)
class ComparisonResult:
    run_a: Run
    run_b: Run
    metric: Metric
    matches: tuple[MatchedPair, ...]
    only_a: frozenset[int]
    only_b: frozenset[int]
    total_a: int
    total_b: int


def match_nodes(run_a: Run, run_b: Run) -> list[tuple[int, int]]:
    """Pairs of node ids with identical provenance, ordered by path."""
    prov_b = {n.provenance: n.id for n in run_b.nodes}
    pairs = [(n.provenance, n.id, prov_b[n.provenance])
             for n in run_a.nodes if n.provenance in prov_b]
    return [(a, b) for _, a, b in sorted(pairs)]


def diff(run_a: Run, run_b: Run, metric: Metric = Metric.INCLUSIVE) -> ComparisonResult:
    tree_a = build_expression_tree(run_a)
    tree_b = build_expression_tree(run_b)
    values_a = time_view(tree_a, metric).values
    values_b = time_view(tree_b, metric).values

    prov_a = {n.provenance: n for n in run_a.nodes}
    prov_b = {n.provenance: n for n in run_b.nodes}
    matches = []
    for path in sorted(set(prov_a) & set(prov_b)):
        na, nb = prov_a[path], prov_b[path]
        matches.append(MatchedPair(
            node_a=na.id, node_b=nb.id, path=path,
            time_a=values_a[na.id], time_b=values_b[nb.id],
            delta_ns=values_b[nb.id] - values_a[na.id],
            mode_a=na.mode, mode_b=nb.mode,
            mode_changed=na.mode is not nb.mode,
        ))
    return ComparisonResult(
        run_a=run_a, run_b=run_b, metric=metric,
        matches=tuple(matches),
        only_a=frozenset(prov_a[p].id for p in set(prov_a) - set(prov_b)),
        only_b=frozenset(prov_b[p].id for p in set(prov_b) - set(prov_a)),
        total_a=run_a.node(tree_a.root).inclusive_time_ns,
        total_b=run_b.node(tree_b.root).inclusive_time_ns,
    )


def slower_run(result: ComparisonResult) -> str | None:
    """run_id of the run with the larger root inclusive time; None on a
    tie."""
    if result.total_b > result.total_a:
        return result.run_b.run_id
    if result.total_a > result.total_b:
        return result.run_a.run_id
    return None


def report(result: ComparisonResult) -> dict:
    """JSON-safe summary; matches ranked by |delta| descending."""
    ranked = sorted(result.matches,
                    key=lambda m: (-abs(m.delta_ns), path_string(m.path)))
    return {
        "run_a": result.run_a.run_id,
        "run_b": result.run_b.run_id,
        "metric": result.metric.value,
        "slower": slower_run(result) or "tie",
        "totals": {"run_a": result.total_a, "run_b": result.total_b},
        "matches": [
            {
                "path": path_string(m.path),
                "node_a": m.node_a,
                "node_b": m.node_b,
                "time_a": m.time_a,
                "time_b": m.time_b,
                "delta_ns": m.delta_ns,
                "mode_a": m.mode_a.value,
                "mode_b": m.mode_b.value,
                "mode_changed": m.mode_changed,
            }
            for m in ranked
        ],
        "only_a": sorted(path_string(result.run_a.node(i).provenance)
                         for i in result.only_a),
        "only_b": sorted(path_string(result.run_b.node(i).provenance)
                         for i in result.only_b),
    }
