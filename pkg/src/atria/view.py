"""View assembly: one precomputed payload that both the SVG renderer
and the HTTP service hand out, so every consumer draws from identical
numbers.

Fill encoding is a saturation scale over the values actually on
screen; in comparison mode it switches to a diverging scale over the
matched deltas (positive means run B is slower there). A collapsed
subtree is represented by its root with the subtree root's inclusive
time, whatever the active metric, since exclusive time of a marker
standing for many nodes would be misleading.
"""

from __future__ import annotations

from typing import Iterable

from .compare import diff, slower_run
from .layout import DEFAULT_LEVEL_GAP, DEFAULT_SIBLING_GAP, layout_view
from .metrics import Metric, diverging_scale, saturation_scale, time_view
from .model import Run, path_string
from .tree import (
    UNINTERESTING_NAMES,
    ViewTree,
    build_expression_tree,
    collapse_default,
    elided_edges_for,
    subtree_summary,
)

ENCODING = {
    "mode_dash": {"sync": "", "async": "6,3", "undecided": "6,3,1.5,3"},
    "fill_low": "#ffffff",
    "fill_high": "#4682b4",
    "diverging_negative": "#e66101",
    "diverging_zero": "#ffffff",
    "diverging_positive": "#2166ac",
    "mode_change_border": "#ff00ff",
    "unmatched_opacity": 0.3,
    "elided_highlight": "#ffff00",
    "node_radius": 7.0,
    "default_level_gap": DEFAULT_LEVEL_GAP,
    "default_sibling_gap": DEFAULT_SIBLING_GAP,
}


def build_tree_payload(run: Run, metric: Metric = Metric.INCLUSIVE,
                       collapsed: Iterable[int] | None = None,
                       uninteresting: frozenset[str] = UNINTERESTING_NAMES,
                       compare_with: Run | None = None,
                       level_gap: float = DEFAULT_LEVEL_GAP,
                       sibling_gap: float = DEFAULT_SIBLING_GAP) -> dict:
    """Assemble the drawable view of one run.

    collapsed=None asks for the default collapse of uninteresting
    wrapper primitives; pass an explicit iterable (possibly empty) to
    control it. compare_with switches the fill to matched deltas and
    annotates nodes missing from the other run.
    """
    tree = build_expression_tree(run)
    if collapsed is None:
        collapse = collapse_default(tree, uninteresting)
    else:
        collapse = frozenset(collapsed)
    view = ViewTree(tree, collapse)
    placed = layout_view(view, level_gap=level_gap, sibling_gap=sibling_gap)
    visible = view.visible_preorder()

    values = time_view(tree, metric).values
    incl = {n.id: n.inclusive_time_ns for n in run.nodes}
    shown = {nid: incl[nid] if nid in view.collapsed else values[nid] for nid in visible}

    pairs = {}
    if compare_with is not None:
        result = diff(run, compare_with, metric)
        pairs = {m.node_a: m for m in result.matches}
        deltas = {}
        for nid in visible:
            m = pairs.get(nid)
            if m is None:
                continue
            if nid in view.collapsed:
                deltas[nid] = (compare_with.node(m.node_b).inclusive_time_ns
                               - incl[nid])
            else:
                deltas[nid] = m.delta_ns
        encoded = dict.fromkeys(visible, 0.0)
        encoded.update(diverging_scale(deltas) if deltas else {})
        shown_delta = deltas
    else:
        encoded = saturation_scale(shown)
        shown_delta = {}

    nodes = []
    for nid in visible:
        n = run.node(nid)
        entry = {
            "id": nid,
            "name": n.name,
            "mark": placed.marks[nid],
            "x": placed.positions[nid][0],
            "y": placed.positions[nid][1],
            "mode": n.mode.value,
            "line": n.line,
            "column": n.column,
            "value_ns": shown[nid],
            "encoded": encoded[nid],
            "count": n.count,
            "path": path_string(n.provenance),
            "hidden_descendants": (subtree_summary(tree, nid)["descendants"]
                                   if nid in view.collapsed else 0),
        }
        if compare_with is not None:
            m = pairs.get(nid)
            entry["unmatched"] = m is None
            entry["delta_ns"] = shown_delta.get(nid)
            entry["mode_b"] = m.mode_b.value if m else None
            entry["mode_changed"] = bool(m and m.mode_changed)
        nodes.append(entry)

    edges = [{"source": nid, "target": c}
             for nid in visible for c in view.visible_children(nid)]

    payload = {
        "run_id": run.run_id,
        "metric": metric.value,
        "collapsed": sorted(view.collapsed),
        "compare_with": compare_with.run_id if compare_with is not None else None,
        "level_gap": level_gap,
        "sibling_gap": sibling_gap,
        "width": placed.width,
        "height": placed.height,
        "nodes": nodes,
        "edges": edges,
    }
    if compare_with is not None:
        payload["comparison"] = {
            "run_b": compare_with.run_id,
            "slower": slower_run(result) or "tie",
            "totals": {"run_a": result.total_a, "run_b": result.total_b},
        }
    return payload


def elided_payload(run: Run, node_id: int, include_library: bool = False) -> dict:
    """Elided edges touching one node, shaped for direct serving."""
    tree = build_expression_tree(run)
    edges = elided_edges_for(tree, node_id, include_library=include_library)
    out = []
    for e in edges:
        peer = e.target if e.source == node_id else e.source
        out.append({
            "source": e.source,
            "target": e.target,
            "kind": e.kind.value,
            "peer": peer,
            "peer_name": run.node(peer).name,
        })
    return {"node": node_id, "include_library": include_library, "edges": out}
