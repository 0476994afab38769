"""Mapping between primitives and the program text they came from.

Every node carries the (line, column) of the call that created it, so a
code view can highlight the primitives behind a clicked line and scroll
to the line behind a clicked node. Several instances of one primitive
can share a line; they stay distinguishable through provenance but are
grouped here for "which ones came from the same place" queries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LineOutOfRange, NoSource, UnknownNode
from .model import Run


@dataclass(frozen=True)
class SourceMap:
    run: Run
    line_to_nodes: dict[int, tuple[int, ...]]
    node_to_pos: dict[int, tuple[int, int]]


def build_source_map(run: Run) -> SourceMap:
    by_line: dict[int, list[tuple[int, int]]] = {}
    for n in run.nodes:
        by_line.setdefault(n.line, []).append((n.column, n.id))
    line_to_nodes = {line: tuple(i for _, i in sorted(pairs))
                     for line, pairs in by_line.items()}
    node_to_pos = {n.id: (n.line, n.column) for n in run.nodes}
    return SourceMap(run=run, line_to_nodes=line_to_nodes, node_to_pos=node_to_pos)


def nodes_for_line(smap: SourceMap, line: int) -> tuple[int, ...]:
    """Node ids whose call site sits on the given 1-based source line,
    ordered by column."""
    if smap.run.source is None:
        raise NoSource(f"run {smap.run.run_id} carries no source text")
    last = smap.run.source.line_count
    if not 1 <= line <= last:
        raise LineOutOfRange(f"line {line} outside 1..{last}")
    return smap.line_to_nodes.get(line, ())


def position_for_node(smap: SourceMap, node_id: int) -> tuple[int, int]:
    """(line, column) of one node's call site."""
    if smap.run.source is None:
        raise NoSource(f"run {smap.run.run_id} carries no source text")
    if node_id not in smap.node_to_pos:
        raise UnknownNode(f"no node with id {node_id}")
    return smap.node_to_pos[node_id]


def repeated_primitives(run: Run) -> list[dict]:
    """Groups of two or more nodes sharing both name and source line.

    These are the cases a flat name lookup cannot tell apart; ordering
    is by (line, name) so output is stable.
    """
    groups: dict[tuple[int, str], list[int]] = {}
    for n in run.nodes:
        groups.setdefault((n.line, n.name), []).append(n.id)
    out = []
    for (line, name), ids in sorted(groups.items()):
        if len(ids) >= 2:
            out.append({"name": name, "line": line, "node_ids": sorted(ids)})
    return out
