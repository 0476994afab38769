"""Trace data model and the on-disk trace format.

A trace document is a UTF-8 JSON object with the fields ``format_version``,
``run`` (metadata), optional ``source``, ``nodes``, and ``edges``. Nodes are
provenance-aggregated tasks; edges are typed dependencies. Canonical
serialization fixes key order, sorts nodes by id and edges by
(kind, source, target), so equal runs always serialize to identical bytes.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Mapping

from .errors import InvariantViolation, MalformedDocument, SchemaViolation, UnknownNode

FORMAT_VERSION = 1


class UnknownFieldWarning(UserWarning):
    """Emitted once per unknown top-level field in a parsed document."""


class ExecutionMode(Enum):
    SYNC = "sync"
    ASYNC = "async"
    UNDECIDED = "undecided"


class EdgeKind(Enum):
    OPERAND = "operand"
    VARIABLE_ACCESS = "variable"
    FUNCTION_REUSE = "function-reuse"


@dataclass(frozen=True)
class SourceText:
    language: str
    text: str

    @property
    def line_count(self) -> int:
        return len(self.text.splitlines())


@dataclass(frozen=True)
class PrimitiveNode:
    """One aggregated task; ``provenance`` is the aggregation key."""

    id: int
    name: str
    provenance: tuple[tuple[str, int], ...]
    line: int
    column: int
    count: int
    inclusive_time_ns: int
    mode: ExecutionMode
    library: bool

    def __post_init__(self):
        object.__setattr__(
            self, "provenance", tuple((name, index) for name, index in self.provenance)
        )


@dataclass(frozen=True)
class DependencyEdge:
    """Typed dependency; only operand edges carry an argument position."""

    source: int
    target: int
    kind: EdgeKind
    arg_index: int | None = None


def _edge_sort_key(edge: DependencyEdge):
    arg = edge.arg_index if edge.arg_index is not None else -1
    return (edge.kind.value, edge.source, edge.target, arg)


@dataclass(frozen=True)
class Run:
    """One application execution. Normalized on construction: nodes sorted
    by id, edges by (kind, source, target), so equality is structural."""

    run_id: str
    application: str
    timestamp: str
    policy: Mapping[str, str]
    source: SourceText | None
    nodes: tuple[PrimitiveNode, ...]
    edges: tuple[DependencyEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "policy", dict(self.policy))
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.id)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=_edge_sort_key)))

    @cached_property
    def nodes_by_id(self) -> dict[int, PrimitiveNode]:
        return {n.id: n for n in self.nodes}

    def node(self, node_id: int) -> PrimitiveNode:
        try:
            return self.nodes_by_id[node_id]
        except KeyError:
            raise UnknownNode(f"no node with id {node_id}") from None


@dataclass(frozen=True)
class Violation:
    """One broken invariant; ``code`` is stable and machine-readable."""

    code: str
    ids: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        if self.ids:
            return f"{self.code} {list(self.ids)}: {self.message}"
        return f"{self.code}: {self.message}"


def validate(run: Run) -> list[Violation]:
    """Check every run invariant; an empty list means the run is valid."""
    out: list[Violation] = []

    seen_ids: set[int] = set()
    for n in run.nodes:
        if n.id in seen_ids:
            out.append(Violation("DuplicateNodeId", (n.id,), f"node id {n.id} appears twice"))
        seen_ids.add(n.id)
        if n.id < 0:
            out.append(Violation("NegativeId", (n.id,), f"node id {n.id} is negative"))
        if n.count < 1:
            out.append(Violation("BadCount", (n.id,), f"node {n.id} has count {n.count}"))
        if n.inclusive_time_ns < 0:
            out.append(
                Violation(
                    "NegativeTime", (n.id,), f"node {n.id} has inclusive time {n.inclusive_time_ns}"
                )
            )
        if n.line < 1 or n.column < 1:
            out.append(
                Violation("BadPosition", (n.id,), f"node {n.id} at ({n.line}, {n.column})")
            )

    by_provenance: dict[tuple, list[int]] = {}
    for n in run.nodes:
        by_provenance.setdefault(n.provenance, []).append(n.id)
    for prov, ids in by_provenance.items():
        if len(ids) > 1:
            path = "/".join(f"{name}[{idx}]" for name, idx in prov)
            out.append(
                Violation("DuplicateProvenance", tuple(ids), f"nodes {ids} share path {path}")
            )

    if run.source is not None:
        nlines = run.source.line_count
        for n in run.nodes:
            if n.line > nlines:
                out.append(
                    Violation(
                        "LineOutOfRange",
                        (n.id,),
                        f"node {n.id} at line {n.line} but source has {nlines} lines",
                    )
                )

    node_ids = set(run.nodes_by_id)
    usable_edges = []
    for e in run.edges:
        dangling = [i for i in (e.source, e.target) if i not in node_ids]
        if dangling:
            out.append(
                Violation(
                    "DanglingEdge",
                    tuple(dangling),
                    f"edge {e.source}->{e.target} references unknown node ids {dangling}",
                )
            )
            continue
        if e.source == e.target:
            out.append(Violation("SelfLoop", (e.source,), f"edge {e.source}->{e.source}"))
            continue
        if e.kind is EdgeKind.OPERAND:
            if e.arg_index is None:
                out.append(
                    Violation(
                        "MissingArgIndex", (e.source, e.target),
                        f"operand edge {e.source}->{e.target} has no arg_index",
                    )
                )
            elif e.arg_index < 0:
                out.append(
                    Violation(
                        "NegativeArgIndex", (e.source, e.target),
                        f"operand edge {e.source}->{e.target} has arg_index {e.arg_index}",
                    )
                )
        elif e.arg_index is not None:
            out.append(
                Violation(
                    "UnexpectedArgIndex", (e.source, e.target),
                    f"{e.kind.value} edge {e.source}->{e.target} carries arg_index",
                )
            )
        usable_edges.append(e)

    operand_edges = [e for e in usable_edges if e.kind is EdgeKind.OPERAND]
    parents: dict[int, list[int]] = {}
    for e in operand_edges:
        parents.setdefault(e.target, []).append(e.source)
    for target, srcs in parents.items():
        if len(srcs) > 1:
            out.append(
                Violation(
                    "MultipleOperandParents",
                    (target,),
                    f"node {target} has {len(srcs)} operand parents",
                )
            )

    roots = sorted(node_ids - set(parents))
    if not roots:
        out.append(Violation("NoRoot", (), "no root: every node has an operand parent"
                             if run.nodes else "no root: run has no nodes"))
    elif len(roots) > 1:
        out.append(
            Violation("MultipleRoots", tuple(roots), f"nodes {roots} all lack an operand parent")
        )

    children_args: dict[int, dict[int, list[int]]] = {}
    for e in operand_edges:
        if e.arg_index is None:
            continue
        children_args.setdefault(e.source, {}).setdefault(e.arg_index, []).append(e.target)
    for parent, by_arg in children_args.items():
        for arg, targets in by_arg.items():
            if len(targets) > 1:
                out.append(
                    Violation(
                        "DuplicateArgIndex",
                        tuple(sorted(targets)),
                        f"children {sorted(targets)} of node {parent} share arg_index {arg}",
                    )
                )

    cycle = _find_cycle(node_ids, usable_edges)
    if cycle:
        out.append(Violation("Cycle", tuple(cycle), f"dependency cycle through nodes {cycle}"))

    return out


def _find_cycle(node_ids: set[int], edges) -> list[int] | None:
    succ: dict[int, list[int]] = {i: [] for i in node_ids}
    for e in edges:
        succ[e.source].append(e.target)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {i: WHITE for i in node_ids}
    for start in sorted(node_ids):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = GRAY
        path = [start]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    return sorted(set(path[path.index(nxt):]))
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    path.append(nxt)
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


# ---------------------------------------------------------------------------
# parsing

_TOP_LEVEL_KEYS = {"format_version", "run", "source", "nodes", "edges"}


def _expect(value: Any, kind: type, field: str):
    # bool is an int subclass; never let it satisfy an int check
    if kind is int and isinstance(value, bool):
        raise SchemaViolation(field, f"expected {kind.__name__}, got bool")
    if not isinstance(value, kind):
        raise SchemaViolation(field, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _require(obj: dict, key: str, kind: type, path: str):
    if key not in obj:
        raise SchemaViolation(f"{path}.{key}", "missing")
    return _expect(obj[key], kind, f"{path}.{key}")


def _parse_node(obj: Any, index: int) -> PrimitiveNode:
    path = f"nodes[{index}]"
    _expect(obj, dict, path)
    prov_raw = _require(obj, "provenance", list, path)
    provenance = []
    for j, pair in enumerate(prov_raw):
        _expect(pair, list, f"{path}.provenance[{j}]")
        if len(pair) != 2:
            raise SchemaViolation(f"{path}.provenance[{j}]", "expected a [name, arg_index] pair")
        name = _expect(pair[0], str, f"{path}.provenance[{j}][0]")
        arg = _expect(pair[1], int, f"{path}.provenance[{j}][1]")
        provenance.append((name, arg))
    mode_raw = _require(obj, "mode", str, path)
    try:
        mode = ExecutionMode(mode_raw)
    except ValueError:
        raise SchemaViolation(
            f"{path}.mode", f"expected one of sync|async|undecided, got {mode_raw!r}"
        ) from None
    return PrimitiveNode(
        id=_require(obj, "id", int, path),
        name=_require(obj, "name", str, path),
        provenance=tuple(provenance),
        line=_require(obj, "line", int, path),
        column=_require(obj, "column", int, path),
        count=_require(obj, "count", int, path),
        inclusive_time_ns=_require(obj, "inclusive_time_ns", int, path),
        mode=mode,
        library=_require(obj, "library", bool, path),
    )


def _parse_edge(obj: Any, index: int) -> DependencyEdge:
    path = f"edges[{index}]"
    _expect(obj, dict, path)
    kind_raw = _require(obj, "kind", str, path)
    try:
        kind = EdgeKind(kind_raw)
    except ValueError:
        raise SchemaViolation(
            f"{path}.kind", f"expected one of operand|variable|function-reuse, got {kind_raw!r}"
        ) from None
    arg_index = None
    if "arg_index" in obj and obj["arg_index"] is not None:
        arg_index = _expect(obj["arg_index"], int, f"{path}.arg_index")
    return DependencyEdge(
        source=_require(obj, "source", int, path),
        target=_require(obj, "target", int, path),
        kind=kind,
        arg_index=arg_index,
    )


def parse_trace(data: bytes | str) -> Run:
    """Parse and fully validate a trace document.

    Raises MalformedDocument for syntax errors, SchemaViolation for
    missing or ill-typed fields, and InvariantViolation (carrying the
    validate() report) for structurally broken runs. Unknown top-level
    fields are ignored with an UnknownFieldWarning.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaViolation("$", f"expected an object, got {type(doc).__name__}")

    for key in sorted(set(doc) - _TOP_LEVEL_KEYS):
        warnings.warn(f"ignoring unknown top-level field {key!r}", UnknownFieldWarning,
                      stacklevel=2)

    version = _require(doc, "format_version", int, "$")
    if version != FORMAT_VERSION:
        raise SchemaViolation("format_version", f"unsupported version {version}")

    meta = _require(doc, "run", dict, "$")
    policy_raw = _require(meta, "policy", dict, "run")
    policy = {}
    for k, v in policy_raw.items():
        policy[k] = _expect(v, str, f"run.policy.{k}")

    source = None
    if doc.get("source") is not None:
        src = _expect(doc["source"], dict, "source")
        source = SourceText(
            language=_require(src, "language", str, "source"),
            text=_require(src, "text", str, "source"),
        )

    nodes = tuple(
        _parse_node(obj, i) for i, obj in enumerate(_require(doc, "nodes", list, "$"))
    )
    edges = tuple(
        _parse_edge(obj, i) for i, obj in enumerate(_require(doc, "edges", list, "$"))
    )

    run = Run(
        run_id=_require(meta, "run_id", str, "run"),
        application=_require(meta, "application", str, "run"),
        timestamp=_require(meta, "timestamp", str, "run"),
        policy=policy,
        source=source,
        nodes=nodes,
        edges=edges,
    )
    violations = validate(run)
    if violations:
        raise InvariantViolation(violations)
    return run


def serialize_trace(run: Run) -> bytes:
    """Serialize a run to the canonical document form (stable bytes)."""
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "run": {
            "run_id": run.run_id,
            "application": run.application,
            "timestamp": run.timestamp,
            "policy": {k: run.policy[k] for k in sorted(run.policy)},
        },
    }
    if run.source is not None:
        doc["source"] = {"language": run.source.language, "text": run.source.text}
    doc["nodes"] = [
        {
            "id": n.id,
            "name": n.name,
            "provenance": [list(pair) for pair in n.provenance],
            "line": n.line,
            "column": n.column,
            "count": n.count,
            "inclusive_time_ns": n.inclusive_time_ns,
            "mode": n.mode.value,
            "library": n.library,
        }
        for n in sorted(run.nodes, key=lambda n: n.id)
    ]
    doc["edges"] = []
    for e in sorted(run.edges, key=_edge_sort_key):
        entry: dict[str, Any] = {"source": e.source, "target": e.target, "kind": e.kind.value}
        if e.arg_index is not None:
            entry["arg_index"] = e.arg_index
        doc["edges"].append(entry)
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def path_string(provenance: tuple[tuple[str, int], ...]) -> str:
    """Render a provenance path as ``name[arg]/name[arg]/...``."""
    return "/".join(f"{name}[{idx}]" for name, idx in provenance)
