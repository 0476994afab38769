"""Synthetic program skeletons and a deterministic execution simulator.

A skeleton is an expression tree of named primitives with per-node base
costs. The simulator applies a threshold scheduling policy: a primitive
whose subtree base cost reaches the threshold is launched
asynchronously, everything else runs synchronously. Inclusive times
follow from the modes:

    sync:   inclusive = cost + sum(child inclusive)
    async:  inclusive = cost + overhead + floor((1 - overlap) * sum(child inclusive))

so a fully synchronous run conserves time exactly (exclusive sums to
the root inclusive), while overlap under async execution shows up as
negative slack on the async parents. Arithmetic is exact (Fractions,
floored once), so reruns are bit-stable across platforms.

Per-node modes can be overridden to "undecided" (a policy that has not
committed yet); the label changes but timing still follows the
threshold rule, keeping generated measurements comparable.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from fractions import Fraction

from .errors import BadParams
from .model import DependencyEdge, EdgeKind, ExecutionMode, PrimitiveNode, Run, SourceText

LEAF_NAMES = ("x", "y", "w", "b", "pred", "grad", "alpha", "data")
LIBRARY_NAMES = ("add", "sub", "mul", "div", "dot", "store", "transpose")
CONTROL_NAMES = ("if", "block", "apply", "define-variable")
INTERNAL_NAMES = LIBRARY_NAMES + CONTROL_NAMES

MIN_COST_NS = 1_000
MAX_COST_NS = 500_000

_EPOCH = datetime(2024, 6, 1, tzinfo=timezone.utc)


@dataclass
class SkeletonNode:
    name: str
    base_cost_ns: int
    library: bool
    children: list["SkeletonNode"] = field(default_factory=list)
    line: int = 0
    column: int = 0


@dataclass
class ProgramSkeleton:
    root: SkeletonNode
    text: str
    language: str = "physl"
    seed: int = 0
    depth: int = 0
    branching: int = 0


@dataclass(frozen=True)
class PolicyConfig:
    """Scheduling policy knobs for the simulator.

    cost_scale inflates every base cost uniformly before anything else,
    which models the same program run on slower inputs or hardware.
    undecided_ids are preorder node ids whose reported mode is masked
    as undecided; timing is untouched. seed is recorded with the run
    for provenance (simulation itself is deterministic; the field is
    reserved for stochastic cost noise).
    """

    threshold_ns: int = 250_000
    async_overhead_ns: int = 0
    overlap_fraction: float = 0.0
    seed: int = 0
    cost_scale: float = 1.0
    undecided_ids: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.threshold_ns < 0:
            raise BadParams(f"threshold_ns must be >= 0, got {self.threshold_ns}")
        if self.async_overhead_ns < 0:
            raise BadParams(f"async_overhead_ns must be >= 0, got {self.async_overhead_ns}")
        if not 0.0 <= self.overlap_fraction <= 1.0:
            raise BadParams(f"overlap_fraction must be in [0, 1], got {self.overlap_fraction}")
        if self.cost_scale <= 0:
            raise BadParams(f"cost_scale must be positive, got {self.cost_scale}")
        object.__setattr__(self, "undecided_ids", frozenset(self.undecided_ids))

    def as_strings(self) -> dict[str, str]:
        return {
            "threshold_ns": str(self.threshold_ns),
            "async_overhead_ns": str(self.async_overhead_ns),
            "overlap_fraction": repr(self.overlap_fraction),
            "seed": str(self.seed),
            "cost_scale": repr(self.cost_scale),
            "undecided_ids": ",".join(str(i) for i in sorted(self.undecided_ids)),
        }


def generate_program(seed: int, depth: int, branching: int) -> ProgramSkeleton:
    """Grow a random skeleton with exactly `depth` levels and up to
    `branching` children per internal node.

    Draw order per node is fixed (child count, name, cost, then the
    children in order); changing it would silently break frozen traces.
    """
    if depth < 1:
        raise BadParams(f"depth must be >= 1, got {depth}")
    if branching < 1:
        raise BadParams(f"branching must be >= 1, got {branching}")
    rng = random.Random(seed)

    def grow(level: int) -> SkeletonNode:
        internal = level < depth - 1
        k = rng.randint(1, branching) if internal else 0
        pool = INTERNAL_NAMES if internal else LEAF_NAMES
        name = rng.choice(pool)
        cost = rng.randint(MIN_COST_NS, MAX_COST_NS)
        node = SkeletonNode(name=name, base_cost_ns=cost, library=name in LIBRARY_NAMES)
        node.children = [grow(level + 1) for _ in range(k)]
        return node

    return assemble_skeleton(grow(0), seed=seed, depth=depth, branching=branching)


def assemble_skeleton(root: SkeletonNode, *, seed: int = 0, depth: int = 0,
                      branching: int = 0) -> ProgramSkeleton:
    """Render source text for a hand- or randomly-built tree, assigning
    each node its (line, column)."""
    lines: list[str] = []

    def emit(node: SkeletonNode, indent: int) -> None:
        pad = "  " * indent
        if not node.children:
            lines.append(pad + node.name)
            node.line, node.column = len(lines), len(pad) + 1
            return
        if all(not c.children for c in node.children):
            head = pad + node.name + "("
            node.line, node.column = len(lines) + 1, len(pad) + 1
            col = len(head) + 1
            parts = []
            for c in node.children:
                c.line, c.column = len(lines) + 1, col
                parts.append(c.name)
                col += len(c.name) + 2
            lines.append(head + ", ".join(parts) + ")")
            return
        lines.append(pad + node.name + "(")
        node.line, node.column = len(lines), len(pad) + 1
        for c in node.children:
            emit(c, indent + 1)
            if c is not node.children[-1]:
                lines[-1] += ","
        lines[-1] += ")"

    emit(root, 0)
    return ProgramSkeleton(root=root, text="\n".join(lines),
                           seed=seed, depth=depth, branching=branching)


def _preorder(root: SkeletonNode) -> list[SkeletonNode]:
    out, stack = [], [root]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(reversed(node.children))
    return out


def _scaled_cost(base: int, scale: float) -> int:
    if scale == 1.0:
        return base
    return int(Fraction(base) * Fraction.from_float(scale))


def simulate(skeleton: ProgramSkeleton, policy: PolicyConfig) -> Run:
    """Execute a skeleton under a policy, producing a full trace run.

    Node ids are preorder positions. Besides the operand tree, the
    trace gets variable-access edges chaining leaves that read the same
    variable and function-reuse edges chaining repeated calls to one
    primitive, always from the earlier id to the later one.
    """
    order = _preorder(skeleton.root)
    index = {id(node): i for i, node in enumerate(order)}
    unknown = policy.undecided_ids - set(range(len(order)))
    if unknown:
        raise BadParams(f"undecided_ids {sorted(unknown)} outside 0..{len(order) - 1}")

    cost = {i: _scaled_cost(n.base_cost_ns, policy.cost_scale) for i, n in enumerate(order)}

    subtree: dict[int, int] = {}
    inclusive: dict[int, int] = {}
    is_async: dict[int, bool] = {}
    keep = Fraction(1) - Fraction.from_float(policy.overlap_fraction)
    for i in reversed(range(len(order))):
        node = order[i]
        kids = [index[id(c)] for c in node.children]
        subtree[i] = cost[i] + sum(subtree[k] for k in kids)
        is_async[i] = subtree[i] >= policy.threshold_ns
        child_sum = sum(inclusive[k] for k in kids)
        if is_async[i]:
            inclusive[i] = cost[i] + policy.async_overhead_ns + int(Fraction(child_sum) * keep)
        else:
            inclusive[i] = cost[i] + child_sum

    def mode_of(i: int) -> ExecutionMode:
        if i in policy.undecided_ids:
            return ExecutionMode.UNDECIDED
        return ExecutionMode.ASYNC if is_async[i] else ExecutionMode.SYNC

    provenance: dict[int, tuple] = {0: ((skeleton.root.name, 0),)}
    edges: list[DependencyEdge] = []
    for i, node in enumerate(order):
        for pos, c in enumerate(node.children):
            ci = index[id(c)]
            provenance[ci] = provenance[i] + ((c.name, pos),)
            edges.append(DependencyEdge(i, ci, EdgeKind.OPERAND, pos))

    by_name_leaf: dict[str, list[int]] = {}
    by_name_call: dict[str, list[int]] = {}
    for i, node in enumerate(order):
        if not node.children:
            by_name_leaf.setdefault(node.name, []).append(i)
        else:
            by_name_call.setdefault(node.name, []).append(i)
    for ids in by_name_leaf.values():
        for a, b in zip(ids, ids[1:]):
            edges.append(DependencyEdge(a, b, EdgeKind.VARIABLE_ACCESS))
    for ids in by_name_call.values():
        for a, b in zip(ids, ids[1:]):
            edges.append(DependencyEdge(a, b, EdgeKind.FUNCTION_REUSE))

    nodes = tuple(
        PrimitiveNode(
            id=i, name=node.name, provenance=provenance[i],
            line=node.line, column=node.column, count=1,
            inclusive_time_ns=inclusive[i], mode=mode_of(i),
            library=node.library,
        )
        for i, node in enumerate(order)
    )
    return Run(
        run_id=_run_id(skeleton, policy),
        application=f"synthetic-{skeleton.seed}",
        timestamp=(_EPOCH + timedelta(seconds=skeleton.seed)).strftime("%Y-%m-%dT%H:%M:%SZ"),
        policy=policy.as_strings(),
        source=SourceText(language=skeleton.language, text=skeleton.text),
        nodes=nodes,
        edges=tuple(edges),
    )


def _run_id(skeleton: ProgramSkeleton, policy: PolicyConfig) -> str:
    payload = repr((
        [(n.name, n.base_cost_ns, len(n.children)) for n in _preorder(skeleton.root)],
        skeleton.text,
        sorted(policy.as_strings().items()),
    )).encode()
    digest = hashlib.sha256(payload).hexdigest()[:10]
    return f"gen-{skeleton.seed}-{digest}"


def generate_run(seed: int, depth: int, branching: int,
                 policy: PolicyConfig | None = None) -> Run:
    return simulate(generate_program(seed, depth, branching),
                    policy if policy is not None else PolicyConfig())


def make_comparison_pair(skeleton: ProgramSkeleton, policy_a: PolicyConfig,
                         policy_b: PolicyConfig) -> tuple[Run, Run]:
    """Run one skeleton under two policies.

    Both runs share the program structure, so every node of one matches
    a node of the other by provenance; only modes and timings differ.
    """
    return simulate(skeleton, policy_a), simulate(skeleton, policy_b)
