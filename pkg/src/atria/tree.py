"""Expression-tree abstraction over a run's dependency graph.

Operand edges form a spanning tree of the run (children ordered by
argument position). Every other edge is elided from the drawn structure
and surfaced per node on demand. Collapsing replaces a subtree with a
single marker node; nested collapse targets are redundant and dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import HiddenNode, InvariantViolation, UnknownNode
from .model import DependencyEdge, EdgeKind, Run, validate

# Primitives that wrap a single child without adding structure worth
# reading; collapsed by default.
UNINTERESTING_NAMES = frozenset({"access-variable", "access-argument", "define-variable"})


@dataclass(frozen=True)
class ExpressionTree:
    run: Run
    root: int
    children: dict[int, tuple[int, ...]]
    parent: dict[int, int]
    elided: tuple[DependencyEdge, ...]

    def preorder(self, start: int | None = None):
        stack = [self.root if start is None else start]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(self.children[node]))

    def depth(self, node_id: int) -> int:
        d = 0
        while node_id != self.root:
            node_id = self.parent[node_id]
            d += 1
        return d


def build_expression_tree(run: Run) -> ExpressionTree:
    """Derive the operand spanning tree; rejects invalid runs."""
    violations = validate(run)
    if violations:
        raise InvariantViolation(violations)

    by_parent: dict[int, list[tuple[int, int]]] = {n.id: [] for n in run.nodes}
    parent: dict[int, int] = {}
    elided = []
    for e in run.edges:
        if e.kind is EdgeKind.OPERAND:
            by_parent[e.source].append((e.arg_index, e.target))
            parent[e.target] = e.source
        else:
            elided.append(e)
    children = {nid: tuple(t for _, t in sorted(pairs)) for nid, pairs in by_parent.items()}
    (root,) = set(run.nodes_by_id) - set(parent)
    return ExpressionTree(run=run, root=root, children=children, parent=parent,
                          elided=tuple(elided))


def elided_edges_for(tree: ExpressionTree, node_id: int,
                     include_library: bool = False) -> tuple[DependencyEdge, ...]:
    """Elided edges incident to one node.

    Edges connecting two library primitives are routine plumbing and are
    left out unless include_library is set.
    """
    if node_id not in tree.run.nodes_by_id:
        raise UnknownNode(f"no node with id {node_id}")
    by_id = tree.run.nodes_by_id
    out = []
    for e in tree.elided:
        if node_id not in (e.source, e.target):
            continue
        if not include_library and by_id[e.source].library and by_id[e.target].library:
            continue
        out.append(e)
    return tuple(out)


def collapse_default(tree: ExpressionTree,
                     uninteresting: frozenset[str] = UNINTERESTING_NAMES) -> frozenset[int]:
    """Initial collapse set: non-root nodes with an uninteresting name
    and at least one child."""
    out = set()
    for n in tree.run.nodes:
        if n.id == tree.root:
            continue
        if n.name in uninteresting and tree.children[n.id]:
            out.add(n.id)
    return _drop_nested(tree, frozenset(out))


def _drop_nested(tree: ExpressionTree, collapsed: frozenset[int]) -> frozenset[int]:
    kept = set()
    for nid in collapsed:
        anc = nid
        nested = False
        while anc != tree.root:
            anc = tree.parent[anc]
            if anc in collapsed:
                nested = True
                break
        if not nested:
            kept.add(nid)
    return frozenset(kept)


@dataclass(frozen=True)
class ViewTree:
    """An expression tree with a set of collapsed subtree roots.

    The collapse set is normalized on construction: unknown ids raise,
    targets inside an already-collapsed subtree are dropped.
    """

    tree: ExpressionTree
    collapsed: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        known = set(self.tree.run.nodes_by_id)
        bad = set(self.collapsed) - known
        if bad:
            raise UnknownNode(f"collapse targets {sorted(bad)} not in run")
        object.__setattr__(self, "collapsed", _drop_nested(self.tree, frozenset(self.collapsed)))

    def is_visible(self, node_id: int) -> bool:
        """Visible means no proper ancestor is collapsed; a collapsed
        node itself is visible (drawn as a subtree marker)."""
        if node_id not in self.tree.run.nodes_by_id:
            raise UnknownNode(f"no node with id {node_id}")
        anc = node_id
        while anc != self.tree.root:
            anc = self.tree.parent[anc]
            if anc in self.collapsed:
                return False
        return True

    def visible_children(self, node_id: int) -> tuple[int, ...]:
        if node_id in self.collapsed:
            return ()
        return self.tree.children[node_id]

    def visible_preorder(self) -> tuple[int, ...]:
        out = []
        stack = [self.tree.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(self.visible_children(node)))
        return tuple(out)


def toggle(view: ViewTree, node_id: int) -> ViewTree:
    """Collapse or expand one visible node, returning the new view."""
    if node_id not in view.tree.run.nodes_by_id:
        raise UnknownNode(f"no node with id {node_id}")
    if not view.is_visible(node_id):
        raise HiddenNode(f"node {node_id} is inside a collapsed subtree")
    new = set(view.collapsed)
    if node_id in new:
        new.remove(node_id)
    else:
        new.add(node_id)
    return ViewTree(view.tree, frozenset(new))


def subtree_summary(tree: ExpressionTree, node_id: int) -> dict:
    """What a collapsed marker stands for: hidden descendant count plus
    the subtree root's own inclusive time and execution count."""
    if node_id not in tree.run.nodes_by_id:
        raise UnknownNode(f"no node with id {node_id}")
    descendants = sum(1 for _ in tree.preorder(node_id)) - 1
    n = tree.run.node(node_id)
    return {
        "descendants": descendants,
        "inclusive_time_ns": n.inclusive_time_ns,
        "executions": n.count,
    }
