"""Tidy tree layout for horizontal (root at the left) expression trees.

Implements the linear-time formulation of the Reingold-Tilford tidy
layout due to Buchheim, Junger, and Leipert (threads, deferred shifts,
ancestor defaults). Sibling distance is uniform: adjacent nodes on the
same level sit at least one unit apart, siblings exactly one unit when
nothing below forces them wider. Depth maps to x, the tidy coordinate
to y, so deeper calls extend rightwards and siblings stack vertically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EmptyView
from .tree import ViewTree

DEFAULT_LEVEL_GAP = 120.0
DEFAULT_SIBLING_GAP = 28.0


class _Shadow:
    __slots__ = ("nid", "parent", "number", "children", "prelim", "mod",
                 "change", "shift", "thread", "ancestor", "depth")

    def __init__(self, nid, parent, number, depth):
        self.nid = nid
        self.parent = parent
        self.number = number
        self.children: list[_Shadow] = []
        self.prelim = 0.0
        self.mod = 0.0
        self.change = 0.0
        self.shift = 0.0
        self.thread: _Shadow | None = None
        self.ancestor: _Shadow = self
        self.depth = depth


def _build_shadow(root, children: Mapping) -> list[_Shadow]:
    """Shadow copies in preorder; children order preserved."""
    top = _Shadow(root, None, 0, 0)
    order = [top]
    stack = [top]
    while stack:
        sh = stack.pop()
        for i, cid in enumerate(children.get(sh.nid, ())):
            child = _Shadow(cid, sh, i, sh.depth + 1)
            sh.children.append(child)
            order.append(child)
        stack.extend(reversed(sh.children))
    return order


def _next_left(v: _Shadow):
    return v.children[0] if v.children else v.thread


def _next_right(v: _Shadow):
    return v.children[-1] if v.children else v.thread


def _move_subtree(wl: _Shadow, wr: _Shadow, shift: float):
    subtrees = wr.number - wl.number
    wr.change -= shift / subtrees
    wr.shift += shift
    wl.change += shift / subtrees
    wr.prelim += shift
    wr.mod += shift


def _execute_shifts(v: _Shadow):
    shift = change = 0.0
    for w in reversed(v.children):
        w.prelim += shift
        w.mod += shift
        change += w.change
        shift += w.shift + change


def _pick_ancestor(vil: _Shadow, v: _Shadow, default: _Shadow) -> _Shadow:
    return vil.ancestor if vil.ancestor.parent is v.parent else default


def _apportion(v: _Shadow, default: _Shadow, left_sibling: _Shadow | None) -> _Shadow:
    if left_sibling is None:
        return default
    vir = vor = v
    vil = left_sibling
    vol = v.parent.children[0]
    sir = vir.mod
    sor = vor.mod
    sil = vil.mod
    sol = vol.mod
    while _next_right(vil) and _next_left(vir):
        vil = _next_right(vil)
        vir = _next_left(vir)
        vol = _next_left(vol)
        vor = _next_right(vor)
        vor.ancestor = v
        shift = (vil.prelim + sil) - (vir.prelim + sir) + 1.0
        if shift > 0.0:
            _move_subtree(_pick_ancestor(vil, v, default), v, shift)
            sir += shift
            sor += shift
        sil += vil.mod
        sir += vir.mod
        sol += vol.mod
        sor += vor.mod
    if _next_right(vil) and not _next_right(vor):
        vor.thread = _next_right(vil)
        vor.mod += sil - sor
    if _next_left(vir) and not _next_left(vol):
        vol.thread = _next_left(vir)
        vol.mod += sir - sol
        default = v
    return default


def _first_walk(v: _Shadow):
    if not v.children:
        left = _left_sibling(v)
        v.prelim = left.prelim + 1.0 if left else 0.0
        return
    default = v.children[0]
    previous = None
    for w in v.children:
        _first_walk(w)
        default = _apportion(w, default, previous)
        previous = w
    _execute_shifts(v)
    midpoint = 0.5 * (v.children[0].prelim + v.children[-1].prelim)
    left = _left_sibling(v)
    if left:
        v.prelim = left.prelim + 1.0
        v.mod = v.prelim - midpoint
    else:
        v.prelim = midpoint


def _left_sibling(v: _Shadow) -> _Shadow | None:
    if v.parent and v.number > 0:
        return v.parent.children[v.number - 1]
    return None


def tidy_layout(root, children: Mapping) -> dict:
    """Tidy coordinates as id -> (depth, offset); offsets are in sibling
    units with the minimum shifted to zero."""
    if root is None:
        raise EmptyView("layout needs at least one visible node")
    order = _build_shadow(root, children)
    _first_walk(order[0])
    offsets = {}
    stack = [(order[0], -order[0].prelim)]
    while stack:
        v, m = stack.pop()
        offsets[v.nid] = (v.depth, v.prelim + m)
        for w in v.children:
            stack.append((w, m + v.mod))
    low = min(off for _, off in offsets.values())
    return {nid: (depth, off - low) for nid, (depth, off) in offsets.items()}


@dataclass(frozen=True)
class LayoutResult:
    positions: dict[int, tuple[float, float]]
    marks: dict[int, str]
    level_gap: float
    sibling_gap: float

    @property
    def width(self) -> float:
        return max(x for x, _ in self.positions.values())

    @property
    def height(self) -> float:
        return max(y for _, y in self.positions.values())


def layout_view(view: ViewTree, level_gap: float = DEFAULT_LEVEL_GAP,
                sibling_gap: float = DEFAULT_SIBLING_GAP) -> LayoutResult:
    """Place every visible node of a view; collapsed subtree roots get a
    triangle mark, everything else a circle."""
    if level_gap <= 0 or sibling_gap <= 0:
        raise ValueError(f"gaps must be positive, got ({level_gap}, {sibling_gap})")
    visible = view.visible_preorder()
    if not visible:
        raise EmptyView("layout needs at least one visible node")
    children = {nid: view.visible_children(nid) for nid in visible}
    cells = tidy_layout(view.tree.root, children)
    positions = {nid: (depth * level_gap, off * sibling_gap)
                 for nid, (depth, off) in cells.items()}
    marks = {nid: "triangle" if nid in view.collapsed else "circle" for nid in visible}
    return LayoutResult(positions=positions, marks=marks,
                        level_gap=level_gap, sibling_gap=sibling_gap)
