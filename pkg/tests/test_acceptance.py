"""End-to-end acceptance checks.

Each test covers one contract-level guarantee and prints a PASS line
with its evidence. Tolerances are stated inline; everything not marked
with a tolerance is exact integer or structural equality.
"""

import json
import random
import time

import pytest
from fastapi.testclient import TestClient

from atria.cli import main as cli_main
from atria.compare import diff, report, slower_run
from atria.gentrace import (
    LIBRARY_NAMES,
    PolicyConfig,
    SkeletonNode,
    assemble_skeleton,
    generate_program,
    generate_run,
    make_comparison_pair,
    simulate,
)
from atria.metrics import Metric, exclusive_times, hotspots
from atria.model import ExecutionMode, parse_trace, path_string, serialize_trace, validate
from atria.codelink import repeated_primitives
from atria.render import render_svg
from atria.server import RunStore, create_app
from atria.tree import ViewTree, build_expression_tree
from atria.view import build_tree_payload

from conftest import DATA
from test_layout import check_all, ordered_shapes, random_tree

EX1 = str(DATA / "ex1.json")

CORPUS_POLICIES = [
    PolicyConfig(),
    PolicyConfig(threshold_ns=0),
    PolicyConfig(threshold_ns=10 ** 18),
    PolicyConfig(threshold_ns=120_000, async_overhead_ns=900, overlap_fraction=0.5),
    PolicyConfig(threshold_ns=80_000, overlap_fraction=1.0, cost_scale=1.3),
    PolicyConfig(threshold_ns=200_000, async_overhead_ns=50, overlap_fraction=0.25, seed=7),
]
CORPUS_SHAPES = [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (5, 3), (2, 4)]


@pytest.fixture(scope="module")
def corpus():
    runs = []
    for i in range(200):
        depth, branching = CORPUS_SHAPES[i % len(CORPUS_SHAPES)]
        runs.append(generate_run(i, depth, branching,
                                 CORPUS_POLICIES[i % len(CORPUS_POLICIES)]))
    return runs


def test_trace_round_trip(corpus):
    """Serializing then parsing reproduces each run exactly and none of
    the 200 generated runs violates an invariant; under 10 seconds."""
    start = time.perf_counter()
    for run in corpus:
        assert parse_trace(serialize_trace(run)) == run
        assert validate(run) == []
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"PASS round-trip: 200 runs parse(serialize(r)) == r, "
          f"validate == [], {elapsed:.2f}s")


def test_spanning_partition(corpus):
    """The expression tree spans every node, and tree edges plus elided
    edges partition the edge set exactly."""
    for run in corpus:
        tree = build_expression_tree(run)
        assert set(tree.preorder()) == {n.id for n in run.nodes}
        tree_edges = sum(len(kids) for kids in tree.children.values())
        assert tree_edges == len(run.nodes) - 1
        assert tree_edges + len(tree.elided) == len(run.edges)
    print(f"PASS spanning/partition: {len(corpus)} runs, "
          f"|tree| + |elided| == |edges| exactly")


def test_exclusive_time_conservation():
    """All-sync runs conserve time exactly (integer ns); with overlap,
    exclusive values stay non-negative and slack sits on async parents."""
    sync_policy = PolicyConfig(threshold_ns=10 ** 18)
    for seed in range(40):
        run = generate_run(seed, 4, 3, sync_policy)
        tree = build_expression_tree(run)
        values, slack = exclusive_times(tree)
        assert all(s == 0 for s in slack.values())
        assert sum(values.values()) == run.node(tree.root).inclusive_time_ns

    overlap_policy = PolicyConfig(threshold_ns=120_000, async_overhead_ns=900,
                                  overlap_fraction=0.5)
    slack_seen = 0
    for seed in range(40):
        run = generate_run(seed, 4, 3, overlap_policy)
        values, slack = exclusive_times(build_expression_tree(run))
        assert all(v >= 0 for v in values.values())
        for nid, s in slack.items():
            if s > 0:
                slack_seen += 1
                assert run.node(nid).mode is ExecutionMode.ASYNC
    assert slack_seen > 0
    print(f"PASS conservation: 40 all-sync runs exact, 40 overlap-0.5 runs "
          f"non-negative with {slack_seen} slack entries, all on async parents")


def test_layout_aesthetics():
    """Every ordered tree shape up to 7 nodes plus 100 random trees up to
    200 nodes satisfies centering, separation, level placement, mirror
    symmetry, and subtree congruence within 1e-9."""
    shapes = 0
    for n in range(1, 8):
        for children in ordered_shapes(n):
            check_all(0, children)
            shapes += 1
    assert shapes == 197

    rng = random.Random(0xACCE97)
    for _ in range(100):
        check_all(0, random_tree(rng, rng.randint(2, 200)))
    print(f"PASS layout: {shapes} exhaustive shapes <= 7 nodes "
          f"+ 100 random trees <= 200 nodes, tolerance 1e-9")


ALGEBRA_PAIRS = [
    (PolicyConfig(), PolicyConfig(cost_scale=1.5)),
    (PolicyConfig(threshold_ns=50_000),
     PolicyConfig(threshold_ns=300_000, async_overhead_ns=400)),
    (PolicyConfig(threshold_ns=100_000, overlap_fraction=0.5),
     PolicyConfig(threshold_ns=100_000, overlap_fraction=1.0)),
    (PolicyConfig(threshold_ns=0, async_overhead_ns=1_000),
     PolicyConfig(threshold_ns=10 ** 18)),
]


def test_comparison_algebra():
    """Self-diff is the zero object, swapping runs negates every delta,
    and threshold extremes change every non-root mode. Exact."""
    for i in range(100):
        sk = generate_program(i, 4, 3)
        pa, pb = ALGEBRA_PAIRS[i % len(ALGEBRA_PAIRS)]
        a, b = make_comparison_pair(sk, pa, pb)

        self_diff = diff(a, a)
        assert all(m.delta_ns == 0 and not m.mode_changed for m in self_diff.matches)
        assert not self_diff.only_a and not self_diff.only_b
        assert slower_run(self_diff) is None

        fwd, rev = diff(a, b), diff(b, a)
        fwd_by_path = {m.path: m for m in fwd.matches}
        rev_by_path = {m.path: m for m in rev.matches}
        assert fwd_by_path.keys() == rev_by_path.keys()
        for path, m in fwd_by_path.items():
            assert rev_by_path[path].delta_ns == -m.delta_ns
            assert rev_by_path[path].mode_changed == m.mode_changed
        assert fwd.only_a == rev.only_b and fwd.only_b == rev.only_a

    for seed in range(10):
        sk = generate_program(seed, 4, 3)
        a, b = make_comparison_pair(sk, PolicyConfig(threshold_ns=0),
                                    PolicyConfig(threshold_ns=10 ** 18))
        root = build_expression_tree(a).root
        for m in diff(a, b).matches:
            if m.node_a != root:
                assert m.mode_changed
    print("PASS comparison algebra: 100 pairs antisymmetric with zero "
          "self-diff; threshold extremes change every non-root mode")


# -- evaluation-task reenactment ---------------------------------------------

def _leaf(name, cost):
    return SkeletonNode(name=name, base_cost_ns=cost, library=False)


def _call(name, cost, children):
    return SkeletonNode(name=name, base_cost_ns=cost,
                        library=name in LIBRARY_NAMES, children=children)


def _block(costs):
    dot, add, l1c, l2c, mul, l3c, l4c = costs["c"]
    n1, n2, n3, n4 = costs["names"]
    return _call("dot", dot, [
        _call("add", add, [_leaf(n1, l1c), _leaf(n2, l2c)]),
        _call("mul", mul, [_leaf(n3, l3c), _leaf(n4, l4c)]),
    ])


def fifty_node_program():
    """A hand-planted 50-node program: one 490 us leaf (the exclusive
    argmax), one subtree summing exactly to 500 us (threshold boundary),
    and two same-line name duplicates."""
    blocks = [
        {"c": (3000, 2000, 1500, 1100, 2500, 1800, 1200), "names": "x y w b".split()},
        {"c": (3200, 2100, 1500, 1500, 2600, 2200, 2200), "names": "x x pred pred".split()},
        {"c": (3100, 2300, 1400, 1600, 2700, 490_000, 1300), "names": "x y grad b".split()},
        {"c": (2900, 2050, 1700, 1250, 2450, 1750, 1350), "names": "pred y w b".split()},
        {"c": (3000, 2000, 100_000, 100_000, 2500, 146_250, 146_250), "names": "x y w b".split()},
        {"c": (3050, 2150, 1450, 1150, 2550, 1850, 1250), "names": "alpha y w data".split()},
        {"c": (2950, 2250, 1350, 1050, 2350, 1650, 1050), "names": "x y w b".split()},
    ]
    root = SkeletonNode(name="block", base_cost_ns=2000, library=False,
                        children=[_block(b) for b in blocks])
    return assemble_skeleton(root, seed=999, depth=3, branching=7)


def subtree_sums(skeleton):
    """Preorder id -> base-cost subtree sum, computed directly from the
    skeleton; the policy-predicted async set is {id: sum >= threshold}."""
    sums = {}
    counter = iter(range(10 ** 6))

    def walk(node):
        nid = next(counter)
        total = node.base_cost_ns + sum(walk(c) for c in node.children)
        sums[nid] = total
        return total

    walk(skeleton.root)
    return sums


def test_evaluation_reenactment():
    """Hotspot lookup, mode filtering, duplicate spotting, and two-run
    questions all give the planted answers on a 50-node fixture."""
    start = time.perf_counter()
    sk = fifty_node_program()
    policy = PolicyConfig(threshold_ns=500_000)
    run = simulate(sk, policy)
    assert len(run.nodes) == 50

    sums = subtree_sums(sk)
    tree = build_expression_tree(run)

    # L1: single hotspot is the argmax under either metric.
    # overhead and overlap are zero, so inclusive == subtree sum and
    # exclusive == own base cost; argmaxes are the root and the planted leaf.
    assert hotspots(tree, Metric.INCLUSIVE, 1) == [(0, 1_072_350)]
    assert hotspots(tree, Metric.EXCLUSIVE, 1) == [(20, 490_000)]
    assert max(sums.values()) == sums[0] == 1_072_350
    assert run.node(20).name == "grad"

    # L2/L3: mode filters reproduce the policy-predicted sets
    predicted_async = {nid for nid, s in sums.items() if s >= policy.threshold_ns}
    assert predicted_async == {0, 15, 29}          # root, heavy dot, boundary dot
    assert {n.id for n in run.nodes if n.mode is ExecutionMode.ASYNC} == predicted_async
    assert ({n.id for n in run.nodes if n.mode is ExecutionMode.SYNC}
            == set(sums) - predicted_async)

    # L4: both planted same-line duplicates, nothing else
    assert repeated_primitives(run) == [
        {"name": "x", "line": 6, "node_ids": [10, 11]},
        {"name": "pred", "line": 7, "node_ids": [13, 14]},
    ]

    # C1: the uniformly slower run is named as slower
    fast, slow = make_comparison_pair(sk, policy,
                                      PolicyConfig(threshold_ns=500_000, cost_scale=1.2))
    root_fast = fast.node(0).inclusive_time_ns
    root_slow = slow.node(0).inclusive_time_ns
    assert root_slow > root_fast
    assert slower_run(diff(fast, slow)) == slow.run_id

    # C2: lowering the threshold flags exactly the in-between subtrees
    a, b = make_comparison_pair(sk, policy, PolicyConfig(threshold_ns=150_000))
    planted = {nid for nid, s in sums.items() if 150_000 <= s < 500_000}
    assert planted == {19, 20, 30, 33}
    flagged = {m.node_a for m in diff(a, b).matches if m.mode_changed}
    assert flagged == planted

    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"PASS reenactment: L1 argmax both metrics, L2/L3 exact mode sets, "
          f"L4 both planted duplicates, C1 slower run, C2 exact mode-change "
          f"set, {elapsed:.2f}s")


def test_regression_mimic():
    """A 20% uniform cost inflation shows up as all-positive deltas with
    mean relative delta 0.20 +/- 0.01."""
    deltas = []
    for seed in range(10):
        sk = generate_program(seed, 4, 3)
        a, b = make_comparison_pair(sk, PolicyConfig(), PolicyConfig(cost_scale=1.2))
        for m in diff(a, b).matches:
            assert m.delta_ns > 0
            deltas.append(m.delta_ns / m.time_a)
    mean = sum(deltas) / len(deltas)
    assert abs(mean - 0.20) <= 0.01
    print(f"PASS regression mimic: {len(deltas)} matched nodes all positive, "
          f"mean relative delta {mean:.4f} (target 0.20 +/- 0.01)")


def test_cli_svg_determinism(tmp_path, gen10, monkeypatch):
    """Rendering twice yields identical bytes, and the SVG shape count
    equals the visible-node count across 20 random collapse states."""
    monkeypatch.delenv("ATRIA_UNINTERESTING", raising=False)
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    assert cli_main(["render", EX1, "--out", str(out1)]) == 0
    assert cli_main(["render", EX1, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    tree = build_expression_tree(gen10)
    candidates = [nid for nid, kids in tree.children.items()
                  if kids and nid != tree.root]
    rng = random.Random(20_240_814)
    for _ in range(20):
        picked = tuple(sorted(rng.sample(candidates, rng.randint(0, len(candidates)))))
        view = ViewTree(tree, picked)
        visible = sum(1 for _ in view.visible_preorder())
        svg = render_svg(build_tree_payload(gen10, collapsed=picked))
        assert svg.count('class="node ') == visible
    print("PASS determinism: byte-identical renders; shape count == visible "
          "count for 20 random collapse states")


def test_api_contract(ex1):
    """Every payload served over HTTP equals the direct module output,
    for the worked example plus ten generated runs."""
    store = RunStore()
    store.add(ex1)
    pairs = []
    for seed in range(5):
        sk = generate_program(seed + 100, 4, 3)
        a, b = make_comparison_pair(sk, PolicyConfig(threshold_ns=120_000),
                                    PolicyConfig(threshold_ns=120_000, cost_scale=1.25))
        store.add(a)
        store.add(b)
        pairs.append((a, b))
    client = TestClient(create_app(store))

    def as_json(payload):
        return json.loads(json.dumps(payload))

    checked = 0
    for run in [ex1] + [r for pair in pairs for r in pair]:
        for query, kwargs in [
            ("", {}),
            ("?metric=exclusive", {"metric": Metric.EXCLUSIVE}),
            ("?collapsed=", {"collapsed": ()}),
        ]:
            resp = client.get(f"/api/runs/{run.run_id}/tree{query}")
            assert resp.status_code == 200
            assert resp.json() == as_json(build_tree_payload(run, **kwargs))
            checked += 1

    for a, b in pairs:
        resp = client.get(f"/api/compare?a={a.run_id}&b={b.run_id}")
        assert resp.status_code == 200
        assert resp.json() == as_json(report(diff(a, b)))
        tree_resp = client.get(f"/api/runs/{a.run_id}/tree?compare={b.run_id}")
        assert tree_resp.json() == as_json(build_tree_payload(a, compare_with=b))
        checked += 2
    print(f"PASS api contract: {checked} payloads equal direct module "
          f"computation for the worked example + 10 generated runs")
