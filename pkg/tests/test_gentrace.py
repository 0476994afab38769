"""Generator and simulator: policy semantics, determinism, goldens."""

from fractions import Fraction

import pytest

from atria.compare import diff, slower_run
from atria.errors import BadParams
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
from atria.metrics import exclusive_times
from atria.model import EdgeKind, ExecutionMode, parse_trace, serialize_trace, validate
from atria.tree import build_expression_tree
from conftest import DATA

SWEEP = [(s, d, b) for s in range(12) for d, b in ((1, 1), (2, 2), (3, 2), (4, 3))]


def leaf(name, cost):
    return SkeletonNode(name=name, base_cost_ns=cost, library=False)


def call(name, cost, children):
    return SkeletonNode(name=name, base_cost_ns=cost,
                        library=name in LIBRARY_NAMES, children=children)


def expected_times(skeleton, policy):
    """Recursive restatement of the policy semantics, kept independent
    of the simulator's traversal and bookkeeping."""
    keep = Fraction(1) - Fraction.from_float(policy.overlap_fraction)

    ids = {}

    def number(node):
        ids[id(node)] = len(ids)
        for c in node.children:
            number(c)

    number(skeleton.root)
    modes, times = {}, {}

    def visit(node):
        i = ids[id(node)]
        scaled = node.base_cost_ns
        if policy.cost_scale != 1.0:
            scaled = int(Fraction(node.base_cost_ns) * Fraction.from_float(policy.cost_scale))
        total, child_sum = scaled, 0
        for c in node.children:
            sub, incl = visit(c)
            total += sub
            child_sum += incl
        is_async = total >= policy.threshold_ns
        if is_async:
            times[i] = scaled + policy.async_overhead_ns + int(Fraction(child_sum) * keep)
        else:
            times[i] = scaled + child_sum
        modes[i] = is_async
        return total, times[i]

    visit(skeleton.root)
    return modes, times


# -- parameters --------------------------------------------------------------

def test_generate_rejects_bad_params():
    with pytest.raises(BadParams):
        generate_program(1, 0, 2)
    with pytest.raises(BadParams):
        generate_program(1, 3, 0)


def test_policy_rejects_bad_params():
    for kwargs in ({"threshold_ns": -1}, {"async_overhead_ns": -5},
                   {"overlap_fraction": -0.1}, {"overlap_fraction": 1.5},
                   {"cost_scale": 0.0}, {"cost_scale": -1.0}):
        with pytest.raises(BadParams):
            PolicyConfig(**kwargs)


def test_unknown_undecided_id():
    sk = generate_program(3, 2, 2)
    with pytest.raises(BadParams):
        simulate(sk, PolicyConfig(undecided_ids=frozenset({99})))


# -- determinism and goldens -------------------------------------------------

def test_generation_is_deterministic():
    assert generate_run(7, 3, 2) == generate_run(7, 3, 2)
    assert serialize_trace(generate_run(7, 3, 2)) == serialize_trace(generate_run(7, 3, 2))
    assert generate_run(7, 3, 2) != generate_run(8, 3, 2)


def test_golden_gen42():
    assert serialize_trace(generate_run(42, 3, 2)) == (DATA / "gen42.json").read_bytes()


def test_golden_gen10():
    assert serialize_trace(generate_run(10, 4, 3)) == (DATA / "gen10.json").read_bytes()


def test_run_id_depends_on_policy():
    sk = generate_program(5, 3, 2)
    a = simulate(sk, PolicyConfig())
    b = simulate(sk, PolicyConfig(threshold_ns=10))
    assert a.run_id != b.run_id
    assert a.policy["threshold_ns"] == "250000"
    assert b.policy["threshold_ns"] == "10"


# -- structural properties over a seed sweep ---------------------------------

@pytest.mark.parametrize("seed,depth,branching", SWEEP)
def test_sweep_valid_and_positioned(seed, depth, branching):
    run = generate_run(seed, depth, branching)
    assert validate(run) == []
    assert parse_trace(serialize_trace(run)) == run
    lines = run.source.text.splitlines()
    for n in run.nodes:
        window = lines[n.line - 1][n.column - 1:n.column - 1 + len(n.name)]
        assert window == n.name
        assert n.count == 1


@pytest.mark.parametrize("seed,depth,branching", SWEEP)
def test_sweep_elided_chains(seed, depth, branching):
    run = generate_run(seed, depth, branching)
    has_kids = {e.source for e in run.edges if e.kind is EdgeKind.OPERAND}
    by_name = {}
    for n in run.nodes:
        kind = EdgeKind.FUNCTION_REUSE if n.id in has_kids else EdgeKind.VARIABLE_ACCESS
        by_name.setdefault((kind, n.name), []).append(n.id)
    want = set()
    for (kind, _), ids in by_name.items():
        for a, b in zip(ids, ids[1:]):
            want.add((a, b, kind))
    got = {(e.source, e.target, e.kind) for e in run.edges if e.kind is not EdgeKind.OPERAND}
    assert got == want
    assert all(a < b for a, b, _ in got)


# -- policy semantics ---------------------------------------------------------

def test_hand_checked_tiny_case():
    sk = assemble_skeleton(call("add", 100, [leaf("x", 200), leaf("y", 300)]))
    run = simulate(sk, PolicyConfig(threshold_ns=250, async_overhead_ns=7,
                                    overlap_fraction=0.5))
    incl = {n.id: n.inclusive_time_ns for n in run.nodes}
    modes = {n.id: n.mode for n in run.nodes}
    # subtree sums: 600, 200, 300 against threshold 250
    assert modes == {0: ExecutionMode.ASYNC, 1: ExecutionMode.SYNC, 2: ExecutionMode.ASYNC}
    # x: 200; y: 300 + 7; root: 100 + 7 + floor(0.5 * 507)
    assert incl == {0: 360, 1: 200, 2: 307}


def test_threshold_boundary_is_inclusive():
    sk = assemble_skeleton(leaf("x", 100))
    run = simulate(sk, PolicyConfig(threshold_ns=100))
    assert run.node(0).mode is ExecutionMode.ASYNC
    run = simulate(sk, PolicyConfig(threshold_ns=101))
    assert run.node(0).mode is ExecutionMode.SYNC


@pytest.mark.parametrize("seed", range(8))
def test_modes_and_times_match_oracle(seed):
    sk = generate_program(seed, 4, 3)
    policy = PolicyConfig(threshold_ns=600_000, async_overhead_ns=1500,
                          overlap_fraction=0.5, cost_scale=1.3)
    want_async, want_times = expected_times(sk, policy)
    run = simulate(sk, policy)
    for n in run.nodes:
        assert n.inclusive_time_ns == want_times[n.id]
        assert n.mode is (ExecutionMode.ASYNC if want_async[n.id] else ExecutionMode.SYNC)


@pytest.mark.parametrize("policy", [
    PolicyConfig(threshold_ns=10 ** 18),                       # everything sync
    PolicyConfig(threshold_ns=0, async_overhead_ns=0, overlap_fraction=0.0),
])
def test_conservation_without_overlap(policy):
    for seed in range(6):
        run = simulate(generate_program(seed, 4, 3), policy)
        tree = build_expression_tree(run)
        values, slack = exclusive_times(tree)
        assert all(s == 0 for s in slack.values())
        assert sum(values.values()) == run.node(tree.root).inclusive_time_ns


def test_slack_lands_only_on_async_parents():
    policy = PolicyConfig(threshold_ns=400_000, overlap_fraction=0.5)
    found = 0
    for seed in range(10):
        run = simulate(generate_program(seed, 4, 3), policy)
        _, slack = exclusive_times(build_expression_tree(run))
        for nid, s in slack.items():
            if s > 0:
                found += 1
                assert run.node(nid).mode is ExecutionMode.ASYNC
    assert found > 0


def test_extremes_flip_every_mode():
    sk = generate_program(4, 4, 3)
    all_async = simulate(sk, PolicyConfig(threshold_ns=0))
    assert all(n.mode is ExecutionMode.ASYNC for n in all_async.nodes)
    all_sync = simulate(sk, PolicyConfig(threshold_ns=10 ** 18))
    assert all(n.mode is ExecutionMode.SYNC for n in all_sync.nodes)


def test_undecided_masks_label_not_timing():
    sk = generate_program(9, 3, 2)
    base = simulate(sk, PolicyConfig())
    masked = simulate(sk, PolicyConfig(undecided_ids=frozenset({0, 2})))
    assert masked.node(0).mode is ExecutionMode.UNDECIDED
    assert masked.node(2).mode is ExecutionMode.UNDECIDED
    for n in base.nodes:
        assert masked.node(n.id).inclusive_time_ns == n.inclusive_time_ns
        if n.id not in (0, 2):
            assert masked.node(n.id).mode is n.mode


def test_cost_scale_two_doubles_sync_times():
    sk = generate_program(11, 3, 3)
    slow = simulate(sk, PolicyConfig(threshold_ns=10 ** 18))
    slower = simulate(sk, PolicyConfig(threshold_ns=10 ** 18, cost_scale=2.0))
    for n in slow.nodes:
        assert slower.node(n.id).inclusive_time_ns == 2 * n.inclusive_time_ns


def test_cost_scale_can_flip_modes():
    sk = assemble_skeleton(leaf("x", 100))
    below = simulate(sk, PolicyConfig(threshold_ns=150))
    above = simulate(sk, PolicyConfig(threshold_ns=150, cost_scale=2.0))
    assert below.node(0).mode is ExecutionMode.SYNC
    assert above.node(0).mode is ExecutionMode.ASYNC


def test_node_count_bounded_by_full_tree():
    for seed, depth, branching in SWEEP:
        run = generate_run(seed, depth, branching)
        cap = depth if branching == 1 else (branching ** depth - 1) // (branching - 1)
        assert 1 <= len(run.nodes) <= cap


def test_policy_seed_recorded_and_hashed():
    sk = generate_program(5, 3, 2)
    a = simulate(sk, PolicyConfig(seed=0))
    b = simulate(sk, PolicyConfig(seed=1))
    assert a.policy["seed"] == "0"
    assert b.policy["seed"] == "1"
    assert a.run_id != b.run_id
    for n in a.nodes:
        assert b.node(n.id).inclusive_time_ns == n.inclusive_time_ns
        assert b.node(n.id).mode is n.mode


def test_pair_fully_matchable():
    sk = generate_program(7, 4, 3)
    a, b = make_comparison_pair(sk, PolicyConfig(threshold_ns=0),
                                PolicyConfig(threshold_ns=10 ** 18))
    result = diff(a, b)
    assert not result.only_a
    assert not result.only_b
    assert len(result.matches) == len(a.nodes) == len(b.nodes)


def test_pair_same_policy_diffs_to_zero():
    sk = generate_program(3, 4, 2)
    a, b = make_comparison_pair(sk, PolicyConfig(), PolicyConfig())
    result = diff(a, b)
    assert all(m.delta_ns == 0 and not m.mode_changed for m in result.matches)
    assert slower_run(result) is None


def test_pair_threshold_extremes_change_every_mode():
    sk = generate_program(8, 4, 3)
    a, b = make_comparison_pair(sk, PolicyConfig(threshold_ns=0),
                                PolicyConfig(threshold_ns=10 ** 18))
    assert all(m.mode_changed for m in diff(a, b).matches)


def test_pair_uniform_inflation_slows_b():
    # regression shape: same program, every cost up 10 percent
    sk = generate_program(6, 4, 3)
    base = PolicyConfig(threshold_ns=250_000)
    a, b = make_comparison_pair(sk, base,
                                PolicyConfig(threshold_ns=250_000, cost_scale=1.1))
    result = diff(a, b)
    assert all(m.delta_ns > 0 for m in result.matches)
    assert slower_run(result) == b.run_id


def test_overhead_never_speeds_anything_up():
    for seed in range(8):
        sk = generate_program(seed, 4, 3)
        runs = [simulate(sk, PolicyConfig(threshold_ns=100_000, async_overhead_ns=ov))
                for ov in (0, 500, 5_000)]
        for lo, hi in zip(runs, runs[1:]):
            for n in lo.nodes:
                assert hi.node(n.id).inclusive_time_ns >= n.inclusive_time_ns
