"""Command-line entry points.

Exit codes: 0 success, 1 a validated file broke run invariants (one
violation per line on stdout), 2 unreadable or malformed input and any
other module error (message on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .compare import diff, report
from .errors import AtriaError, InvariantViolation, MalformedDocument, SchemaViolation
from .gentrace import PolicyConfig, generate_run
from .metrics import Metric, hotspots
from .model import Run, parse_trace, path_string, serialize_trace
from .render import render_svg
from .tree import UNINTERESTING_NAMES, build_expression_tree
from .view import build_tree_payload

ENV_UNINTERESTING = "ATRIA_UNINTERESTING"


def resolve_uninteresting() -> frozenset[str]:
    """Default-collapse name set; the environment overrides the builtin
    list, and an empty value means collapse nothing."""
    raw = os.environ.get(ENV_UNINTERESTING)
    if raw is None:
        return UNINTERESTING_NAMES
    return frozenset(part.strip() for part in raw.split(",") if part.strip())


def _load(path: str) -> Run:
    return parse_trace(Path(path).read_bytes())


def cmd_validate(args) -> int:
    try:
        data = Path(args.trace).read_bytes()
        parse_trace(data)
    except (OSError, MalformedDocument, SchemaViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        for violation in exc.violations:
            print(violation)
        return 1
    print(f"{args.trace}: ok")
    return 0


def cmd_render(args) -> int:
    run = _load(args.trace)
    other = _load(args.compare) if args.compare else None
    collapsed = None
    if args.collapse is not None:
        collapsed = () if args.collapse == "" else tuple(
            int(part) for part in args.collapse.split(","))
    payload = build_tree_payload(
        run, metric=Metric(args.metric), collapsed=collapsed,
        uninteresting=resolve_uninteresting(), compare_with=other)
    Path(args.out).write_text(render_svg(payload), encoding="utf-8")
    return 0


def cmd_top(args) -> int:
    run = _load(args.trace)
    tree = build_expression_tree(run)
    for rank, (nid, value) in enumerate(hotspots(tree, Metric(args.metric), args.n), 1):
        node = run.node(nid)
        print(f"{rank:>3}. {value:>14} ns  {node.name}  {path_string(node.provenance)}")
    return 0


def cmd_diff(args) -> int:
    rep = report(diff(_load(args.a), _load(args.b), Metric(args.metric)))
    if args.format == "json":
        print(json.dumps(rep, indent=2))
        return 0
    print(f"runs: {rep['run_a']} vs {rep['run_b']}  (metric {rep['metric']})")
    print(f"slower: {rep['slower']}  "
          f"totals: {rep['totals']['run_a']} ns vs {rep['totals']['run_b']} ns")
    for m in rep["matches"]:
        flag = "  mode changed" if m["mode_changed"] else ""
        print(f"{m['delta_ns']:>+14} ns  {m['path']}{flag}")
    for path in rep["only_a"]:
        print(f"      only in a  {path}")
    for path in rep["only_b"]:
        print(f"      only in b  {path}")
    return 0


def cmd_gen(args) -> int:
    policy = PolicyConfig(
        threshold_ns=args.threshold,
        async_overhead_ns=args.overhead,
        overlap_fraction=args.overlap,
        cost_scale=args.cost_scale,
    )
    run = generate_run(args.seed, args.depth, args.branching, policy)
    Path(args.out).write_bytes(serialize_trace(run))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import RunStore, create_app

    store = RunStore(args.directory)
    app = create_app(store, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atria",
        description="Explore, render, and compare execution-trace expression trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a trace document")
    p.add_argument("trace")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="render a trace to SVG")
    p.add_argument("trace")
    p.add_argument("--compare", help="second trace for a diff rendering")
    p.add_argument("--metric", choices=["inclusive", "exclusive"], default="inclusive")
    p.add_argument("--collapse", help="csv node ids; empty string expands all")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("top", help="rank nodes by time")
    p.add_argument("trace")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--metric", choices=["inclusive", "exclusive"], default="inclusive")
    p.set_defaults(func=cmd_top)

    p = sub.add_parser("diff", help="compare two traces")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--metric", choices=["inclusive", "exclusive"], default="inclusive")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("gen", help="generate a synthetic trace")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--branching", type=int, default=3)
    p.add_argument("--threshold", type=int, default=250_000)
    p.add_argument("--overhead", type=int, default=0)
    p.add_argument("--overlap", type=float, default=0.0)
    p.add_argument("--cost-scale", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("serve", help="serve a directory of traces over HTTP")
    p.add_argument("directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="static directory to mount at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AtriaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
