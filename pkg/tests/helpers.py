"""Hand-construction helpers shared across the test suite."""

import dataclasses
import itertools

from atria.model import (
    DependencyEdge,
    EdgeKind,
    ExecutionMode,
    PrimitiveNode,
    Run,
    SourceText,
)


def mk_node(i, name, prov, *, line=1, column=1, count=1, time=1000,
            mode=ExecutionMode.SYNC, library=False):
    return PrimitiveNode(
        id=i, name=name, provenance=tuple(prov), line=line, column=column,
        count=count, inclusive_time_ns=time, mode=mode, library=library,
    )


def mk_run(nodes, edges, *, run_id="t", application="app",
           timestamp="2024-01-01T00:00:00Z", policy=None, source=None):
    return Run(
        run_id=run_id, application=application, timestamp=timestamp,
        policy=policy if policy is not None else {}, source=source,
        nodes=tuple(nodes), edges=tuple(edges),
    )


def tree_run(spec, **run_kw):
    """Build a valid run from a nested (name, [children]) spec.

    A node spec is (name,), (name, [children]), or with per-node
    PrimitiveNode overrides as a dict: (name, {"time": 5}, [children]).
    Ids are assigned in preorder; arg_index is sibling position.
    """
    nodes, edges = [], []
    counter = itertools.count()

    def walk(node_spec, prov, arg_index):
        name = node_spec[0]
        opts, children = {}, []
        for part in node_spec[1:]:
            if isinstance(part, dict):
                opts = part
            else:
                children = part
        my_prov = prov + ((name, arg_index),)
        nid = next(counter)
        nodes.append(mk_node(nid, name, my_prov, **opts))
        for i, ch in enumerate(children):
            cid = walk(ch, my_prov, i)
            edges.append(DependencyEdge(nid, cid, EdgeKind.OPERAND, i))
        return nid

    walk(spec, (), 0)
    return mk_run(nodes, edges, **run_kw)


def with_source(run, text, language="physl"):
    return mk_run(run.nodes, run.edges, run_id=run.run_id,
                  application=run.application, timestamp=run.timestamp,
                  policy=run.policy, source=SourceText(language, text))


def retimed(run, *, run_id, times=None, modes=None, drop=()):
    """Same structure, different measurements; drop must be leaf ids."""
    nodes = []
    for n in run.nodes:
        if n.id in drop:
            continue
        nodes.append(dataclasses.replace(
            n,
            inclusive_time_ns=(times or {}).get(n.id, n.inclusive_time_ns),
            mode=(modes or {}).get(n.id, n.mode),
        ))
    edges = [e for e in run.edges if e.source not in drop and e.target not in drop]
    return mk_run(nodes, edges, run_id=run_id, application=run.application,
                  timestamp=run.timestamp, policy=run.policy, source=run.source)


def ex1_variant_b(ex1):
    """ex1 with run b measurements: slower overall, sub async, x -> z."""
    run_b = retimed(
        ex1, run_id="ex1b",
        times={0: 21000, 1: 2500, 2: 15000, 4: 6000},
        modes={2: ExecutionMode.ASYNC},
        drop={5},
    )
    z = mk_node(6, "z", [("mul", 0), ("sub", 1), ("z", 2)],
                line=3, column=16, time=3000)
    return mk_run(run_b.nodes + (z,),
                  run_b.edges + (DependencyEdge(2, 6, EdgeKind.OPERAND, 2),),
                  run_id="ex1b", application=run_b.application,
                  timestamp=run_b.timestamp, policy=run_b.policy, source=run_b.source)
