#!/usr/bin/env python3
"""Record live HTTP API responses as JSON fixtures for the web UI tests.

The UI test suite replays these instead of talking to a server, so they
must be regenerated whenever a payload shape changes. Three runs are
recorded: the six-node worked example, a variant with elided edges
(one variable access, one library-to-library reuse), and a mode-flipped
twin that produces exactly one mode change under comparison.
"""

import argparse
import copy
import json
from pathlib import Path

from fastapi.testclient import TestClient

from atria.model import parse_trace
from atria.server import RunStore, create_app

ROOT = Path(__file__).resolve().parent.parent
EX1 = ROOT / "tests" / "data" / "ex1.json"


def variants(base: dict) -> tuple[dict, dict]:
    varfix = copy.deepcopy(base)
    varfix["run"]["run_id"] = "ex1var"
    varfix["edges"].append({"source": 3, "target": 5, "kind": "variable",
                            "arg_index": None})
    varfix["edges"].append({"source": 0, "target": 2, "kind": "function-reuse",
                            "arg_index": None})

    flipped = copy.deepcopy(base)
    flipped["run"]["run_id"] = "ex1flip"
    for node in flipped["nodes"]:
        if node["id"] == 2:
            node["mode"] = "async"
    return varfix, flipped


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path,
                        default=ROOT / "frontend" / "tests" / "fixtures")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    base = json.loads(EX1.read_text(encoding="utf-8"))
    varfix, flipped = variants(base)
    store = RunStore()
    for doc in (base, varfix, flipped):
        store.add(parse_trace(json.dumps(doc)))
    client = TestClient(create_app(store))

    recordings = {
        "runs.json": "/api/runs",
        "encoding.json": "/api/encoding",
        "ex1_tree.json": "/api/runs/ex1/tree",
        "ex1_tree_exclusive.json": "/api/runs/ex1/tree?metric=exclusive",
        "ex1_tree_collapse2.json": "/api/runs/ex1/tree?collapsed=2",
        "ex1_tree_compare.json": "/api/runs/ex1/tree?compare=ex1flip",
        "ex1_source.json": "/api/runs/ex1/source",
        "ex1_hotspots.json": "/api/runs/ex1/hotspots",
        "ex1_node0.json": "/api/runs/ex1/node/0",
        "compare_report.json": "/api/compare?a=ex1&b=ex1flip",
        "varfix_tree.json": "/api/runs/ex1var/tree",
        "varfix_node5.json": "/api/runs/ex1var/node/5",
        "varfix_node0.json": "/api/runs/ex1var/node/0",
        "varfix_node0_lib1.json": "/api/runs/ex1var/node/0?library=1",
    }
    for name, url in recordings.items():
        resp = client.get(url)
        assert resp.status_code == 200, f"{url} -> {resp.status_code}"
        path = args.out / name
        path.write_text(json.dumps(resp.json(), indent=2, sort_keys=False) + "\n",
                        encoding="utf-8")
        print(f"{path}  <-  {url}")

    svg = client.get("/api/runs/ex1/render")
    assert svg.status_code == 200
    (args.out / "ex1_render.svg").write_bytes(svg.content)
    print(f"{args.out / 'ex1_render.svg'}  <-  /api/runs/ex1/render")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
