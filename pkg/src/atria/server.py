"""Read-only HTTP service over a directory of trace runs.

Every response is the canonical serialization of a core-module output;
the service itself computes nothing. Query parameters are parsed by
hand so that any bad value is a 400, unknown runs and nodes are 404,
and an uploaded trace that fails validation is a 422 whose body lists
the violations.
"""

from __future__ import annotations

import hashlib
import logging
import re
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse

from .codelink import build_source_map
from .compare import diff, report
from .errors import (
    AtriaError,
    DuplicateRun,
    InvariantViolation,
    MalformedDocument,
    SchemaViolation,
    UnknownNode,
)
from .metrics import Metric, hotspots
from .model import Run, parse_trace, path_string, serialize_trace
from .render import render_svg
from .tree import build_expression_tree, subtree_summary
from .view import ENCODING, build_tree_payload, elided_payload

log = logging.getLogger("atria.server")


def _filename(run_id: str) -> str:
    if re.fullmatch(r"[A-Za-z0-9._-]+", run_id):
        return f"{run_id}.json"
    return f"run-{hashlib.sha256(run_id.encode()).hexdigest()[:16]}.json"


class RunStore:
    """Directory-backed run_id -> Run map. Files that do not parse are
    skipped with a warning rather than failing startup; ids are unique
    and contents immutable once loaded."""

    def __init__(self, directory: str | Path | None = None):
        self._dir = Path(directory) if directory is not None else None
        self._runs: dict[str, Run] = {}
        self._lock = threading.Lock()
        if self._dir is not None:
            self._load()

    def _load(self):
        for path in sorted(self._dir.glob("*.json")):
            try:
                run = parse_trace(path.read_bytes())
            except AtriaError as exc:
                log.warning("skipping %s: %s", path.name, exc)
                continue
            if run.run_id in self._runs:
                log.warning("skipping %s: duplicate run id %r", path.name, run.run_id)
                continue
            self._runs[run.run_id] = run

    def add(self, run: Run, persist: bool = True):
        with self._lock:
            if run.run_id in self._runs:
                raise DuplicateRun(run.run_id)
            self._runs[run.run_id] = run
            if self._dir is not None and persist:
                (self._dir / _filename(run.run_id)).write_bytes(serialize_trace(run))

    def get(self, run_id: str) -> Run | None:
        return self._runs.get(run_id)

    def list(self) -> list[Run]:
        return [self._runs[k] for k in sorted(self._runs)]

    def __len__(self):
        return len(self._runs)


def _summary(run: Run) -> dict:
    tree = build_expression_tree(run)
    return {
        "run_id": run.run_id,
        "application": run.application,
        "timestamp": run.timestamp,
        "policy": dict(run.policy),
        "node_count": len(run.nodes),
        "total_time_ns": run.node(tree.root).inclusive_time_ns,
        "has_source": run.source is not None,
    }


def create_app(store: RunStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="trace explorer", docs_url=None, redoc_url=None)

    def need_run(run_id: str) -> Run:
        run = store.get(run_id)
        if run is None:
            raise HTTPException(404, f"unknown run {run_id!r}")
        return run

    def parse_metric(value: str | None) -> Metric:
        if value is None:
            return Metric.INCLUSIVE
        try:
            return Metric(value)
        except ValueError:
            raise HTTPException(
                400, f"metric must be inclusive or exclusive, got {value!r}") from None

    def parse_collapsed(value: str | None):
        """None keeps the default collapse; '' expands everything."""
        if value is None:
            return None
        if value == "":
            return ()
        try:
            return tuple(int(part) for part in value.split(","))
        except ValueError:
            raise HTTPException(400, f"collapsed must be csv of ids, got {value!r}") from None

    def parse_int(value: str, name: str) -> int:
        try:
            return int(value)
        except ValueError:
            raise HTTPException(400, f"{name} must be an integer, got {value!r}") from None

    def tree_args(run_id: str, metric: str | None, collapsed: str | None,
                  compare: str | None):
        run = need_run(run_id)
        other = need_run(compare) if compare is not None else None
        m = parse_metric(metric)
        col = parse_collapsed(collapsed)
        try:
            return build_tree_payload(run, metric=m, collapsed=col, compare_with=other)
        except UnknownNode as exc:
            raise HTTPException(400, str(exc)) from None

    @app.get("/api/runs")
    def list_runs():
        return [_summary(run) for run in store.list()]

    @app.post("/api/runs", status_code=201)
    async def upload_run(request: Request):
        data = await request.body()
        try:
            run = parse_trace(data)
        except (MalformedDocument, SchemaViolation) as exc:
            return JSONResponse(status_code=422, content={"violations": [
                {"code": type(exc).__name__, "ids": [], "message": str(exc)}]})
        except InvariantViolation as exc:
            return JSONResponse(status_code=422, content={"violations": [
                {"code": v.code, "ids": list(v.ids), "message": v.message}
                for v in exc.violations]})
        try:
            store.add(run)
        except DuplicateRun:
            raise HTTPException(409, f"run {run.run_id!r} already stored") from None
        return {"run_id": run.run_id}

    @app.get("/api/runs/{run_id}/tree")
    def tree_route(run_id: str, metric: str | None = None,
                   collapsed: str | None = None, compare: str | None = None):
        return tree_args(run_id, metric, collapsed, compare)

    @app.get("/api/runs/{run_id}/render")
    def render_route(run_id: str, metric: str | None = None,
                     collapsed: str | None = None, compare: str | None = None):
        payload = tree_args(run_id, metric, collapsed, compare)
        return Response(content=render_svg(payload), media_type="image/svg+xml")

    @app.get("/api/runs/{run_id}/node/{node_id}")
    def node_route(run_id: str, node_id: str, library: str = "0"):
        run = need_run(run_id)
        if library not in ("0", "1"):
            raise HTTPException(400, f"library must be 0 or 1, got {library!r}")
        nid = parse_int(node_id, "node id")
        try:
            elided = elided_payload(run, nid, include_library=library == "1")
            summary = subtree_summary(build_expression_tree(run), nid)
        except UnknownNode as exc:
            raise HTTPException(404, str(exc)) from None
        n = run.node(nid)
        return {
            "id": n.id,
            "name": n.name,
            "time_ns": n.inclusive_time_ns,
            "mode": n.mode.value,
            "count": n.count,
            "line": n.line,
            "column": n.column,
            "library": n.library,
            "path": path_string(n.provenance),
            "hidden_descendants": summary["descendants"],
            "elided": elided["edges"],
        }

    @app.get("/api/runs/{run_id}/source")
    def source_route(run_id: str):
        run = need_run(run_id)
        if run.source is None:
            raise HTTPException(404, f"run {run_id!r} has no source")
        smap = build_source_map(run)
        return {
            "language": run.source.language,
            "text": run.source.text,
            "line_count": run.source.line_count,
            "line_to_nodes": {str(line): list(ids)
                              for line, ids in sorted(smap.line_to_nodes.items())},
        }

    @app.get("/api/runs/{run_id}/hotspots")
    def hotspots_route(run_id: str, metric: str | None = None, n: str = "10"):
        run = need_run(run_id)
        m = parse_metric(metric)
        limit = parse_int(n, "n")
        if limit < 0:
            raise HTTPException(400, f"n must be non-negative, got {limit}")
        tree = build_expression_tree(run)
        out = []
        for nid, value in hotspots(tree, m, limit):
            node = run.node(nid)
            out.append({"node_id": nid, "name": node.name, "value_ns": value,
                        "line": node.line, "path": path_string(node.provenance)})
        return out

    @app.get("/api/compare")
    def compare_route(a: str | None = None, b: str | None = None,
                      metric: str | None = None):
        if a is None or b is None:
            raise HTTPException(400, "parameters a and b are both required")
        run_a, run_b = need_run(a), need_run(b)
        return report(diff(run_a, run_b, parse_metric(metric)))

    @app.get("/api/encoding")
    def encoding_route():
        return ENCODING

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
