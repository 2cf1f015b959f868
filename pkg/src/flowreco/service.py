"""HTTP + WebSocket service for the simulator and flow engine.

Exposes app launching, action injection with live flow tracking, stage
generation from selected elements, flow-file persistence, and scenario
runs. Screen mirroring streams MirrorFrame JSON over a WebSocket; every
step emits a frame with a strictly increasing sequence number.

Elements are addressed by stable node ids ("n0", "n1", ...) assigned in
depth-first order over the current tree, so clients never pick elements by
coordinates.
"""

from __future__ import annotations

import asyncio
import json
import os
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect

from . import vpath as vp
from .flow import FlowTracker, load_flow_file, on_ui_action
from .scenario import ScenarioError, load_scenario, run_scenario
from .simapp import AppSession, AppSpec, action_from_json, render_screen
from .viewtree import ViewTree, node_to_json, snapshot_digest

ANY_INTERACTION = "AnyInteraction"
_KINDS = {"Tap", "LongPress", "TypeText", "Drag", "Back", ANY_INTERACTION}


def tree_with_ids(tree: ViewTree) -> dict:
    """Serialized tree where every node carries its DFS-preorder id."""
    counter = [0]

    def conv(node):
        doc = node_to_json(node)
        doc["id"] = f"n{counter[0]}"
        counter[0] += 1
        doc["children"] = [conv(c) for c in node.children]
        return doc

    return {
        "screen_id": tree.screen_id,
        "width": tree.screen_width,
        "height": tree.screen_height,
        "root": conv(tree.root),
    }


@dataclass
class SessionContext:
    session_id: str
    session: AppSession
    trackers: list[FlowTracker]
    seq: int = 0
    subscribers: list[asyncio.Queue] = field(default_factory=list)
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)

    def frame(self) -> dict:
        tree = self.session.tree
        return {
            "session_id": self.session_id,
            "seq": self.seq,
            "app_id": self.session.spec.app_id,
            "status": self.session.status,
            "digest": snapshot_digest(tree),
            "tree": tree_with_ids(tree),
            "trackers": [
                {
                    "flow_id": t.flow.flow_id,
                    "state": t.state,
                    "stage": t.current_stage_id,
                    "records": len(t.records),
                }
                for t in self.trackers
            ],
        }

    def emit(self) -> dict:
        self.seq += 1
        frame = self.frame()
        for q in self.subscribers:
            q.put_nowait(frame)
        return frame


def _atomic_write(path: str, data: bytes):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = f"{path}.{uuid.uuid4().hex}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def generate_stage_from_selection(
    ctx: SessionContext,
    selected: list[str],
    kinds: Optional[dict] = None,
    stage_id: str = "stage",
    next_ids: Optional[list[str]] = None,
) -> tuple[dict, str]:
    """One filter per selected node, via unique selector synthesis."""
    if not selected:
        raise HTTPException(400, "empty selection")
    kinds = kinds or {}
    # ids must resolve against the very tree instance the selectors are
    # generated on; rendering is repeated per access, so render once here
    tree = ctx.session.tree
    nodes = {f"n{i}": node for i, node in enumerate(tree.root.walk())}
    filters = []
    preview = [f"stage {stage_id}:"]
    for node_id in selected:
        node = nodes.get(node_id)
        if node is None:
            raise HTTPException(400, f"unknown node id '{node_id}'")
        kind = kinds.get(node_id, ANY_INTERACTION)
        if kind not in _KINDS:
            raise HTTPException(400, f"unknown action kind '{kind}'")
        try:
            query = vp.generate_unique(tree, node)
        except Exception as exc:
            raise HTTPException(
                422, f"no unique selector for node {node_id} ({node.class_name}): {exc}"
            )
        result = vp.evaluate(query, tree)
        if len(result) != 1 or result[0] is not node:
            raise HTTPException(
                422, f"selector for node {node_id} ({node.class_name}) is not unique"
            )
        printed = vp.print_query(query)
        filters.append({"vpath": printed, "kind": kind})
        preview.append(f"  {kind:14s} {printed}")
    fragment = {"id": stage_id, "filters": filters, "next": list(next_ids or [])}
    return fragment, "\n".join(preview)


def create_app(app_specs: dict[str, AppSpec], workspace: str) -> FastAPI:
    app = FastAPI(title="flowreco service")
    sessions: dict[str, SessionContext] = {}
    reports: dict[str, dict] = {}
    os.makedirs(workspace, exist_ok=True)

    def ctx_or_404(session_id: str) -> SessionContext:
        ctx = sessions.get(session_id)
        if ctx is None:
            raise HTTPException(404, f"unknown session '{session_id}'")
        return ctx

    @app.get("/apps")
    async def list_apps():
        return [
            {
                "app_id": spec.app_id,
                "initial_screen": spec.initial_screen,
                "screens": sorted(spec.screens),
                "api_version": spec.api_version,
            }
            for spec in app_specs.values()
        ]

    @app.post("/sessions")
    async def create_session(body: dict):
        app_id = body.get("app_id")
        spec = app_specs.get(app_id)
        if spec is None:
            raise HTTPException(404, f"unknown app '{app_id}'")
        trackers = []
        for doc in body.get("flows", []):
            for flow in load_flow_file(json.dumps(doc).encode()):
                trackers.append(FlowTracker(flow))
        session_id = f"s-{uuid.uuid4().hex[:8]}"
        data_dir = os.path.join(workspace, "apps", app_id, "data")
        ctx = SessionContext(session_id, AppSession(spec, data_dir), trackers)
        sessions[session_id] = ctx
        return {"session_id": session_id, "frame": ctx.frame()}

    @app.post("/sessions/{session_id}/action")
    async def post_action(session_id: str, body: dict):
        ctx = ctx_or_404(session_id)
        async with ctx.lock:
            if not ctx.session.running:
                raise HTTPException(409, "session has crashed")
            try:
                action = action_from_json(body)
            except (KeyError, ValueError) as exc:
                raise HTTPException(400, f"bad action: {exc}")
            tree = ctx.session.tree
            events = [on_ui_action(t, tree, action) for t in ctx.trackers]
            result = ctx.session.step(action)
            frame = ctx.emit()
        return {
            "tracker_events": [
                {"flow_id": t.flow.flow_id, "event": e.kind, "to_stage": e.to_stage}
                for t, e in zip(ctx.trackers, events)
            ],
            "result": {
                "screen_id": result.screen_id,
                "crashed": result.crashed,
                "crash_reason": result.crash_reason,
            },
            "frame": frame,
        }

    @app.get("/sessions/{session_id}/frame")
    async def get_frame(session_id: str):
        return ctx_or_404(session_id).frame()

    @app.post("/sessions/{session_id}/stage")
    async def post_stage(session_id: str, body: dict):
        ctx = ctx_or_404(session_id)
        async with ctx.lock:
            fragment, preview = generate_stage_from_selection(
                ctx,
                body.get("selected", []),
                body.get("kinds"),
                body.get("stage_id", "stage"),
                body.get("next"),
            )
        return {"stage": fragment, "preview": preview}

    @app.post("/flows")
    async def post_flows(body: dict):
        doc = body.get("flows")
        if doc is None:
            raise HTTPException(400, "missing 'flows'")
        blob = json.dumps(doc, indent=2, sort_keys=True).encode() + b"\n"
        try:
            flows = load_flow_file(blob)
        except ValueError as exc:
            raise HTTPException(422, f"invalid flow file: {exc}")
        if not flows:
            raise HTTPException(422, "flow file contains no flows")
        filename = body.get("filename") or f"{flows[0].flow_id}.json"
        if os.path.basename(filename) != filename:
            raise HTTPException(400, "filename must not contain path separators")
        path = os.path.join(workspace, "flows", filename)
        _atomic_write(path, blob)
        return {"path": path, "flow_ids": [f.flow_id for f in flows]}

    @app.post("/scenarios/run")
    async def run_scenario_endpoint(body: dict):
        doc = body.get("scenario")
        if doc is None:
            raise HTTPException(400, "missing 'scenario'")
        base_dir = body.get("base_dir", os.getcwd())
        try:
            sc = load_scenario(doc, base_dir)
        except (ScenarioError, ValueError) as exc:
            raise HTTPException(422, str(exc))
        outcome = await asyncio.to_thread(run_scenario, sc)
        report_id = f"r-{uuid.uuid4().hex[:8]}"
        doc = {
            "report_id": report_id,
            "passed": outcome.passed,
            "failures": outcome.failures,
            "report": outcome.report.to_json(),
        }
        reports[report_id] = doc
        _atomic_write(
            os.path.join(workspace, "reports", f"{report_id}.json"),
            json.dumps(doc, indent=2, sort_keys=True).encode() + b"\n",
        )
        return doc

    @app.get("/reports/{report_id}")
    async def get_report(report_id: str):
        doc = reports.get(report_id)
        if doc is None:
            raise HTTPException(404, f"unknown report '{report_id}'")
        return doc

    @app.websocket("/sessions/{session_id}/mirror")
    async def mirror(websocket: WebSocket, session_id: str):
        ctx = sessions.get(session_id)
        await websocket.accept()
        if ctx is None:
            await websocket.close(code=4404)
            return
        queue: asyncio.Queue = asyncio.Queue()
        ctx.subscribers.append(queue)
        try:
            await websocket.send_json(ctx.frame())
            recv = asyncio.ensure_future(websocket.receive_text())
            pull = asyncio.ensure_future(queue.get())
            while True:
                done, _ = await asyncio.wait(
                    {recv, pull}, return_when=asyncio.FIRST_COMPLETED
                )
                if recv in done:
                    message = recv.result()  # raises on disconnect
                    if message == "resync":
                        await websocket.send_json(ctx.frame())
                    recv = asyncio.ensure_future(websocket.receive_text())
                if pull in done:
                    await websocket.send_json(pull.result())
                    pull = asyncio.ensure_future(queue.get())
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            for task in (recv, pull):
                task.cancel()
            if queue in ctx.subscribers:
                ctx.subscribers.remove(queue)

    return app
