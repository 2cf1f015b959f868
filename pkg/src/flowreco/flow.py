"""Stage-graph user flows and the run-time tracker.

A user flow is a directed graph of stages; each stage is a set of UI-action
filters. The tracker compares every live UI action against the current
stage's filters and its successors', records matching actions, and clears
everything the moment a non-matching action occurs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from . import vpath as vp
from .viewtree import (
    ANY_INTERACTION,
    ActionKind,
    Phase,
    PointerEvent,
    UIAction,
    ViewNode,
    ViewTree,
    hit_test,
)

FilterKind = str  # an ActionKind value or ANY_INTERACTION


@dataclass(frozen=True)
class UIActionFilter:
    vpath: vp.VPathQuery
    kind: FilterKind = ANY_INTERACTION

    def kind_matches(self, action_kind: ActionKind) -> bool:
        if self.kind == ANY_INTERACTION:
            return action_kind is not ActionKind.BACK
        return self.kind == action_kind.value


@dataclass(frozen=True)
class Stage:
    id: str
    filters: tuple[UIActionFilter, ...]
    next_stage_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class RelativeEvent:
    x: float  # fraction of element width, in [0, 1]
    y: float  # fraction of element height, in [0, 1]
    phase: Phase


@dataclass(frozen=True)
class ActionRecord:
    vpath: Optional[vp.VPathQuery]  # None only for Back
    kind: ActionKind
    relative_pointer_events: tuple[RelativeEvent, ...] = ()
    text_payload: Optional[str] = None
    recorded_at: int = 0


@dataclass(frozen=True)
class UserFlow:
    flow_id: str
    stages: dict[str, Stage]
    starting_stage_id: str
    replay_prologue: tuple[ActionRecord, ...] = ()


class FlowValidationError(ValueError):
    pass


def validate_flow(flow: UserFlow) -> None:
    if flow.starting_stage_id not in flow.stages:
        raise FlowValidationError(
            f"flow {flow.flow_id}: starting stage '{flow.starting_stage_id}' not defined"
        )
    for stage in flow.stages.values():
        if not stage.filters:
            raise FlowValidationError(
                f"flow {flow.flow_id}: stage '{stage.id}' has no filters"
            )
        for nxt in stage.next_stage_ids:
            if nxt not in flow.stages:
                raise FlowValidationError(
                    f"flow {flow.flow_id}: stage '{stage.id}' references unknown stage '{nxt}'"
                )


# --- recording ----------------------------------------------------------------


class RecordRejected(ValueError):
    """A pointer event fell outside the matched element's bounds."""


def record_from(action: UIAction, tree: ViewTree, matched_node: Optional[ViewNode]) -> ActionRecord:
    if action.kind is ActionKind.BACK:
        return ActionRecord(None, ActionKind.BACK, (), None, action.timestamp)
    assert matched_node is not None
    b = matched_node.bounds
    rel = []
    for ev in action.pointer_events:
        rx = (ev.x - b.left) / b.width if b.width else 0.0
        ry = (ev.y - b.top) / b.height if b.height else 0.0
        if not (0.0 <= rx <= 1.0 and 0.0 <= ry <= 1.0):
            raise RecordRejected(
                f"pointer event ({ev.x}, {ev.y}) outside element bounds {b}"
            )
        rel.append(RelativeEvent(rx, ry, ev.phase))
    return ActionRecord(
        vpath=vp.generate_unique(tree, matched_node),
        kind=action.kind,
        relative_pointer_events=tuple(rel),
        text_payload=action.text_payload,
        recorded_at=action.timestamp,
    )


# --- tracking -----------------------------------------------------------------

IDLE = "Idle"
TRACKING = "Tracking"


@dataclass(frozen=True)
class TrackerEvent:
    kind: str  # Started | Held | Advanced | Terminated | StayedIdle
    to_stage: Optional[str] = None


STARTED = TrackerEvent("Started")
HELD = TrackerEvent("Held")
TERMINATED = TrackerEvent("Terminated")
STAYED_IDLE = TrackerEvent("StayedIdle")


def advanced(stage_id: str) -> TrackerEvent:
    return TrackerEvent("Advanced", stage_id)


@dataclass
class FlowTracker:
    flow: UserFlow
    state: str = IDLE
    current_stage_id: Optional[str] = None
    records: list[ActionRecord] = field(default_factory=list)
    last_match_at: int = -1

    @property
    def tracking(self) -> bool:
        return self.state == TRACKING

    def reset(self):
        self.state = IDLE
        self.current_stage_id = None
        self.records = []

    def snapshot(self) -> "FlowTracker":
        snap = FlowTracker(self.flow, self.state, self.current_stage_id)
        snap.records = list(self.records)
        snap.last_match_at = self.last_match_at
        return snap


def match_stage(
    stage: Stage, tree: ViewTree, action: UIAction
) -> Optional[ActionRecord]:
    """First filter of the stage the action satisfies, as a ready record.

    Back matches only a filter explicitly carrying kind Back (it has no
    target element). For pointer actions the hit-tested node must be among
    the filter's VPath matches and contain every raw event.
    """
    target = None
    if action.kind is not ActionKind.BACK:
        anchor = action.anchor
        if anchor is None:
            return None
        target = hit_test(tree, *anchor)
    for f in stage.filters:
        if not f.kind_matches(action.kind):
            continue
        if action.kind is ActionKind.BACK:
            return record_from(action, tree, None)
        if not any(m is target for m in vp.evaluate(f.vpath, tree)):
            continue
        try:
            return record_from(action, tree, target)
        except RecordRejected:
            continue
    return None


def on_ui_action(tracker: FlowTracker, tree: ViewTree, action: UIAction) -> TrackerEvent:
    flow = tracker.flow
    if tracker.state == IDLE:
        rec = match_stage(flow.stages[flow.starting_stage_id], tree, action)
        if rec is None:
            return STAYED_IDLE
        tracker.state = TRACKING
        tracker.current_stage_id = flow.starting_stage_id
        tracker.records = [rec]
        tracker.last_match_at = action.timestamp
        return STARTED

    current = flow.stages[tracker.current_stage_id]
    rec = match_stage(current, tree, action)
    if rec is not None:  # self-match beats advancing
        tracker.records.append(rec)
        tracker.last_match_at = action.timestamp
        return HELD
    for nxt in current.next_stage_ids:
        rec = match_stage(flow.stages[nxt], tree, action)
        if rec is not None:
            tracker.current_stage_id = nxt
            tracker.records.append(rec)
            tracker.last_match_at = action.timestamp
            return advanced(nxt)
    tracker.reset()
    return TERMINATED


def select_replay_tracker(trackers: list[FlowTracker]) -> Optional[FlowTracker]:
    """The tracker whose flow is replayed after a crash.

    Latest match wins; ties fall back to registration order.
    """
    tracking = [t for t in trackers if t.tracking]
    if not tracking:
        return None
    return max(tracking, key=lambda t: t.last_match_at)  # max is stable: first wins ties


# --- flow files ---------------------------------------------------------------


def record_to_json(rec: ActionRecord) -> dict:
    return {
        "vpath": None if rec.vpath is None else vp.print_query(rec.vpath),
        "kind": rec.kind.value,
        "events": [[e.x, e.y, e.phase.value] for e in rec.relative_pointer_events],
        "text": rec.text_payload,
        "at": rec.recorded_at,
    }


def record_from_json(doc: dict) -> ActionRecord:
    return ActionRecord(
        vpath=None if doc.get("vpath") is None else vp.parse(doc["vpath"]),
        kind=ActionKind(doc["kind"]),
        relative_pointer_events=tuple(
            RelativeEvent(x, y, Phase(p)) for x, y, p in doc.get("events", [])
        ),
        text_payload=doc.get("text"),
        recorded_at=int(doc.get("at", 0)),
    )


def flow_to_json(flow: UserFlow) -> dict:
    return {
        "flow_id": flow.flow_id,
        "stages": [
            {
                "id": s.id,
                "filters": [
                    {"vpath": vp.print_query(f.vpath), "kind": f.kind} for f in s.filters
                ],
                "next": list(s.next_stage_ids),
            }
            for s in flow.stages.values()
        ],
        "starting": flow.starting_stage_id,
        "prologue": [record_to_json(r) for r in flow.replay_prologue],
    }


def flow_from_json(doc: dict) -> UserFlow:
    flow_id = doc.get("flow_id", "<unnamed>")
    stages: dict[str, Stage] = {}
    for sdoc in doc.get("stages", []):
        filters = []
        for fdoc in sdoc.get("filters", []):
            kind = fdoc.get("kind", ANY_INTERACTION)
            if kind != ANY_INTERACTION:
                kind = ActionKind(kind).value
            try:
                query = vp.parse(fdoc["vpath"])
            except vp.VPathSyntaxError as exc:
                raise FlowValidationError(
                    f"flow {flow_id}, stage {sdoc.get('id')}: bad vpath: {exc}"
                ) from exc
            filters.append(UIActionFilter(query, kind))
        if sdoc["id"] in stages:
            raise FlowValidationError(f"flow {flow_id}: duplicate stage '{sdoc['id']}'")
        stages[sdoc["id"]] = Stage(sdoc["id"], tuple(filters), tuple(sdoc.get("next", [])))
    flow = UserFlow(
        flow_id=flow_id,
        stages=stages,
        starting_stage_id=doc.get("starting", ""),
        replay_prologue=tuple(record_from_json(r) for r in doc.get("prologue", [])),
    )
    validate_flow(flow)
    return flow


def load_flow_file(document: bytes) -> list[UserFlow]:
    """Parse and validate a flow file: one flow object, or a list of them."""
    text = document.decode("utf-8").strip()
    if not text:
        return []
    doc = json.loads(text)
    if isinstance(doc, dict):
        docs = [doc]
    elif isinstance(doc, list):
        docs = doc
    else:
        raise FlowValidationError("flow file must be a JSON object or list")
    flows = []
    seen = set()
    for fdoc in docs:
        flow = flow_from_json(fdoc)
        if flow.flow_id in seen:
            raise FlowValidationError(f"duplicate flow_id '{flow.flow_id}'")
        seen.add(flow.flow_id)
        flows.append(flow)
    return flows
