"""Replays recorded UI actions into a relaunched session.

Error contract: a record whose selector matches nothing is retried every
poll interval on the virtual clock until the timeout (2 s by default)
elapses, then the replay aborts; a record matching two or more elements
aborts immediately with no events injected; a session crash mid-replay
aborts with AppCrashed. Failures never raise; the session stays usable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import vpath as vp
from .flow import ActionRecord
from .viewtree import ActionKind, PointerEvent, UIAction

RECOVERED = "Recovered"
ABORTED_TIMEOUT = "AbortedTimeout"
ABORTED_AMBIGUOUS = "AbortedAmbiguous"
APP_CRASHED = "AppCrashed"


@dataclass(frozen=True)
class ReplayConfig:
    element_timeout_ms: int = 2000
    poll_interval_ms: int = 50

    def __post_init__(self):
        if not (self.element_timeout_ms >= self.poll_interval_ms > 0):
            raise ValueError("timeout must be >= poll interval > 0")


@dataclass(frozen=True)
class ReplayOutcome:
    status: str
    failed_index: Optional[int] = None  # index into prologue+records
    played: int = 0


@dataclass
class TranscriptEntry:
    index: int
    vpath: Optional[str]
    kind: str
    resolution: str  # played | timeout | ambiguous | crashed
    matches: int
    waited_ms: int = 0

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "vpath": self.vpath,
            "kind": self.kind,
            "resolution": self.resolution,
            "matches": self.matches,
            "waited_ms": self.waited_ms,
        }


def transcript_lines(transcript: list[TranscriptEntry]) -> str:
    return "".join(json.dumps(e.to_json(), sort_keys=True) + "\n" for e in transcript)


def _materialize(record: ActionRecord, node, clock_ms: int) -> UIAction:
    """Denormalize relative coordinates against the element's current bounds."""
    if record.kind is ActionKind.BACK:
        return UIAction(ActionKind.BACK, (), timestamp=clock_ms)
    b = node.bounds
    events = tuple(
        PointerEvent(b.left + e.x * b.width, b.top + e.y * b.height, e.phase)
        for e in record.relative_pointer_events
    )
    return UIAction(record.kind, events, record.text_payload, clock_ms)


def replay(
    session,
    prologue: list[ActionRecord],
    records: list[ActionRecord],
    cfg: ReplayConfig = ReplayConfig(),
    transcript: Optional[list[TranscriptEntry]] = None,
) -> ReplayOutcome:
    """Play prologue then records, in order, against a fresh session."""
    todo = list(prologue) + list(records)
    for index, record in enumerate(todo):
        printed = None if record.vpath is None else vp.print_query(record.vpath)
        entry = TranscriptEntry(index, printed, record.kind.value, "played", 0)
        if transcript is not None:
            transcript.append(entry)

        if record.kind is ActionKind.BACK:
            node = None
        else:
            node, waited, matches = _await_unique(session, record.vpath, cfg)
            entry.waited_ms = waited
            entry.matches = matches
            if matches != 1:
                entry.resolution = "ambiguous" if matches > 1 else "timeout"
                status = ABORTED_AMBIGUOUS if matches > 1 else ABORTED_TIMEOUT
                return ReplayOutcome(status, failed_index=index, played=index)

        action = _materialize(record, node, session.virtual_clock)
        result = session.step(action)
        if result.crashed:
            entry.resolution = "crashed"
            return ReplayOutcome(APP_CRASHED, failed_index=index, played=index)
    return ReplayOutcome(RECOVERED, played=len(todo))


def _await_unique(session, query, cfg: ReplayConfig):
    """Poll for a unique match on the virtual clock. Returns (node, waited, n)."""
    waited = 0
    while True:
        matches = vp.evaluate(query, session.tree)
        if len(matches) == 1:
            return matches[0], waited, 1
        if len(matches) > 1:
            return None, waited, len(matches)
        if waited >= cfg.element_timeout_ms:
            return None, waited, 0
        session.advance_clock(cfg.poll_interval_ms)
        waited += cfg.poll_interval_ms
