"""Crash-sweep evaluation: inject a crash at every offset of a trace, drive
the full recovery pipeline, and classify each outcome into a confusion
matrix with precision and recall.

Classification per injection point:

    TP  tracker was Tracking and the post-recovery screen digest equals the
        pre-crash digest
    TN  tracker was Idle (correctly) and no replay was attempted
    FP  a replay ran while tracking should have been Idle, or the digests
        mismatch after a replay
    FN  tracking should have been active per the (reference) flow
        definition but no recovery started

"Should have been" comes from `reference_flows`: ground-truth flows run
alongside the flows under test, defaulting to the flows themselves. This is
how an accidentally incomplete flow shows up as recall < 1.
"""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .compat import CompatEnvironment, HostEnvironment, LaunchRequest, LaunchRouter
from .flow import FlowTracker, UserFlow, on_ui_action
from .replay import ReplayConfig
from .simapp import CLOCK_TICK_MS, AppSpec, Trace, check_replayable
from .ssi import (
    InterfaceDef,
    ServiceRegistry,
    TranslationPack,
    diff_interfaces,
    generate_pack,
)
from .viewtree import semantic_digest

_NULL_INTERFACE = InterfaceDef("null", {}, {})


@dataclass
class ConfusionMatrix:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if (self.tp + self.fp) else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if (self.tp + self.fn) else 1.0

    @property
    def precision_flagged(self) -> bool:
        """True when precision is the degenerate 1.0 of an empty denominator."""
        return (self.tp + self.fp) == 0

    @property
    def recall_flagged(self) -> bool:
        return (self.tp + self.fn) == 0


@dataclass
class SweepPoint:
    offset: int  # actions performed before the crash
    classification: str  # tp | tn | fp | fn
    tracking: bool
    expected_tracking: bool
    flow_id: Optional[str]
    replay_status: Optional[str]
    played: int
    pre_crash_digest: str
    post_recovery_digest: Optional[str]
    transcript: list = field(default_factory=list)


@dataclass
class SweepReport:
    app_id: str
    matrix: ConfusionMatrix
    points: list[SweepPoint]

    def to_json(self) -> dict:
        m = self.matrix
        return {
            "app_id": self.app_id,
            "matrix": {"tp": m.tp, "tn": m.tn, "fp": m.fp, "fn": m.fn},
            "precision": m.precision,
            "precision_flagged": m.precision_flagged,
            "recall": m.recall,
            "recall_flagged": m.recall_flagged,
            "points": [
                {
                    "offset": p.offset,
                    "classification": p.classification,
                    "tracking": p.tracking,
                    "expected_tracking": p.expected_tracking,
                    "flow_id": p.flow_id,
                    "replay_status": p.replay_status,
                    "played": p.played,
                }
                for p in self.points
            ],
        }

    def table(self) -> str:
        m = self.matrix
        lines = [
            f"crash sweep: {self.app_id} ({len(self.points)} injection points)",
            f"  tp={m.tp}  tn={m.tn}  fp={m.fp}  fn={m.fn}",
            f"  precision={m.precision:.3f}{'*' if m.precision_flagged else ''}"
            f"  recall={m.recall:.3f}{'*' if m.recall_flagged else ''}",
        ]
        if m.precision_flagged or m.recall_flagged:
            lines.append("  (* degenerate: empty denominator reported as 1.0)")
        return "\n".join(lines)


def _injection_offsets(n_actions: int, interval: int, unit: str) -> list[int]:
    if n_actions == 0:
        return []
    if unit == "actions":
        return list(range(interval, n_actions + 1, interval))
    # virtual-ms interval: offsets where the session clock crosses multiples
    offsets = []
    t = interval
    while t <= n_actions * CLOCK_TICK_MS:
        offsets.append(min(n_actions, -(-t // CLOCK_TICK_MS)))
        t += interval
    return sorted(set(offsets))


def crash_sweep_evaluate(
    app: AppSpec,
    trace: Trace,
    flows: list[UserFlow],
    interval: int = 1,
    unit: str = "actions",
    reference_flows: Optional[list[UserFlow]] = None,
    host_interface: Optional[InterfaceDef] = None,
    compat_interface: Optional[InterfaceDef] = None,
    pack: Optional[TranslationPack] = None,
    replay_config: ReplayConfig = ReplayConfig(),
    workspace_root: Optional[str] = None,
    jobs: int = 1,
) -> SweepReport:
    host_interface = host_interface or _NULL_INTERFACE
    compat_interface = compat_interface or host_interface
    reference_flows = flows if reference_flows is None else reference_flows

    with tempfile.TemporaryDirectory() as scratch:
        check_replayable(app, trace, os.path.join(scratch, "probe"))

    if pack is None:
        pack = generate_pack(
            diff_interfaces(compat_interface, host_interface),
            compat_interface,
            host_interface,
        )

    owned_root = None
    if workspace_root is None:
        owned_root = tempfile.TemporaryDirectory()
        workspace_root = owned_root.name

    matrix = ConfusionMatrix()
    try:
        offsets = _injection_offsets(len(trace.actions), interval, unit)

        def evaluate(offset: int) -> SweepPoint:
            return _evaluate_point(
                app,
                trace,
                flows,
                reference_flows,
                offset,
                host_interface,
                pack,
                replay_config,
                os.path.join(workspace_root, f"point_{offset:04d}"),
            )

        if jobs > 1 and len(offsets) > 1:
            # injection points are independent (one workspace each)
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                points = list(pool.map(evaluate, offsets))
        else:
            points = [evaluate(offset) for offset in offsets]
        for point in points:
            setattr(matrix, point.classification, getattr(matrix, point.classification) + 1)
    finally:
        if owned_root is not None:
            owned_root.cleanup()
    return SweepReport(app.app_id, matrix, points)


def _evaluate_point(
    app: AppSpec,
    trace: Trace,
    flows,
    reference_flows,
    offset: int,
    host_interface: InterfaceDef,
    pack: TranslationPack,
    replay_config: ReplayConfig,
    workspace: str,
) -> SweepPoint:
    host_env = HostEnvironment("host", ServiceRegistry(host_interface))
    compat_env = CompatEnvironment("compat", pack, ServiceRegistry(host_interface))
    interface_defs = {
        host_interface.version_id: host_interface,
        pack.from_version.version_id: pack.from_version,
    }
    router = LaunchRouter(workspace, {app.app_id: app}, host_env, compat_env, interface_defs)
    session = router.handle_launch(LaunchRequest(app.app_id)).session

    trackers = [FlowTracker(f) for f in flows]
    reference = [FlowTracker(f) for f in reference_flows]
    for action, _ in trace.actions[:offset]:
        tree = session.tree
        for t in trackers:
            on_ui_action(t, tree, action)
        for t in reference:
            on_ui_action(t, tree, action)
        result = session.step(action)
        assert not result.crashed, "sweep traces must be crash-free on the host"

    pre_digest = semantic_digest(session.tree)
    tracking = any(t.tracking for t in trackers)
    expected = any(t.tracking for t in reference)
    snaps = [t.snapshot() for t in trackers]
    session.crash_now("Injected")

    report = router.recover(
        app.app_id, snaps, replay_config, pre_crash_digest=pre_digest
    )

    if expected and tracking:
        recovered = report.outcome is not None and report.outcome.status == "Recovered"
        cls = "tp" if recovered and report.digests_match else "fp"
    elif expected:
        cls = "fn"
    elif tracking:
        cls = "fp"  # a replay ran although the intent tracker should be idle
    else:
        cls = "tn"

    return SweepPoint(
        offset=offset,
        classification=cls,
        tracking=tracking,
        expected_tracking=expected,
        flow_id=report.flow_id,
        replay_status=None if report.outcome is None else report.outcome.status,
        played=0 if report.outcome is None else report.outcome.played,
        pre_crash_digest=pre_digest,
        post_recovery_digest=report.post_recovery_digest,
        transcript=report.transcript,
    )
