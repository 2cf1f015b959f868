"""Crash-driven launch routing and compatibility-environment recovery.

The router watches the simulator's crash log. On a crash line it drops a
`.crashed` marker file into the app's data directory and requeues a launch;
the marker is the sole routing criterion, so a marked app always relaunches
into the compatibility environment, whose translation pack bridges the
app's interface version to the host's services. Markers are never cleared
automatically; `clear_marker` is the explicit way back to the host.
"""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field
from typing import Optional

from . import replay as rp
from .flow import FlowTracker, UserFlow, select_replay_tracker
from .simapp import AppSession, AppSpec, CrashPlan, InvokeOutcome
from .ssi import (
    DispatchFault,
    InterfaceDef,
    Reply,
    ServiceRegistry,
    TranslationPack,
    build_transaction,
    save_pack_manifest,
    translate_reply,
    translate_transaction,
)
from .ssi.interfaces import interface_to_json
from .viewtree import semantic_digest

COLD = "Cold"
BOOTING = "Booting"
READY = "Ready"

_CRASH_LINE = re.compile(r"^CRASH (\S+) (\S+) (\d+)$")


class HostEnvironment:
    """The regular execution environment: the host OS's own services."""

    def __init__(self, env_id: str, registry: ServiceRegistry):
        self.env_id = env_id
        self.registry = registry
        self.interface = registry.interface
        self.boot_state = READY

    def invoke(self, api_def, service, method, args) -> InvokeOutcome:
        if api_def is None or api_def.method(service, method) is None:
            return InvokeOutcome(False, fault=f"NoSuchMethod:{service}.{method}")
        txn = build_transaction(api_def, service, method, args)
        result = self.registry.dispatch(txn)
        if isinstance(result, DispatchFault):
            return InvokeOutcome(False, fault=result.reason)
        return InvokeOutcome(True, reply=result)


class CompatEnvironment:
    """An app-execution environment of the app's own interface version,
    bridged to the host's services by a translation pack."""

    def __init__(
        self,
        env_id: str,
        pack: TranslationPack,
        host_registry: ServiceRegistry,
        boot_latency_budget_ms: int = 5000,
    ):
        self.env_id = env_id
        self.pack = pack
        self.interface = pack.from_version
        self.host_registry = host_registry
        self.boot_state = COLD
        self.boot_count = 0
        self.boot_wall_ms: Optional[float] = None
        self.boot_latency_budget_ms = boot_latency_budget_ms

    def boot(self, env_dir: Optional[str] = None):
        if self.boot_state == READY:
            return
        started = time.monotonic()
        self.boot_state = BOOTING
        if env_dir is not None:
            os.makedirs(env_dir, exist_ok=True)
            with open(os.path.join(env_dir, "interface.json"), "w") as fh:
                json.dump(interface_to_json(self.interface), fh, indent=2, sort_keys=True)
            save_pack_manifest(self.pack, os.path.join(env_dir, "pack.json"))
        self.boot_state = READY
        self.boot_count += 1
        self.boot_wall_ms = (time.monotonic() - started) * 1000.0

    def invoke(self, api_def, service, method, args) -> InvokeOutcome:
        # in this environment the app's expected interface exists natively
        if self.interface.method(service, method) is None:
            return InvokeOutcome(False, fault=f"NoSuchMethod:{service}.{method}")
        txn = build_transaction(self.interface, service, method, args)
        result = translate_transaction(self.pack, txn)
        if result.dropped:
            return InvokeOutcome(True, reply=result.local_reply)
        dispatched = self.host_registry.dispatch(result.forward)
        if isinstance(dispatched, DispatchFault):
            # the pack's totality invariant makes this unreachable in practice
            return InvokeOutcome(False, fault=dispatched.reason)
        return InvokeOutcome(True, reply=translate_reply(self.pack, dispatched, txn))


@dataclass(frozen=True)
class CrashDetected:
    app_id: str
    reason: str
    virtual_ms: int


@dataclass(frozen=True)
class LaunchRequest:
    app_id: str


@dataclass
class RoutedLaunch:
    env_id: str
    session: AppSession


@dataclass
class RecoveryReport:
    app_id: str
    env_id: str
    no_intent: bool
    flow_id: Optional[str] = None
    outcome: Optional[rp.ReplayOutcome] = None
    pre_crash_digest: Optional[str] = None
    post_recovery_digest: Optional[str] = None
    transcript: list = field(default_factory=list)
    session: Optional[AppSession] = None

    @property
    def digests_match(self) -> bool:
        return (
            self.pre_crash_digest is not None
            and self.pre_crash_digest == self.post_recovery_digest
        )


class RouterError(RuntimeError):
    pass


class LaunchRouter:
    """Serialized control point for crash detection and launch routing."""

    def __init__(
        self,
        workspace: str,
        apps: dict[str, AppSpec],
        host_env: HostEnvironment,
        compat_env: Optional[CompatEnvironment] = None,
        interface_defs: Optional[dict[str, InterfaceDef]] = None,
    ):
        self.workspace = workspace
        self.apps = apps
        self.host_env = host_env
        self.compat_env = compat_env
        self.interface_defs = dict(interface_defs or {})
        self.pending_launches: list[LaunchRequest] = []
        self.malformed_line_count = 0
        os.makedirs(os.path.join(workspace, "logs"), exist_ok=True)
        for app_id in apps:
            os.makedirs(self.app_data_dir(app_id), exist_ok=True)

    # -- workspace paths

    def app_data_dir(self, app_id: str) -> str:
        return os.path.join(self.workspace, "apps", app_id, "data")

    def marker_path(self, app_id: str) -> str:
        return os.path.join(self.app_data_dir(app_id), ".crashed")

    def has_marker(self, app_id: str) -> bool:
        return os.path.exists(self.marker_path(app_id))

    def clear_marker(self, app_id: str):
        if os.path.exists(self.marker_path(app_id)):
            os.remove(self.marker_path(app_id))

    @property
    def log_path(self) -> str:
        return os.path.join(self.workspace, "logs", "stream.log")

    def ingest_log_line(self, line: str) -> Optional[CrashDetected]:
        """Append to the log stream and run crash monitoring on the line."""
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(line.rstrip("\n") + "\n")
        return self.monitor_log_line(line)

    # -- crash monitoring

    def monitor_log_line(self, line: str) -> Optional[CrashDetected]:
        line = line.strip()
        m = _CRASH_LINE.match(line)
        if m is None:
            if line.startswith("CRASH"):
                self.malformed_line_count += 1
            return None
        app_id, reason, at = m.group(1), m.group(2), int(m.group(3))
        if app_id not in self.apps:
            self.malformed_line_count += 1
            return None
        # touch the marker; idempotent across repeated crash lines
        with open(self.marker_path(app_id), "a"):
            pass
        self.pending_launches.append(LaunchRequest(app_id))
        return CrashDetected(app_id, reason, at)

    # -- launching

    def _api_def(self, spec: AppSpec) -> Optional[InterfaceDef]:
        if spec.api_version is None:
            return None
        return self.interface_defs.get(spec.api_version)

    def handle_launch(
        self, request: LaunchRequest, crash_plan: Optional[CrashPlan] = None
    ) -> RoutedLaunch:
        spec = self.apps.get(request.app_id)
        if spec is None:
            raise RouterError(f"unknown app '{request.app_id}'")
        if self.has_marker(request.app_id):
            if self.compat_env is None:
                raise RouterError("app is marked but no compatibility environment exists")
            if self.compat_env.boot_state != READY:
                env_dir = os.path.join(self.workspace, "envs", self.compat_env.env_id)
                self.compat_env.boot(env_dir)
            env = self.compat_env
        else:
            env = self.host_env
        session = AppSession(
            spec,
            self.app_data_dir(request.app_id),
            environment=env,
            api_def=self._api_def(spec),
            crash_plan=crash_plan,
            log_sink=self.ingest_log_line,
        )
        return RoutedLaunch(env.env_id, session)

    def drain_pending(self) -> list[LaunchRequest]:
        out, self.pending_launches = self.pending_launches, []
        return out

    # -- recovery

    def recover(
        self,
        app_id: str,
        trackers: list[FlowTracker],
        cfg: rp.ReplayConfig = rp.ReplayConfig(),
        pre_crash_digest: Optional[str] = None,
    ) -> RecoveryReport:
        if not self.has_marker(app_id):
            raise RouterError(f"no crash marker for '{app_id}'")
        routed = self.handle_launch(LaunchRequest(app_id))
        session = routed.session
        chosen = select_replay_tracker(trackers)
        if chosen is None:
            return RecoveryReport(
                app_id,
                routed.env_id,
                no_intent=True,
                post_recovery_digest=semantic_digest(session.tree),
                pre_crash_digest=pre_crash_digest,
                session=session,
            )
        transcript: list[rp.TranscriptEntry] = []
        outcome = rp.replay(
            session, list(chosen.flow.replay_prologue), chosen.records, cfg, transcript
        )
        return RecoveryReport(
            app_id,
            routed.env_id,
            no_intent=False,
            flow_id=chosen.flow.flow_id,
            outcome=outcome,
            pre_crash_digest=pre_crash_digest,
            post_recovery_digest=semantic_digest(session.tree),
            transcript=transcript,
            session=session,
        )
