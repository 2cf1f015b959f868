"""Deterministic simulated app runtime.

An app is declarative: screens are view-tree templates whose text fields may
interpolate `${key}` from the app's persistent state store, and transitions
are (screen, selector, action kind) rules with state mutations, an optional
screen change, and optional bound system-service calls. Everything runs on a
virtual clock, so tests and sweeps are fast and reproducible.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from . import vpath as vp
from .viewtree import (
    ANY_INTERACTION,
    ActionKind,
    Phase,
    PointerEvent,
    UIAction,
    ViewTree,
    hit_test,
    node_from_json,
    tree_from_json,
    tree_to_json,
    validate_tree,
)

CLOCK_TICK_MS = 100  # virtual time consumed by one UI action

_PLACEHOLDER = re.compile(r"\$\{([A-Za-z0-9_]+)\}")


class AppSpecError(ValueError):
    pass


@dataclass(frozen=True)
class StateMutation:
    # literal assignments, key-to-key copies, or copy the action's text payload
    sets: dict[str, str] = field(default_factory=dict)
    copy_from: dict[str, str] = field(default_factory=dict)  # dest -> source key
    set_from_text: Optional[str] = None


@dataclass(frozen=True)
class TransitionRule:
    id: str
    screen: str
    selector: Optional[vp.VPathQuery]  # None only for Back rules
    kind: str  # ActionKind value or ANY_INTERACTION
    effects: tuple[StateMutation, ...] = ()
    goto: Optional[str] = None  # None = stay

    def kind_matches(self, action_kind: ActionKind) -> bool:
        if self.kind == ANY_INTERACTION:
            return action_kind is not ActionKind.BACK
        return self.kind == action_kind.value


@dataclass(frozen=True)
class ApiBinding:
    rule: str
    service: str
    method: str
    args: tuple = ()


@dataclass(frozen=True)
class AppSpec:
    app_id: str
    screens: dict[str, dict]  # screen_id -> tree template (JSON form)
    transitions: tuple[TransitionRule, ...]
    initial_screen: str
    api_calls: tuple[ApiBinding, ...] = ()
    api_version: Optional[str] = None

    def rules_for(self, screen_id: str) -> list[TransitionRule]:
        return [r for r in self.transitions if r.screen == screen_id]

    def bindings_for(self, rule_id: str) -> list[ApiBinding]:
        return [b for b in self.api_calls if b.rule == rule_id]


def app_spec_from_json(doc: dict) -> AppSpec:
    transitions = []
    for rdoc in doc.get("transitions", []):
        selector = rdoc.get("selector")
        kind = rdoc.get("kind", ANY_INTERACTION)
        if kind == ActionKind.BACK.value:
            if selector is not None:
                raise AppSpecError(f"rule {rdoc['id']}: Back rules take no selector")
        elif selector is None:
            raise AppSpecError(f"rule {rdoc['id']}: selector required")
        effects = []
        for edoc in rdoc.get("effects", []):
            effects.append(
                StateMutation(
                    sets=dict(edoc.get("set", {})),
                    copy_from=dict(edoc.get("copy", {})),
                    set_from_text=edoc.get("set_from_text"),
                )
            )
        transitions.append(
            TransitionRule(
                id=rdoc["id"],
                screen=rdoc["screen"],
                selector=None if selector is None else vp.parse(selector),
                kind=kind,
                effects=tuple(effects),
                goto=rdoc.get("goto"),
            )
        )
    spec = AppSpec(
        app_id=doc["app_id"],
        screens=dict(doc["screens"]),
        transitions=tuple(transitions),
        initial_screen=doc["initial_screen"],
        api_calls=tuple(
            ApiBinding(b["rule"], b["service"], b["method"], tuple(b.get("args", ())))
            for b in doc.get("api_calls", [])
        ),
        api_version=doc.get("api_version"),
    )
    validate_app_spec(spec)
    return spec


def load_app_spec(path) -> AppSpec:
    with open(path, "rb") as fh:
        return app_spec_from_json(json.load(fh))


def validate_app_spec(spec: AppSpec) -> None:
    if spec.initial_screen not in spec.screens:
        raise AppSpecError(f"initial screen '{spec.initial_screen}' not defined")
    rule_ids = set()
    for rule in spec.transitions:
        if rule.id in rule_ids:
            raise AppSpecError(f"duplicate rule id '{rule.id}'")
        rule_ids.add(rule.id)
        if rule.screen not in spec.screens:
            raise AppSpecError(f"rule {rule.id}: unknown screen '{rule.screen}'")
        if rule.goto is not None and rule.goto not in spec.screens:
            raise AppSpecError(f"rule {rule.id}: unknown goto '{rule.goto}'")
        if rule.selector is not None:
            tree = render_screen(spec, rule.screen, {})
            if len(vp.evaluate(rule.selector, tree)) != 1:
                raise AppSpecError(
                    f"rule {rule.id}: selector does not resolve uniquely on '{rule.screen}'"
                )
    for binding in spec.api_calls:
        if binding.rule not in rule_ids:
            raise AppSpecError(f"api call references unknown rule '{binding.rule}'")


def render_screen(spec: AppSpec, screen_id: str, state: dict[str, str]) -> ViewTree:
    """Instantiate a screen template, substituting ${key} in text fields."""

    def subst(doc):
        out = dict(doc)
        if isinstance(out.get("text"), str):
            out["text"] = _PLACEHOLDER.sub(
                lambda m: str(state.get(m.group(1), "")), out["text"]
            )
        out["children"] = [subst(c) for c in doc.get("children", [])]
        return out

    template = spec.screens[screen_id]
    doc = dict(template)
    doc["root"] = subst(template["root"])
    doc["screen_id"] = screen_id
    tree = tree_from_json(doc, validate=False)
    validate_tree(tree)
    return tree


# --- crash plans --------------------------------------------------------------


@dataclass(frozen=True)
class CrashPlan:
    mode: str  # AfterNActions | AtVirtualTime | OnApiMismatch
    n: Optional[int] = None
    t_ms: Optional[int] = None

    @staticmethod
    def after_actions(n: int) -> "CrashPlan":
        return CrashPlan("AfterNActions", n=n)

    @staticmethod
    def at_virtual_time(t_ms: int) -> "CrashPlan":
        return CrashPlan("AtVirtualTime", t_ms=t_ms)

    @staticmethod
    def on_api_mismatch() -> "CrashPlan":
        return CrashPlan("OnApiMismatch")


# --- environments -------------------------------------------------------------


@dataclass(frozen=True)
class InvokeOutcome:
    ok: bool
    fault: Optional[str] = None
    reply: Optional[object] = None


class NullApiEnvironment:
    """Hosts no services at all; every bound call faults."""

    def invoke(self, api_def, service, method, args) -> InvokeOutcome:
        return InvokeOutcome(False, fault=f"NoSuchService:{service}")


# --- sessions -----------------------------------------------------------------

RUNNING = "Running"
CRASHED = "Crashed"


@dataclass
class StepResult:
    screen_id: str
    calls: list[tuple[str, str]] = field(default_factory=list)
    crashed: bool = False
    crash_reason: Optional[str] = None


class SessionError(RuntimeError):
    pass


class AppSession:
    """One run of an app. State persists in `data_dir` across sessions."""

    def __init__(
        self,
        spec: AppSpec,
        data_dir: str,
        environment=None,
        api_def=None,
        crash_plan: Optional[CrashPlan] = None,
        log_sink: Optional[Callable[[str], None]] = None,
    ):
        self.spec = spec
        self.data_dir = data_dir
        self.environment = environment or NullApiEnvironment()
        self.api_def = api_def
        self.crash_plan = crash_plan
        self.log_sink = log_sink
        self.current_screen = spec.initial_screen
        self.virtual_clock = 0
        self.actions_performed = 0
        self.status = RUNNING
        self.crash_reason: Optional[str] = None
        os.makedirs(data_dir, exist_ok=True)
        self.state = self._load_state()

    # -- state store

    @property
    def state_path(self) -> str:
        return os.path.join(self.data_dir, "state.json")

    def _load_state(self) -> dict[str, str]:
        if os.path.exists(self.state_path):
            with open(self.state_path, "rb") as fh:
                return json.load(fh)
        return {}

    def _persist_state(self):
        tmp = self.state_path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(self.state, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, self.state_path)

    # -- clocks & views

    @property
    def running(self) -> bool:
        return self.status == RUNNING

    @property
    def tree(self) -> ViewTree:
        return render_screen(self.spec, self.current_screen, self.state)

    def advance_clock(self, ms: int):
        self.virtual_clock += ms

    def _crash(self, reason: str):
        self.status = CRASHED
        self.crash_reason = reason
        if self.log_sink is not None:
            # the log format carries the reason as a single token
            token = re.sub(r"\s+", "_", reason.strip()) or "Unknown"
            self.log_sink(f"CRASH {self.spec.app_id} {token} {self.virtual_clock}")

    def crash_now(self, reason: str = "Injected"):
        """External crash injection (the sweep's scalpel)."""
        self._crash(reason)

    # -- stepping

    def _find_rule(self, action: UIAction) -> Optional[TransitionRule]:
        tree = self.tree
        rules = self.spec.rules_for(self.current_screen)
        if action.kind is ActionKind.BACK:
            hits = [r for r in rules if r.kind == ActionKind.BACK.value]
        else:
            anchor = action.anchor
            if anchor is None:
                return None
            target = hit_test(tree, *anchor)
            hits = [
                r
                for r in rules
                if r.selector is not None
                and r.kind_matches(action.kind)
                and any(m is target for m in vp.evaluate(r.selector, tree))
            ]
        if len(hits) > 1:
            raise AppSpecError(
                f"ambiguous transition rules on '{self.current_screen}': "
                + ", ".join(r.id for r in hits)
            )
        return hits[0] if hits else None

    def step(self, action: UIAction) -> StepResult:
        if not self.running:
            raise SessionError(f"session is {self.status}: {self.crash_reason}")
        self.advance_clock(CLOCK_TICK_MS)
        self.actions_performed += 1

        plan = self.crash_plan
        if plan is not None:
            if plan.mode == "AfterNActions" and self.actions_performed >= plan.n:
                self._crash("Injected")
                return StepResult(self.current_screen, crashed=True, crash_reason="Injected")
            if plan.mode == "AtVirtualTime" and self.virtual_clock >= plan.t_ms:
                self._crash("Injected")
                return StepResult(self.current_screen, crashed=True, crash_reason="Injected")

        rule = self._find_rule(action)
        if rule is None:
            return StepResult(self.current_screen)

        mutated = False
        for eff in rule.effects:
            for key, value in eff.sets.items():
                self.state[key] = value
                mutated = True
            for dest, src in eff.copy_from.items():
                self.state[dest] = self.state.get(src, "")
                mutated = True
            if eff.set_from_text is not None and action.text_payload is not None:
                self.state[eff.set_from_text] = action.text_payload
                mutated = True
        if mutated:
            self._persist_state()

        calls = []
        for binding in self.spec.bindings_for(rule.id):
            calls.append((binding.service, binding.method))
            outcome = self.environment.invoke(
                self.api_def, binding.service, binding.method, list(binding.args)
            )
            if not outcome.ok:
                self._crash(outcome.fault or "ApiFault")
                return StepResult(
                    self.current_screen,
                    calls=calls,
                    crashed=True,
                    crash_reason=self.crash_reason,
                )

        if rule.goto is not None:
            self.current_screen = rule.goto
        return StepResult(self.current_screen, calls=calls)


# --- traces -------------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    app_id: str
    actions: tuple[tuple[UIAction, str], ...]  # (action, screen it occurred on)


def action_to_json(action: UIAction) -> dict:
    return {
        "kind": action.kind.value,
        "events": [[e.x, e.y, e.phase.value] for e in action.pointer_events],
        "text": action.text_payload,
        "at": action.timestamp,
    }


def action_from_json(doc: dict) -> UIAction:
    return UIAction(
        kind=ActionKind(doc["kind"]),
        pointer_events=tuple(
            PointerEvent(x, y, Phase(p)) for x, y, p in doc.get("events", [])
        ),
        text_payload=doc.get("text"),
        timestamp=int(doc.get("at", 0)),
    )


def trace_to_json(trace: Trace) -> dict:
    return {
        "app_id": trace.app_id,
        "actions": [
            dict(action_to_json(a), screen=screen) for a, screen in trace.actions
        ],
    }


def trace_from_json(doc: dict) -> Trace:
    return Trace(
        app_id=doc["app_id"],
        actions=tuple(
            (action_from_json(a), a.get("screen", "")) for a in doc["actions"]
        ),
    )


def load_trace(path) -> Trace:
    with open(path, "rb") as fh:
        return trace_from_json(json.load(fh))


class TraceError(ValueError):
    pass


def check_replayable(spec: AppSpec, trace: Trace, data_dir: str) -> None:
    """A trace is replayable when stepping the spec reproduces its screens."""
    session = AppSession(spec, data_dir)
    for i, (action, screen) in enumerate(trace.actions):
        if screen and session.current_screen != screen:
            raise TraceError(
                f"action {i}: trace expects screen '{screen}', "
                f"session is on '{session.current_screen}'"
            )
        session.step(action)
