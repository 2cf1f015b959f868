"""Declarative sweep scenarios.

A scenario file names an app spec, flow files, a trace, optionally an
interface pair for the recovery environments, and an `expect` block of
assertions over the resulting confusion matrix. The same runner backs the
CLI and the HTTP service.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

from .flow import UserFlow, load_flow_file
from .replay import ReplayConfig
from .simapp import AppSpec, Trace, load_app_spec, load_trace
from .ssi import InterfaceDef, diff_interfaces, generate_pack, load_interface, load_overrides
from .sweep import SweepReport, crash_sweep_evaluate


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    app: AppSpec
    flows: list[UserFlow]
    trace: Trace
    interval: int = 1
    unit: str = "actions"
    reference_flows: Optional[list[UserFlow]] = None
    host_interface: Optional[InterfaceDef] = None
    compat_interface: Optional[InterfaceDef] = None
    overrides_path: Optional[str] = None
    expect: dict = field(default_factory=dict)


@dataclass
class ScenarioOutcome:
    report: SweepReport
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def _resolve(base_dir: str, path: str) -> str:
    full = path if os.path.isabs(path) else os.path.join(base_dir, path)
    if not os.path.exists(full):
        raise ScenarioError(f"referenced file does not exist: {path}")
    return full


def _load_flows(base_dir: str, paths: list) -> list[UserFlow]:
    flows = []
    for p in paths:
        with open(_resolve(base_dir, p), "rb") as fh:
            flows.extend(load_flow_file(fh.read()))
    return flows


def load_scenario(doc: dict, base_dir: str) -> Scenario:
    try:
        app = load_app_spec(_resolve(base_dir, doc["app"]))
        flows = _load_flows(base_dir, doc["flows"])
        trace = load_trace(_resolve(base_dir, doc["trace"]))
    except KeyError as exc:
        raise ScenarioError(f"scenario is missing required key {exc}")
    sc = Scenario(
        app=app,
        flows=flows,
        trace=trace,
        interval=int(doc.get("interval", 1)),
        unit=doc.get("unit", "actions"),
        expect=dict(doc.get("expect", {})),
    )
    if "reference_flows" in doc:
        sc.reference_flows = _load_flows(base_dir, doc["reference_flows"])
    if "host_interface" in doc:
        sc.host_interface = load_interface(_resolve(base_dir, doc["host_interface"]))
    if "compat_interface" in doc:
        sc.compat_interface = load_interface(_resolve(base_dir, doc["compat_interface"]))
    if "overrides" in doc:
        sc.overrides_path = _resolve(base_dir, doc["overrides"])
    return sc


def load_scenario_file(path: str) -> Scenario:
    with open(path, "rb") as fh:
        doc = json.load(fh)
    # paths inside a scenario resolve against the current working directory,
    # falling back to the scenario file's own directory
    try:
        return load_scenario(doc, os.getcwd())
    except ScenarioError as first:
        try:
            return load_scenario(doc, os.path.dirname(os.path.abspath(path)))
        except ScenarioError:
            raise first


def check_expectations(report: SweepReport, expect: dict) -> list[str]:
    m = report.matrix
    actual = {
        "precision": m.precision,
        "recall": m.recall,
        "tp": m.tp,
        "tn": m.tn,
        "fp": m.fp,
        "fn": m.fn,
    }
    failures = []
    for key, want in expect.items():
        if key == "recall_below":
            if not m.recall < want:
                failures.append(f"expected recall < {want}, got {m.recall:.3f}")
        elif key == "precision_below":
            if not m.precision < want:
                failures.append(f"expected precision < {want}, got {m.precision:.3f}")
        elif key in actual:
            if actual[key] != want:
                failures.append(f"expected {key} == {want}, got {actual[key]}")
        else:
            failures.append(f"unknown expectation '{key}'")
    return failures


def run_scenario(
    sc: Scenario,
    replay_config: ReplayConfig = ReplayConfig(),
    workspace_root: Optional[str] = None,
    jobs: int = 1,
) -> ScenarioOutcome:
    pack = None
    if sc.compat_interface is not None and sc.host_interface is not None:
        overrides = None
        if sc.overrides_path is not None:
            overrides = load_overrides(
                sc.overrides_path, sc.compat_interface, sc.host_interface
            )
        pack = generate_pack(
            diff_interfaces(sc.compat_interface, sc.host_interface),
            sc.compat_interface,
            sc.host_interface,
            overrides,
        )
    report = crash_sweep_evaluate(
        sc.app,
        sc.trace,
        sc.flows,
        interval=sc.interval,
        unit=sc.unit,
        reference_flows=sc.reference_flows,
        host_interface=sc.host_interface,
        compat_interface=sc.compat_interface,
        pack=pack,
        replay_config=replay_config,
        workspace_root=workspace_root,
        jobs=jobs,
    )
    return ScenarioOutcome(report, check_expectations(report, sc.expect))
