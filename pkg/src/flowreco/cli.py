"""Command-line entry points.

One verb per procedure: `run` a declarative scenario, `record` a flow over
a scripted trace, `sweep` crash injections, `diff-interfaces`, `gen-pack`,
`serve` the HTTP service, `clear-marker`, and `report` for pretty-printing
saved reports.

Exit codes: 0 ok, 2 validation or input error, 3 assertion failure.
The workspace root comes from `--workspace`, falling back to the
FLOWRECO_WORKSPACE environment variable, then to a temporary directory.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile

from . import flow as fl
from . import scenario as sn
from . import ssi
from .replay import ReplayConfig
from .simapp import load_app_spec, load_trace
from .sweep import crash_sweep_evaluate

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ASSERTION = 3


class CliError(Exception):
    pass


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_out(path, doc: dict, stdout):
    text = _dump(doc)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _workspace(args) -> str:
    if getattr(args, "workspace", None):
        return args.workspace
    env = os.environ.get("FLOWRECO_WORKSPACE")
    if env:
        return env
    return tempfile.mkdtemp(prefix="flowreco-")


def _load_flows(paths) -> list:
    flows = []
    for p in paths:
        try:
            with open(p, "rb") as fh:
                flows.extend(fl.load_flow_file(fh.read()))
        except OSError as exc:
            raise CliError(f"cannot read flow file {p}: {exc}")
        except fl.FlowValidationError as exc:
            raise CliError(f"invalid flow file {p}: {exc}")
    return flows


# --- subcommands --------------------------------------------------------------


def cmd_run(args, stdout) -> int:
    try:
        sc = sn.load_scenario_file(args.scenario)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load scenario {args.scenario}: {exc}")
    random.seed(args.seed)
    outcome = sn.run_scenario(sc, workspace_root=_workspace(args), jobs=args.jobs)
    doc = {
        "seed": args.seed,
        "scenario": os.path.basename(args.scenario),
        "passed": outcome.passed,
        "failures": outcome.failures,
        "report": outcome.report.to_json(),
    }
    _write_out(args.out, doc, stdout)
    stdout.write(outcome.report.table() + "\n")
    if not outcome.passed:
        for f in outcome.failures:
            stdout.write(f"FAIL: {f}\n")
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_record(args, stdout) -> int:
    try:
        spec = load_app_spec(args.app)
        trace = load_trace(args.trace)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))
    flows = _load_flows(args.flows)
    from .simapp import AppSession

    workspace = _workspace(args)
    session = AppSession(spec, os.path.join(workspace, "apps", spec.app_id, "data"))
    trackers = [fl.FlowTracker(f) for f in flows]
    events = []
    for i, (action, _) in enumerate(trace.actions):
        tree = session.tree
        for t in trackers:
            ev = fl.on_ui_action(t, tree, action)
            events.append({"step": i, "flow_id": t.flow.flow_id, "event": ev.kind})
        session.step(action)
    doc = {
        "app_id": spec.app_id,
        "events": events,
        "trackers": [
            {
                "flow_id": t.flow.flow_id,
                "state": t.state,
                "records": [fl.record_to_json(r) for r in t.records],
            }
            for t in trackers
        ],
    }
    _write_out(args.out, doc, stdout)
    return EXIT_OK


def cmd_sweep(args, stdout) -> int:
    try:
        spec = load_app_spec(args.app)
        trace = load_trace(args.trace)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))
    flows = _load_flows(args.flows)
    reference = _load_flows(args.reference_flows) if args.reference_flows else None
    random.seed(args.seed)
    report = crash_sweep_evaluate(
        spec,
        trace,
        flows,
        interval=args.interval,
        unit=args.unit,
        reference_flows=reference,
        replay_config=ReplayConfig(),
        workspace_root=_workspace(args),
        jobs=args.jobs,
    )
    _write_out(args.out, {"seed": args.seed, "report": report.to_json()}, stdout)
    stdout.write(report.table() + "\n")
    return EXIT_OK


def cmd_diff_interfaces(args, stdout) -> int:
    try:
        from_def = ssi.load_interface(args.from_interface)
        to_def = ssi.load_interface(args.to_interface)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))
    diff = ssi.diff_interfaces(from_def, to_def)
    _write_out(args.out, diff.to_json(), stdout)
    patterns = sorted({p for d in diff.methods for p in (d.patterns or {"Same"})})
    stdout.write(f"patterns present: {', '.join(patterns)}\n")
    return EXIT_OK


def cmd_gen_pack(args, stdout) -> int:
    try:
        from_def = ssi.load_interface(args.from_interface)
        to_def = ssi.load_interface(args.to_interface)
        overrides = None
        if args.overrides:
            overrides = ssi.load_overrides(args.overrides, from_def, to_def)
        pack = ssi.generate_pack(
            ssi.diff_interfaces(from_def, to_def), from_def, to_def, overrides
        )
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))
    _write_out(args.out, pack.manifest(), stdout)
    s = pack.stats
    stdout.write(
        f"translators: {s.total} total, {s.auto_count} automatic, "
        f"{s.template_count} template ({s.auto_fraction:.1%} auto)\n"
    )
    return EXIT_OK


def cmd_serve(args, stdout) -> int:
    import uvicorn

    from .service import create_app

    specs = {}
    for name in sorted(os.listdir(args.apps_dir)):
        if name.endswith(".json"):
            spec = load_app_spec(os.path.join(args.apps_dir, name))
            specs[spec.app_id] = spec
    if not specs:
        raise CliError(f"no app specs found in {args.apps_dir}")
    app = create_app(specs, _workspace(args))
    stdout.write(f"serving {len(specs)} apps on {args.host}:{args.port}\n")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_clear_marker(args, stdout) -> int:
    workspace = _workspace(args)
    marker = os.path.join(workspace, "apps", args.app_id, "data", ".crashed")
    if os.path.exists(marker):
        os.remove(marker)
        stdout.write(f"cleared marker for {args.app_id}\n")
    else:
        stdout.write(f"no marker for {args.app_id}\n")
    return EXIT_OK


def cmd_report(args, stdout) -> int:
    try:
        with open(args.path, "rb") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read report {args.path}: {exc}")
    body = doc.get("report", doc)
    m = body.get("matrix")
    if m is None:
        raise CliError(f"{args.path} does not look like a sweep report")
    stdout.write(f"app: {body.get('app_id')}\n")
    stdout.write(f"  tp={m['tp']}  tn={m['tn']}  fp={m['fp']}  fn={m['fn']}\n")
    stdout.write(
        f"  precision={body['precision']:.3f}  recall={body['recall']:.3f}\n"
    )
    if "passed" in doc:
        stdout.write(f"  passed: {doc['passed']}\n")
        for f in doc.get("failures", []):
            stdout.write(f"  FAIL: {f}\n")
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowreco")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--workspace", help="workspace root (default: $FLOWRECO_WORKSPACE)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("run", help="run a declarative sweep scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("record", help="track flows over a scripted trace")
    p.add_argument("--app", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--flows", nargs="+", required=True)
    common(p, seed=False)
    p.set_defaults(fn=cmd_record)

    p = sub.add_parser("sweep", help="crash-sweep a trace against flows")
    p.add_argument("--app", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--flows", nargs="+", required=True)
    p.add_argument("--reference-flows", nargs="+")
    p.add_argument("--interval", type=int, default=1)
    p.add_argument("--unit", choices=["actions", "ms"], default="actions")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("diff-interfaces", help="classify interface version differences")
    p.add_argument("from_interface")
    p.add_argument("to_interface")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_diff_interfaces)

    p = sub.add_parser("gen-pack", help="generate a translation pack manifest")
    p.add_argument("from_interface")
    p.add_argument("to_interface")
    p.add_argument("--overrides")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen_pack)

    p = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    p.add_argument("--apps-dir", default="fixtures/apps")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8030)
    p.add_argument("--workspace")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("clear-marker", help="remove an app's crash marker")
    p.add_argument("app_id")
    p.add_argument("--workspace")
    p.set_defaults(fn=cmd_clear_marker)

    p = sub.add_parser("report", help="pretty-print a saved report")
    p.add_argument("path")
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, stdout)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
