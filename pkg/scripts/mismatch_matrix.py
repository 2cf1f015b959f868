"""Exercise the crash-recovery matrix over the API-mismatch fixture apps.

For each app the script runs it on the old-version host (expected to
crash), confirms the crash marker routes the relaunch into the
compatibility environment, replays the tracked intent there, and compares
the recovered screen digest against a crash-free run on a native
new-version host.

Usage: python3 scripts/mismatch_matrix.py
"""

import os
import sys
import tempfile

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.join(ROOT, "src"))

from flowreco import flow as fl  # noqa: E402
from flowreco import ssi  # noqa: E402
from flowreco.compat import (  # noqa: E402
    CompatEnvironment,
    HostEnvironment,
    LaunchRequest,
    LaunchRouter,
)
from flowreco.simapp import AppSession, load_app_spec  # noqa: E402
from flowreco.viewtree import semantic_digest, tap  # noqa: E402

FIXTURES = os.path.join(ROOT, "fixtures")

APPS = {
    "app_missing_service": ("app_missing_service_go.json", [tap(60, 25)]),
    "app_missing_call": ("app_missing_call_go.json", [tap(60, 25)]),
    "app_sig": ("app_sig_go.json", [tap(60, 25)]),
    "app_callid": ("app_callid_go.json", [tap(60, 25)]),
    "app_parcel": ("app_parcel_go.json", [tap(60, 25)]),
    "notifapp": ("change_notif.json", [tap(70, 25), tap(110, 25, timestamp=100)]),
}


def load_flow(name):
    with open(os.path.join(FIXTURES, "flows", name), "rb") as fh:
        (flow,) = fl.load_flow_file(fh.read())
    return flow


def main() -> int:
    v10 = ssi.load_interface(os.path.join(FIXTURES, "interfaces", "v10.json"))
    v9 = ssi.load_interface(os.path.join(FIXTURES, "interfaces", "v9.json"))
    overrides = ssi.load_overrides(
        os.path.join(FIXTURES, "interfaces", "overrides.json"), v10, v9
    )
    pack = ssi.generate_pack(ssi.diff_interfaces(v10, v9), v10, v9, overrides)
    specs = {
        app_id: load_app_spec(os.path.join(FIXTURES, "apps", f"{app_id}.json"))
        for app_id in APPS
    }

    print(f"{'app':24} {'host':10} {'relaunch env':14} {'replay':10} digest")
    failures = 0
    with tempfile.TemporaryDirectory(prefix="flowreco-matrix-") as ws:
        for app_id, (flow_name, actions) in APPS.items():
            registry = ssi.ServiceRegistry(v9)
            router = LaunchRouter(
                os.path.join(ws, app_id),
                specs,
                HostEnvironment("host-v9", registry),
                CompatEnvironment("compat-v10", pack, registry),
                interface_defs={"v10": v10},
            )
            oracle = AppSession(
                specs[app_id],
                os.path.join(ws, app_id, "oracle"),
                HostEnvironment("native", ssi.ServiceRegistry(v10)),
                api_def=v10,
            )
            for action in actions:
                oracle.step(action)
            oracle_digest = semantic_digest(oracle.tree)

            tracker = fl.FlowTracker(load_flow(flow_name))
            session = router.handle_launch(LaunchRequest(app_id)).session
            reason = None
            for action in actions:
                fl.on_ui_action(tracker, session.tree, action)
                result = session.step(action)
                if result.crashed:
                    reason = result.crash_reason
                    break
            report = router.recover(app_id, [tracker])
            match = report.post_recovery_digest == oracle_digest
            status = "n/a" if report.outcome is None else report.outcome.status
            print(
                f"{app_id:24} {('Error' if reason else 'Ok'):10} "
                f"{report.env_id:14} {status:10} "
                f"{'match' if match else 'MISMATCH'}"
            )
            if reason is None or report.env_id != "compat-v10" or not match:
                failures += 1
    print(f"\n{len(APPS) - failures}/{len(APPS)} apps recovered cleanly")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
