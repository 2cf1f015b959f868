#!/usr/bin/env python3
"""Regenerate the fixture corpus under fixtures/.

Everything here is deterministic. Traces are validated against the app
specs before being written, so a fixture edit that breaks replayability
fails loudly at generation time.
"""

import json
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")

from flowreco import vpath as vp  # noqa: E402
from flowreco.simapp import app_spec_from_json, check_replayable, render_screen, trace_from_json  # noqa: E402


def node(cls, bounds, text=None, resource_id=None, editable=False, z=0, children=()):
    return {
        "class": cls,
        "resource_id": resource_id,
        "text": text,
        "editable": editable,
        "bounds": list(bounds),
        "z": z,
        "children": list(children),
    }


def screen(root, w=320, h=480):
    return {"width": w, "height": h, "root": root}


def center(bounds):
    return (bounds[0] + bounds[2] / 2.0, bounds[1] + bounds[3] / 2.0)


def tap_j(x, y, at):
    return {"kind": "Tap", "events": [[x, y, "Down"], [x, y, "Up"]], "text": None, "at": at}


def type_j(x, y, text, at):
    return {"kind": "TypeText", "events": [[x, y, "Down"], [x, y, "Up"]], "text": text, "at": at}


def back_j(at):
    return {"kind": "Back", "events": [], "text": None, "at": at}


# --- chatpoll -----------------------------------------------------------------

POLL_BTN = (10, 10, 80, 30)
ATTACH_BTN = (100, 10, 80, 30)
MSG_LIST = (0, 50, 320, 400)
TITLE_FIELD = (10, 10, 300, 30)
OPT1_FIELD = (10, 50, 300, 30)
OPT2_FIELD = (10, 90, 300, 30)
CREATE_BTN = (10, 130, 100, 30)
CANCEL_BTN = (120, 130, 100, 30)


def chatpoll_app():
    chat = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[
                node(
                    "Layout",
                    (0, 0, 320, 50),
                    children=[
                        node("Button", POLL_BTN, text="Poll"),
                        node("Button", ATTACH_BTN, text="Attach"),
                    ],
                ),
                node(
                    "ListView",
                    MSG_LIST,
                    children=[node("TextView", (10, 60, 300, 30), text="${last_poll}")],
                ),
            ],
        )
    )
    pane = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[
                node("EditText", TITLE_FIELD, text="${poll_title}", resource_id="field_title", editable=True),
                node("EditText", OPT1_FIELD, text="${poll_opt1}", editable=True),
                node("EditText", OPT2_FIELD, text="${poll_opt2}", editable=True),
                node("Button", CREATE_BTN, text="Create"),
                node("Button", CANCEL_BTN, text="Cancel"),
            ],
        )
    )
    opt1_sel = '/view/view[@class="EditText"][2]'
    opt2_sel = '/view/view[@class="EditText"][3]'
    return {
        "app_id": "chatpoll",
        "initial_screen": "chat",
        "screens": {"chat": chat, "poll_pane": pane},
        "transitions": [
            {
                "id": "open_poll",
                "screen": "chat",
                "selector": '//view[@class="Button" and @text="Poll"]',
                "kind": "Tap",
                "goto": "poll_pane",
            },
            {
                "id": "type_title",
                "screen": "poll_pane",
                "selector": '//view[@resource-id="field_title"]',
                "kind": "TypeText",
                "effects": [{"set_from_text": "poll_title"}],
            },
            {
                "id": "type_opt1",
                "screen": "poll_pane",
                "selector": opt1_sel,
                "kind": "TypeText",
                "effects": [{"set_from_text": "poll_opt1"}],
            },
            {
                "id": "type_opt2",
                "screen": "poll_pane",
                "selector": opt2_sel,
                "kind": "TypeText",
                "effects": [{"set_from_text": "poll_opt2"}],
            },
            {
                "id": "create_poll",
                "screen": "poll_pane",
                "selector": '//view[@class="Button" and @text="Create"]',
                "kind": "Tap",
                "effects": [
                    {"copy": {"last_poll": "poll_title"}},
                    {"set": {"poll_title": "", "poll_opt1": "", "poll_opt2": ""}},
                ],
                "goto": "chat",
            },
            {
                "id": "cancel_poll",
                "screen": "poll_pane",
                "selector": '//view[@class="Button" and @text="Cancel"]',
                "kind": "Tap",
                "effects": [{"set": {"poll_title": "", "poll_opt1": "", "poll_opt2": ""}}],
                "goto": "chat",
            },
        ],
    }


def chatpoll_flow(broken=False):
    composing = [
        {"vpath": '//view[@resource-id="field_title"]', "kind": "AnyInteraction"},
        {"vpath": '/view/view[@class="EditText"][2]', "kind": "AnyInteraction"},
    ]
    if not broken:
        composing.append({"vpath": '/view/view[@class="EditText"][3]', "kind": "AnyInteraction"})
    return {
        "flow_id": "create-poll" if not broken else "create-poll-broken",
        "stages": [
            {
                "id": "starting-poll",
                "filters": [{"vpath": '//view[@class="Button" and @text="Poll"]', "kind": "Tap"}],
                "next": ["composing-poll"],
            },
            {"id": "composing-poll", "filters": composing, "next": []},
        ],
        "starting": "starting-poll",
        "prologue": [],
    }


def chatpoll_trace():
    ax, ay = center(ATTACH_BTN)
    mx, my = center(MSG_LIST)
    px, py = center(POLL_BTN)
    tx, ty = center(TITLE_FIELD)
    o1x, o1y = center(OPT1_FIELD)
    o2x, o2y = center(OPT2_FIELD)
    crx, cry = center(CREATE_BTN)
    cax, cay = center(CANCEL_BTN)
    actions = [
        (tap_j(ax, ay, 0), "chat"),
        (tap_j(mx, my, 100), "chat"),
        (tap_j(px, py, 200), "chat"),
        (type_j(tx, ty, "dinner?", 300), "poll_pane"),
        (type_j(o1x, o1y, "pizza", 400), "poll_pane"),
        (type_j(o2x, o2y, "sushi", 500), "poll_pane"),
        (tap_j(crx, cry, 600), "poll_pane"),
        (tap_j(ax, ay, 700), "chat"),
        (tap_j(mx, my, 800), "chat"),
        (tap_j(px, py, 900), "chat"),
        (type_j(tx, ty, "lunch?", 1000), "poll_pane"),
        (tap_j(cax, cay, 1100), "poll_pane"),
        (tap_j(ax, ay, 1200), "chat"),
    ]
    return {"app_id": "chatpoll", "actions": [dict(a, screen=s) for a, s in actions]}


# classification oracle, derived by hand from the trace above:
# offsets are "actions performed before the crash"
CHATPOLL_GOLDEN = {
    1: "tn", 2: "tn", 3: "tp", 4: "tp", 5: "tp", 6: "tp",
    7: "tn", 8: "tn", 9: "tn", 10: "tp", 11: "tp", 12: "tn", 13: "tn",
}
# broken flow omits the second-option filter: typing it (action 6) kills
# tracking, so offset 6 becomes a miss; everything after Create is idle anyway
CHATPOLL_BROKEN_GOLDEN = {**CHATPOLL_GOLDEN, 6: "fn"}


# --- chatsearch ---------------------------------------------------------------

SEARCH_BTN = (10, 10, 80, 30)
ROOMS_LIST = (0, 50, 320, 400)
QUERY_FIELD = (10, 10, 240, 30)
BACK_BTN = (260, 10, 50, 30)
RESULT_LABEL = (10, 60, 300, 30)


def chatsearch_app():
    home = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[
                node("Button", SEARCH_BTN, text="Search"),
                node("ListView", ROOMS_LIST, children=[node("TextView", (10, 60, 300, 30), text="general")]),
            ],
        )
    )
    search = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[
                node("EditText", QUERY_FIELD, text="${query}", resource_id="field_query", editable=True),
                node("Button", BACK_BTN, text="Back"),
                node("TextView", RESULT_LABEL, text="${query} results"),
            ],
        )
    )
    return {
        "app_id": "chatsearch",
        "initial_screen": "home",
        "screens": {"home": home, "search": search},
        "transitions": [
            {
                "id": "open_search",
                "screen": "home",
                "selector": '//view[@class="Button" and @text="Search"]',
                "kind": "Tap",
                "goto": "search",
            },
            {
                "id": "type_query",
                "screen": "search",
                "selector": '//view[@resource-id="field_query"]',
                "kind": "TypeText",
                "effects": [{"set_from_text": "query"}],
            },
            {
                "id": "back_button",
                "screen": "search",
                "selector": '//view[@class="Button" and @text="Back"]',
                "kind": "Tap",
                "goto": "home",
            },
            {"id": "back_key", "screen": "search", "selector": None, "kind": "Back", "goto": "home"},
        ],
    }


def chatsearch_flow():
    return {
        "flow_id": "search-room",
        "stages": [
            {
                "id": "starting-search",
                "filters": [{"vpath": '//view[@class="Button" and @text="Search"]', "kind": "Tap"}],
                "next": ["typing-query"],
            },
            {
                "id": "typing-query",
                "filters": [{"vpath": '//view[@resource-id="field_query"]', "kind": "AnyInteraction"}],
                "next": [],
            },
        ],
        "starting": "starting-search",
        "prologue": [],
    }


def chatsearch_trace():
    rx, ry = center(ROOMS_LIST)
    sx, sy = center(SEARCH_BTN)
    qx, qy = center(QUERY_FIELD)
    bx, by = center(BACK_BTN)
    actions = [
        (tap_j(rx, ry, 0), "home"),
        (tap_j(sx, sy, 100), "home"),
        (type_j(qx, qy, "ops", 200), "search"),
        (type_j(qx, qy, "ops room", 300), "search"),
        (tap_j(bx, by, 400), "search"),
        (tap_j(rx, ry, 500), "home"),
        (tap_j(sx, sy, 600), "home"),
        (type_j(qx, qy, "dev", 700), "search"),
        (back_j(800), "search"),
        (tap_j(rx, ry, 900), "home"),
    ]
    return {"app_id": "chatsearch", "actions": [dict(a, screen=s) for a, s in actions]}


CHATSEARCH_GOLDEN = {
    1: "tn", 2: "tp", 3: "tp", 4: "tp", 5: "tn",
    6: "tn", 7: "tp", 8: "tp", 9: "tn", 10: "tn",
}


# --- profile ------------------------------------------------------------------

PROFILE_BTN = (10, 10, 100, 30)
STATUS_LABEL = (10, 60, 300, 30)
NAME_FIELD = (10, 10, 200, 30)
SAVE_BTN = (220, 10, 90, 30)


def profile_app():
    main = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[
                node("Button", PROFILE_BTN, text="Profile"),
                node("TextView", STATUS_LABEL, text="${display_name}"),
            ],
        )
    )
    profile = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[
                node("EditText", NAME_FIELD, text="${display_name}", resource_id="field_name", editable=True),
                node("Button", SAVE_BTN, text="Save"),
            ],
        )
    )
    return {
        "app_id": "profile",
        "initial_screen": "main",
        "screens": {"main": main, "profile": profile},
        "transitions": [
            {
                "id": "open_profile",
                "screen": "main",
                "selector": '//view[@class="Button" and @text="Profile"]',
                "kind": "Tap",
                "goto": "profile",
            },
            {
                "id": "type_name",
                "screen": "profile",
                "selector": '//view[@resource-id="field_name"]',
                "kind": "TypeText",
                "effects": [{"set_from_text": "display_name"}],
            },
            {
                "id": "save_profile",
                "screen": "profile",
                "selector": '//view[@class="Button" and @text="Save"]',
                "kind": "Tap",
                "goto": "main",
            },
        ],
    }


def profile_flow():
    return {
        "flow_id": "update-profile",
        "stages": [
            {
                "id": "opening-profile",
                "filters": [{"vpath": '//view[@class="Button" and @text="Profile"]', "kind": "Tap"}],
                "next": ["editing-name"],
            },
            {
                "id": "editing-name",
                "filters": [{"vpath": '//view[@resource-id="field_name"]', "kind": "AnyInteraction"}],
                "next": [],
            },
        ],
        "starting": "opening-profile",
        "prologue": [],
    }


def profile_trace():
    stx, sty = center(STATUS_LABEL)
    px, py = center(PROFILE_BTN)
    nx, ny = center(NAME_FIELD)
    sx, sy = center(SAVE_BTN)
    actions = [
        (tap_j(stx, sty, 0), "main"),
        (tap_j(px, py, 100), "main"),
        (type_j(nx, ny, "kim", 200), "profile"),
        (type_j(nx, ny, "kim lee", 300), "profile"),
        (tap_j(sx, sy, 400), "profile"),
        (tap_j(stx, sty, 500), "main"),
    ]
    return {"app_id": "profile", "actions": [dict(a, screen=s) for a, s in actions]}


PROFILE_GOLDEN = {1: "tn", 2: "tp", 3: "tp", 4: "tp", 5: "tn", 6: "tn"}


# --- notifapp (version-mismatch calendar analog) ------------------------------

SETTINGS_BTN = (10, 10, 120, 30)
NOTIF_BTN = (10, 10, 200, 30)
NOTIF_LABEL = (10, 60, 300, 30)


def notifapp():
    main = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[node("Button", SETTINGS_BTN, text="settings")],
        )
    )
    settings = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[
                node("Button", NOTIF_BTN, text="system notification"),
                node("TextView", NOTIF_LABEL, text="local-only: ${notif}"),
            ],
        )
    )
    return {
        "app_id": "notifapp",
        "api_version": "v10",
        "initial_screen": "main",
        "screens": {"main": main, "settings": settings},
        "transitions": [
            {
                "id": "open_settings",
                "screen": "main",
                "selector": '//view[@class="Button" and @text="settings"]',
                "kind": "Tap",
                "goto": "settings",
            },
            {
                "id": "toggle_notif",
                "screen": "settings",
                "selector": '//view[@class="Button" and @text="system notification"]',
                "kind": "Tap",
                "effects": [{"set": {"notif": "on"}}],
            },
        ],
        "api_calls": [
            {"rule": "toggle_notif", "service": "notify", "method": "set_local_only", "args": [True]}
        ],
    }


def notif_flow():
    return {
        "flow_id": "change-notif",
        "stages": [
            {
                "id": "opening-settings",
                "filters": [{"vpath": '//view[@class="Button" and @text="settings"]', "kind": "Tap"}],
                "next": ["toggling"],
            },
            {
                "id": "toggling",
                "filters": [
                    {"vpath": '//view[@class="Button" and @text="system notification"]', "kind": "Tap"}
                ],
                "next": [],
            },
        ],
        "starting": "opening-settings",
        "prologue": [],
    }


# --- synthetic mismatch apps --------------------------------------------------

GO_BTN = (10, 10, 100, 30)


def mismatch_app(app_id, service, method, args):
    main = screen(
        node("Layout", (0, 0, 320, 480), children=[node("Button", GO_BTN, text="go")])
    )
    done = screen(
        node(
            "Layout",
            (0, 0, 320, 480),
            children=[node("TextView", (10, 10, 300, 30), text="done: ${done}")],
        )
    )
    return {
        "app_id": app_id,
        "api_version": "v10",
        "initial_screen": "main",
        "screens": {"main": main, "done": done},
        "transitions": [
            {
                "id": "go",
                "screen": "main",
                "selector": '//view[@class="Button" and @text="go"]',
                "kind": "Tap",
                "effects": [{"set": {"done": "yes"}}],
                "goto": "done",
            }
        ],
        "api_calls": [{"rule": "go", "service": service, "method": method, "args": args}],
    }


def mismatch_flow(app_id):
    return {
        "flow_id": f"{app_id}-go",
        "stages": [
            {
                "id": "going",
                "filters": [{"vpath": '//view[@class="Button" and @text="go"]', "kind": "Tap"}],
                "next": [],
            }
        ],
        "starting": "going",
        "prologue": [],
    }


MISMATCH_APPS = {
    "app_missing_service": ("wallpaper", "get_wallpaper", []),
    "app_missing_call": ("settings", "get_animation_scale", []),
    "app_sig": ("net", "is_available", ["eth0"]),
    "app_callid": ("clock", "get_time", []),
    "app_parcel": ("stats", "record_sample", [{"rx": 10, "tx": 20, "tag": "wifi"}]),
}


# --- interface definitions ----------------------------------------------------


def make_interfaces():
    def methods(defs, base_id=0):
        return [
            {"name": n, "call_id": base_id + i, "params": p, "returns": r}
            for i, (n, p, r) in enumerate(defs)
        ]

    settings_common = [
        (f"get_value_{i:02d}", [["key", "str"]], "str") for i in range(12)
    ] + [(f"set_value_{i:02d}", [["key", "str"], ["value", "str"]], None) for i in range(12)]

    clock_methods = [
        ("get_time", [], "i64"),
        ("set_time", [["t", "i64"]], None),
        ("get_zone", [], "str"),
        ("set_zone", [["zone", "str"]], None),
        ("get_alarm", [], "i64"),
        ("set_alarm", [["t", "i64"]], None),
        ("get_tick", [], "i64"),
        ("set_tick", [["t", "i64"]], None),
        ("get_uptime", [], "i64"),
        ("get_elapsed", [], "i64"),
    ]

    net_common = [
        ("get_ip", [["ifname", "str"]], "str"),
        ("get_mask", [["ifname", "str"]], "str"),
        ("iface_up", [["ifname", "str"]], "bool"),
        ("iface_down", [["ifname", "str"]], "bool"),
        ("get_mtu", [["ifname", "str"]], "i32"),
        ("set_mtu", [["ifname", "str"], ["mtu", "i32"]], None),
        ("get_mac", [["ifname", "str"]], "str"),
        ("scan", [], "i32"),
    ]

    stats_methods = [
        ("get_stats", [], "parcel:NetStats"),
        ("record_sample", [["sample", "parcel:NetStats"]], None),
        ("reset", [], None),
        ("get_total", [], "i64"),
    ]

    notify_common = [
        ("notify_post", [["tag", "str"], ["text", "str"]], "i32"),
        ("notify_cancel", [["tag", "str"]], None),
        ("get_channel", [["name", "str"]], "str"),
        ("set_channel", [["name", "str"], ["value", "str"]], None),
        ("list_channels", [], "str"),
    ]

    v10 = {
        "version_id": "v10",
        "services": {
            "settings": {
                "methods": methods(settings_common)
                + [{"name": "get_animation_scale", "call_id": 24, "params": [], "returns": "i32"}]
            },
            "clock": {"methods": methods(clock_methods, base_id=0)},
            "net": {
                "methods": [
                    {"name": "is_available", "call_id": 0, "params": [["ifname", "str"]], "returns": "bool"}
                ]
                + methods(net_common, base_id=1)
            },
            "stats": {"methods": methods(stats_methods)},
            "notify": {
                "methods": methods(notify_common)
                + [{"name": "set_local_only", "call_id": 5, "params": [["on", "bool"]], "returns": None}]
            },
            "wallpaper": {
                "methods": [
                    {"name": "get_wallpaper", "call_id": 0, "params": [], "returns": "str"},
                    {"name": "set_wallpaper", "call_id": 1, "params": [["uri", "str"]], "returns": None},
                ]
            },
        },
        "parcelables": {"NetStats": [["rx", "i64"], ["tx", "i64"], ["tag", "str"]]},
    }

    v9 = {
        "version_id": "v9",
        "services": {
            "settings": {"methods": methods(settings_common)},
            # the clock service was renumbered wholesale in v9
            "clock": {"methods": methods(clock_methods, base_id=1)},
            "net": {
                "methods": [
                    {"name": "is_available", "call_id": 0, "params": [], "returns": "bool"}
                ]
                + methods(net_common, base_id=1)
            },
            "stats": {"methods": methods(stats_methods)},
            "notify": {"methods": methods(notify_common)},
        },
        "parcelables": {"NetStats": [["tag", "str"], ["rx", "i64"], ["tx", "i64"]]},
    }
    return v10, v9


# hand-written diff expectation for the five-pattern pair (golden oracle)
def make_diff_golden(v10):
    expected = {}
    for sname, sdoc in v10["services"].items():
        for m in sdoc["methods"]:
            name = m["name"]
            if sname == "wallpaper":
                patterns = ["MissingService"]
            elif (sname, name) in (("settings", "get_animation_scale"), ("notify", "set_local_only")):
                patterns = ["MissingCall"]
            elif sname == "clock":
                patterns = ["CallIdRemap"]
            elif (sname, name) == ("net", "is_available"):
                patterns = ["SignatureAdapt"]
            elif sname == "stats" and name in ("get_stats", "record_sample"):
                patterns = ["ParcelReencode"]
            else:
                patterns = ["Same"]
            expected[f"{sname}.{name}"] = patterns
    return expected


PACK_OVERRIDES = [
    {"service": "settings", "method": "get_animation_scale", "mock": {"constant": 1}},
    {"service": "notify", "method": "set_local_only", "mock": {"void": True}},
    {"service": "wallpaper", "method": "get_wallpaper", "mock": {"constant": ""}},
    {"service": "wallpaper", "method": "set_wallpaper", "mock": {"void": True}},
    {
        "service": "net",
        "method": "is_available",
        "adapter": {
            "require_param_equals": {"param": "ifname", "value": "eth0"},
            "exception": "InvalidInterface",
        },
    },
]


# --- scenarios ----------------------------------------------------------------


def sweep_scenario(app, flow_files, trace, expect, reference_flows=None):
    doc = {
        "kind": "sweep",
        "app": f"fixtures/apps/{app}.json",
        "flows": flow_files,
        "trace": f"fixtures/traces/{trace}.json",
        "interval": 1,
        "expect": expect,
    }
    if reference_flows:
        doc["reference_flows"] = reference_flows
    return doc


def write(path, doc):
    full = os.path.join(FIXTURES, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("wrote", os.path.relpath(full, ROOT))


def main():
    apps = {
        "chatpoll": chatpoll_app(),
        "chatsearch": chatsearch_app(),
        "profile": profile_app(),
        "notifapp": notifapp(),
    }
    for app_id, (svc, method, args) in MISMATCH_APPS.items():
        apps[app_id] = mismatch_app(app_id, svc, method, args)

    traces = {
        "chatpoll_trace": chatpoll_trace(),
        "chatsearch_trace": chatsearch_trace(),
        "profile_trace": profile_trace(),
    }

    # validate before writing
    import tempfile

    for name, tdoc in traces.items():
        spec = app_spec_from_json(apps[tdoc["app_id"]])
        with tempfile.TemporaryDirectory() as d:
            check_replayable(spec, trace_from_json(tdoc), d)

    for app_id, doc in apps.items():
        app_spec_from_json(doc)  # validation
        write(f"apps/{app_id}.json", doc)
    for name, doc in traces.items():
        write(f"traces/{name}.json", doc)

    write("flows/create_poll.json", chatpoll_flow())
    write("flows/create_poll_broken.json", chatpoll_flow(broken=True))
    write("flows/search_room.json", chatsearch_flow())
    write("flows/update_profile.json", profile_flow())
    write("flows/change_notif.json", notif_flow())
    for app_id in MISMATCH_APPS:
        write(f"flows/{app_id}_go.json", mismatch_flow(app_id))

    v10, v9 = make_interfaces()
    write("interfaces/v10.json", v10)
    write("interfaces/v9.json", v9)
    write("interfaces/overrides.json", PACK_OVERRIDES)
    write("golden/diff_v10_v9.json", make_diff_golden(v10))
    write(
        "golden/sweep_classifications.json",
        {
            "chatpoll": {str(k): v for k, v in CHATPOLL_GOLDEN.items()},
            "chatpoll_broken": {str(k): v for k, v in CHATPOLL_BROKEN_GOLDEN.items()},
            "chatsearch": {str(k): v for k, v in CHATSEARCH_GOLDEN.items()},
            "profile": {str(k): v for k, v in PROFILE_GOLDEN.items()},
        },
    )

    write(
        "scenarios/poll_sweep.json",
        sweep_scenario(
            "chatpoll",
            ["fixtures/flows/create_poll.json"],
            "chatpoll_trace",
            {"precision": 1.0, "recall": 1.0, "fp": 0, "fn": 0},
        ),
    )
    write(
        "scenarios/poll_sweep_broken.json",
        sweep_scenario(
            "chatpoll",
            ["fixtures/flows/create_poll_broken.json"],
            "chatpoll_trace",
            {"precision": 1.0, "recall_below": 1.0},
            reference_flows=["fixtures/flows/create_poll.json"],
        ),
    )
    write(
        "scenarios/search_sweep.json",
        sweep_scenario(
            "chatsearch",
            ["fixtures/flows/search_room.json"],
            "chatsearch_trace",
            {"precision": 1.0, "recall": 1.0, "fp": 0, "fn": 0},
        ),
    )
    write(
        "scenarios/profile_sweep.json",
        sweep_scenario(
            "profile",
            ["fixtures/flows/update_profile.json"],
            "profile_trace",
            {"precision": 1.0, "recall": 1.0, "fp": 0, "fn": 0},
        ),
    )


if __name__ == "__main__":
    main()
