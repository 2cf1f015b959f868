import json
import os

import pytest
from fastapi.testclient import TestClient

from flowreco import flow as fl
from flowreco.service import create_app
from flowreco.simapp import load_app_spec

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")
ROOT = os.path.join(os.path.dirname(__file__), "..")


@pytest.fixture
def client(tmp_path):
    specs = {}
    for name in ("chatpoll", "profile"):
        spec = load_app_spec(os.path.join(FIXTURES, "apps", f"{name}.json"))
        specs[spec.app_id] = spec
    app = create_app(specs, str(tmp_path / "ws"))
    with TestClient(app) as c:
        c.workspace = str(tmp_path / "ws")
        yield c


def walk_frame(tree_doc):
    def rec(node):
        yield node
        for c in node["children"]:
            yield from rec(c)

    yield from rec(tree_doc["root"])


def find_id(frame, **attrs):
    for node in walk_frame(frame["tree"]):
        if all(node.get(k) == v for k, v in attrs.items()):
            return node["id"]
    raise AssertionError(f"no node with {attrs}")


def open_session(client, app_id="chatpoll", flows=()):
    r = client.post("/sessions", json={"app_id": app_id, "flows": list(flows)})
    assert r.status_code == 200, r.text
    doc = r.json()
    return doc["session_id"], doc["frame"]


def tap_body(x, y, at=0):
    return {"kind": "Tap", "events": [[x, y, "Down"], [x, y, "Up"]], "text": None, "at": at}


def poll_flow_doc():
    with open(os.path.join(FIXTURES, "flows", "create_poll.json")) as fh:
        return json.load(fh)


class TestSessions:
    def test_list_apps(self, client):
        apps = {a["app_id"] for a in client.get("/apps").json()}
        assert apps == {"chatpoll", "profile"}

    def test_unknown_app_404(self, client):
        assert client.post("/sessions", json={"app_id": "ghost"}).status_code == 404

    def test_action_steps_and_emits_frame(self, client):
        sid, frame0 = open_session(client)
        assert frame0["seq"] == 0
        assert frame0["tree"]["screen_id"] == "chat"
        r = client.post(f"/sessions/{sid}/action", json=tap_body(50, 25))
        doc = r.json()
        assert doc["result"]["screen_id"] == "poll_pane"
        assert doc["frame"]["seq"] == 1
        assert doc["frame"]["tree"]["screen_id"] == "poll_pane"

    def test_tracker_events_reported(self, client):
        sid, _ = open_session(client, flows=[poll_flow_doc()])
        r = client.post(f"/sessions/{sid}/action", json=tap_body(50, 25))
        (ev,) = r.json()["tracker_events"]
        assert ev == {"flow_id": "create-poll", "event": "Started", "to_stage": None}
        assert r.json()["frame"]["trackers"][0]["records"] == 1

    def test_bad_action_400(self, client):
        sid, _ = open_session(client)
        r = client.post(f"/sessions/{sid}/action", json={"kind": "Nope"})
        assert r.status_code == 400

    def test_node_ids_are_stable_dfs_preorder(self, client):
        _, frame = open_session(client)
        ids = [n["id"] for n in walk_frame(frame["tree"])]
        assert ids == [f"n{i}" for i in range(len(ids))]


class TestStageGeneration:
    def test_single_button_selection(self, client):
        sid, frame = open_session(client)
        poll_id = find_id(frame, text="Poll")
        r = client.post(
            f"/sessions/{sid}/stage",
            json={"selected": [poll_id], "kinds": {poll_id: "Tap"}, "stage_id": "starting-poll"},
        )
        doc = r.json()
        assert doc["stage"]["filters"] == [
            {"vpath": '//view[@class="Button" and @text="Poll"]', "kind": "Tap"}
        ]
        assert "starting-poll" in doc["preview"]

    def test_pane_selection_excluding_create(self, client):
        sid, _ = open_session(client)
        client.post(f"/sessions/{sid}/action", json=tap_body(50, 25))  # to poll_pane
        frame = client.get(f"/sessions/{sid}/frame").json()
        selected = [
            n["id"]
            for n in walk_frame(frame["tree"])
            if n["class"] in ("EditText", "Button") and n["text"] != "Create"
        ]
        r = client.post(f"/sessions/{sid}/stage", json={"selected": selected})
        filters = r.json()["stage"]["filters"]
        assert len(filters) == len(selected)
        assert not any("Create" in f["vpath"] for f in filters)

    def test_editable_fields_get_text_free_positional_selectors(self, client):
        sid, _ = open_session(client)
        client.post(f"/sessions/{sid}/action", json=tap_body(50, 25))
        client.post(f"/sessions/{sid}/action", json={
            "kind": "TypeText", "events": [[160, 25, "Down"], [160, 25, "Up"]],
            "text": "dinner?", "at": 100,
        })
        frame = client.get(f"/sessions/{sid}/frame").json()
        fields = [n["id"] for n in walk_frame(frame["tree"]) if n["editable"]]
        r = client.post(f"/sessions/{sid}/stage", json={"selected": fields})
        vpaths = [f["vpath"] for f in r.json()["stage"]["filters"]]
        assert len(set(vpaths)) == len(fields)
        assert not any("@text" in v for v in vpaths)

    def test_empty_selection_rejected(self, client):
        sid, _ = open_session(client)
        assert client.post(f"/sessions/{sid}/stage", json={"selected": []}).status_code == 400

    def test_unknown_node_id_rejected(self, client):
        sid, _ = open_session(client)
        r = client.post(f"/sessions/{sid}/stage", json={"selected": ["n999"]})
        assert r.status_code == 400
        assert "n999" in r.json()["detail"]

    def test_fragments_round_trip_through_flow_loader(self, client):
        """Invariant: emitted stage fragments load via the flow loader
        without modification."""
        sid, frame = open_session(client)
        poll_id = find_id(frame, text="Poll")
        s0 = client.post(
            f"/sessions/{sid}/stage",
            json={"selected": [poll_id], "kinds": {poll_id: "Tap"},
                  "stage_id": "s0", "next": ["s1"]},
        ).json()["stage"]
        client.post(f"/sessions/{sid}/action", json=tap_body(50, 25))
        frame = client.get(f"/sessions/{sid}/frame").json()
        fields = [n["id"] for n in walk_frame(frame["tree"]) if n["editable"]]
        s1 = client.post(
            f"/sessions/{sid}/stage", json={"selected": fields, "stage_id": "s1"}
        ).json()["stage"]
        doc = {"flow_id": "authored", "stages": [s0, s1], "starting": "s0"}
        (flow,) = fl.load_flow_file(json.dumps(doc).encode())
        assert fl.flow_to_json(flow) == {**doc, "prologue": []}


class TestFlowsEndpoint:
    def test_save_and_reload(self, client):
        r = client.post("/flows", json={"flows": poll_flow_doc()})
        doc = r.json()
        assert doc["flow_ids"] == ["create-poll"]
        with open(doc["path"], "rb") as fh:
            (flow,) = fl.load_flow_file(fh.read())
        assert flow.flow_id == "create-poll"

    def test_invalid_flow_422(self, client):
        bad = {"flow_id": "x", "stages": [], "starting": "missing"}
        assert client.post("/flows", json={"flows": bad}).status_code == 422

    def test_path_traversal_rejected(self, client):
        r = client.post(
            "/flows", json={"flows": poll_flow_doc(), "filename": "../evil.json"}
        )
        assert r.status_code == 400


class TestScenarios:
    def test_run_and_fetch_report(self, client):
        with open(os.path.join(FIXTURES, "scenarios", "profile_sweep.json")) as fh:
            scenario = json.load(fh)
        r = client.post(
            "/scenarios/run",
            json={"scenario": scenario, "base_dir": os.path.abspath(ROOT)},
        )
        doc = r.json()
        assert doc["passed"], doc["failures"]
        assert doc["report"]["matrix"]["fp"] == 0
        again = client.get(f"/reports/{doc['report_id']}").json()
        assert again == doc
        on_disk = os.path.join(client.workspace, "reports", f"{doc['report_id']}.json")
        assert os.path.exists(on_disk)

    def test_broken_scenario_paths_rejected(self, client):
        scenario = {"app": "nope.json", "flows": [], "trace": "nope.json"}
        r = client.post("/scenarios/run", json={"scenario": scenario, "base_dir": "/tmp"})
        assert r.status_code == 422

    def test_unknown_report_404(self, client):
        assert client.get("/reports/r-missing").status_code == 404


class TestMirror:
    def test_frames_stream_per_step_with_increasing_seq(self, client):
        sid, _ = open_session(client, flows=[poll_flow_doc()])
        with client.websocket_connect(f"/sessions/{sid}/mirror") as ws:
            first = ws.receive_json()
            assert first["seq"] == 0
            client.post(f"/sessions/{sid}/action", json=tap_body(50, 25))
            frame = ws.receive_json()
            assert frame["seq"] == 1
            assert frame["tree"]["screen_id"] == "poll_pane"
            assert frame["trackers"][0]["state"] == "Tracking"
            client.post(f"/sessions/{sid}/action", json=tap_body(125, 145))
            assert ws.receive_json()["seq"] == 2

    def test_frame_digest_matches_session(self, client):
        """Invariant: frame N's digest equals the session digest after step N."""
        sid, _ = open_session(client)
        with client.websocket_connect(f"/sessions/{sid}/mirror") as ws:
            ws.receive_json()
            for x, y in [(50, 25), (160, 25), (60, 145)]:
                posted = client.post(f"/sessions/{sid}/action", json=tap_body(x, y)).json()
                streamed = ws.receive_json()
                assert streamed["digest"] == posted["frame"]["digest"]
        direct = client.get(f"/sessions/{sid}/frame").json()
        assert direct["digest"] == streamed["digest"]

    def test_resync_request_returns_full_frame(self, client):
        sid, _ = open_session(client)
        with client.websocket_connect(f"/sessions/{sid}/mirror") as ws:
            first = ws.receive_json()
            ws.send_text("resync")
            again = ws.receive_json()
            assert again["digest"] == first["digest"]
