import json
import os

import pytest

from flowreco import simapp as sa
from flowreco.viewtree import back, snapshot_digest, tap, type_text

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def load(app_id):
    return sa.load_app_spec(os.path.join(FIXTURES, "apps", f"{app_id}.json"))


def load_trace(name):
    return sa.load_trace(os.path.join(FIXTURES, "traces", f"{name}.json"))


class TestSpecLoading:
    def test_all_fixture_apps_validate(self):
        for name in os.listdir(os.path.join(FIXTURES, "apps")):
            spec = load(name[: -len(".json")])
            assert spec.initial_screen in spec.screens

    def test_unknown_goto_rejected(self):
        doc = {
            "app_id": "x",
            "initial_screen": "a",
            "screens": {"a": {"width": 10, "height": 10, "root": {"class": "Layout", "bounds": [0, 0, 10, 10]}}},
            "transitions": [
                {"id": "r", "screen": "a", "selector": "/view", "kind": "Tap", "goto": "ghost"}
            ],
        }
        with pytest.raises(sa.AppSpecError, match="ghost"):
            sa.app_spec_from_json(doc)

    def test_ambiguous_selector_rejected_at_load(self):
        root = {
            "class": "Layout",
            "bounds": [0, 0, 100, 100],
            "children": [
                {"class": "Button", "text": "x", "bounds": [0, 0, 40, 20]},
                {"class": "Button", "text": "x", "bounds": [50, 0, 40, 20]},
            ],
        }
        doc = {
            "app_id": "x",
            "initial_screen": "a",
            "screens": {"a": {"width": 100, "height": 100, "root": root}},
            "transitions": [
                {"id": "r", "screen": "a", "selector": '//view[@text="x"]', "kind": "Tap"}
            ],
        }
        with pytest.raises(sa.AppSpecError, match="uniquely"):
            sa.app_spec_from_json(doc)


class TestRendering:
    def test_placeholders_substitute_from_state(self):
        spec = load("chatpoll")
        tree = sa.render_screen(spec, "poll_pane", {"poll_title": "dinner?"})
        texts = [n.text for n in tree.root.walk()]
        assert "dinner?" in texts

    def test_missing_keys_render_empty(self):
        spec = load("chatpoll")
        tree = sa.render_screen(spec, "poll_pane", {})
        fields = [n for n in tree.root.walk() if n.editable]
        assert all(f.text == "" for f in fields)

    def test_screen_id_set_on_rendered_tree(self):
        spec = load("chatpoll")
        assert sa.render_screen(spec, "chat", {}).screen_id == "chat"


class TestStepping:
    def test_trace_replays_deterministically(self, tmp_path):
        trace = load_trace("chatpoll_trace")
        spec = load("chatpoll")
        digests = []
        for run in range(2):
            session = sa.AppSession(spec, str(tmp_path / f"run{run}"))
            for action, screen in trace.actions:
                assert session.current_screen == screen
                session.step(action)
            digests.append(snapshot_digest(session.tree))
        assert digests[0] == digests[1]

    def test_unmatched_action_is_noop(self, tmp_path):
        session = sa.AppSession(load("chatpoll"), str(tmp_path / "d"))
        before = snapshot_digest(session.tree)
        session.step(tap(160, 250))  # empty list area, no rule
        assert session.current_screen == "chat"
        assert snapshot_digest(session.tree) == before

    def test_typed_text_lands_in_state_and_screen(self, tmp_path):
        session = sa.AppSession(load("chatpoll"), str(tmp_path / "d"))
        session.step(tap(50, 25))  # Poll button
        assert session.current_screen == "poll_pane"
        session.step(type_text(160, 25, "dinner?"))
        assert session.state["poll_title"] == "dinner?"
        assert any(n.text == "dinner?" for n in session.tree.root.walk())

    def test_copy_effect_moves_title_to_chat(self, tmp_path):
        session = sa.AppSession(load("chatpoll"), str(tmp_path / "d"))
        session.step(tap(50, 25))
        session.step(type_text(160, 25, "dinner?"))
        session.step(tap(60, 145))  # Create
        assert session.current_screen == "chat"
        assert session.state["last_poll"] == "dinner?"
        assert session.state["poll_title"] == ""

    def test_back_rule(self, tmp_path):
        session = sa.AppSession(load("chatsearch"), str(tmp_path / "d"))
        session.step(tap(50, 25))  # Search
        assert session.current_screen == "search"
        session.step(back())
        assert session.current_screen == "home"

    def test_clock_ticks_per_action(self, tmp_path):
        session = sa.AppSession(load("chatpoll"), str(tmp_path / "d"))
        session.step(tap(160, 250))
        session.step(tap(160, 250))
        assert session.virtual_clock == 2 * sa.CLOCK_TICK_MS


class TestStatePersistence:
    def test_state_survives_session_boundary(self, tmp_path):
        spec = load("profile")
        d = str(tmp_path / "d")
        s1 = sa.AppSession(spec, d)
        s1.step(tap(60, 25))  # Profile
        s1.step(type_text(110, 25, "kim"))
        s2 = sa.AppSession(spec, d)
        assert s2.state["display_name"] == "kim"
        assert any(n.text == "kim" for n in s2.tree.root.walk())

    def test_state_file_is_canonical_json(self, tmp_path):
        spec = load("profile")
        d = str(tmp_path / "d")
        s = sa.AppSession(spec, d)
        s.step(tap(60, 25))
        s.step(type_text(110, 25, "kim"))
        with open(os.path.join(d, "state.json"), "rb") as fh:
            raw = fh.read()
        assert raw == json.dumps(json.loads(raw), sort_keys=True, separators=(",", ":")).encode()


class TestCrashes:
    def test_after_n_actions(self, tmp_path):
        lines = []
        session = sa.AppSession(
            load("chatpoll"), str(tmp_path / "d"),
            crash_plan=sa.CrashPlan.after_actions(2), log_sink=lines.append,
        )
        assert not session.step(tap(160, 250)).crashed
        result = session.step(tap(160, 250))
        assert result.crashed and session.status == sa.CRASHED
        assert lines == [f"CRASH chatpoll Injected {2 * sa.CLOCK_TICK_MS}"]
        with pytest.raises(sa.SessionError):
            session.step(tap(160, 250))

    def test_at_virtual_time(self, tmp_path):
        session = sa.AppSession(
            load("chatpoll"), str(tmp_path / "d"),
            crash_plan=sa.CrashPlan.at_virtual_time(250),
        )
        session.step(tap(160, 250))
        session.step(tap(160, 250))
        assert session.running
        assert session.step(tap(160, 250)).crashed

    def test_api_fault_crashes_with_reason(self, tmp_path):
        lines = []
        session = sa.AppSession(load("notifapp"), str(tmp_path / "d"), log_sink=lines.append)
        session.step(tap(70, 25))  # settings
        result = session.step(tap(110, 25))  # system notification
        assert result.crashed
        assert session.crash_reason == "NoSuchService:notify"
        assert lines and lines[0].startswith("CRASH notifapp NoSuchService:notify ")


class TestTraces:
    def test_fixture_traces_round_trip(self):
        for name in ("chatpoll_trace", "chatsearch_trace", "profile_trace"):
            trace = load_trace(name)
            again = sa.trace_from_json(sa.trace_to_json(trace))
            assert sa.trace_to_json(again) == sa.trace_to_json(trace)

    def test_check_replayable_accepts_fixture(self, tmp_path):
        sa.check_replayable(load("chatpoll"), load_trace("chatpoll_trace"), str(tmp_path / "d"))

    def test_check_replayable_rejects_wrong_screen(self, tmp_path):
        trace = load_trace("chatpoll_trace")
        doc = sa.trace_to_json(trace)
        doc["actions"][0]["screen"] = "poll_pane"
        with pytest.raises(sa.TraceError, match="poll_pane"):
            sa.check_replayable(load("chatpoll"), sa.trace_from_json(doc), str(tmp_path / "d"))
