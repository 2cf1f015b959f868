import json
import os

import pytest

from flowreco import flow as fl
from flowreco import sweep as sw
from flowreco.simapp import Trace, load_app_spec, load_trace

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def load_flow(name):
    with open(os.path.join(FIXTURES, "flows", name), "rb") as fh:
        (flow,) = fl.load_flow_file(fh.read())
    return flow


def load_golden():
    with open(os.path.join(FIXTURES, "golden", "sweep_classifications.json"), "rb") as fh:
        return json.load(fh)


def run_sweep(app_id, trace_name, flow_names, reference=None, **kw):
    app = load_app_spec(os.path.join(FIXTURES, "apps", f"{app_id}.json"))
    trace = load_trace(os.path.join(FIXTURES, "traces", f"{trace_name}.json"))
    flows = [load_flow(n) for n in flow_names]
    refs = None if reference is None else [load_flow(n) for n in reference]
    return sw.crash_sweep_evaluate(app, trace, flows, reference_flows=refs, **kw)


class TestOffsets:
    def test_action_intervals(self):
        assert sw._injection_offsets(10, 1, "actions") == list(range(1, 11))
        assert sw._injection_offsets(10, 3, "actions") == [3, 6, 9]
        assert sw._injection_offsets(0, 1, "actions") == []

    def test_ms_intervals_map_to_clock_crossings(self):
        # one action per 100 virtual ms
        assert sw._injection_offsets(5, 100, "ms") == [1, 2, 3, 4, 5]
        assert sw._injection_offsets(5, 250, "ms") == [3, 5]


class TestGoldenClassifications:
    @pytest.mark.parametrize(
        "app_id,trace,flows,golden_key",
        [
            ("chatpoll", "chatpoll_trace", ["create_poll.json"], "chatpoll"),
            ("chatsearch", "chatsearch_trace", ["search_room.json"], "chatsearch"),
            ("profile", "profile_trace", ["update_profile.json"], "profile"),
        ],
    )
    def test_per_offset_classification_matches_golden(self, app_id, trace, flows, golden_key):
        report = run_sweep(app_id, trace, flows)
        golden = load_golden()[golden_key]
        got = {str(p.offset): p.classification for p in report.points}
        assert got == golden

    def test_broken_flow_matches_golden(self):
        report = run_sweep(
            "chatpoll",
            "chatpoll_trace",
            ["create_poll_broken.json"],
            reference=["create_poll.json"],
        )
        golden = load_golden()["chatpoll_broken"]
        got = {str(p.offset): p.classification for p in report.points}
        assert got == golden


class TestMetrics:
    def test_correct_flows_score_perfectly(self):
        for app_id, trace, flows in [
            ("chatpoll", "chatpoll_trace", ["create_poll.json"]),
            ("chatsearch", "chatsearch_trace", ["search_room.json"]),
            ("profile", "profile_trace", ["update_profile.json"]),
        ]:
            report = run_sweep(app_id, trace, flows)
            m = report.matrix
            assert m.fp == 0 and m.fn == 0, report.table()
            assert m.precision == 1.0 and m.recall == 1.0
            assert not m.precision_flagged and not m.recall_flagged
            assert m.tp > 0 and m.tn > 0

    def test_broken_flow_loses_recall_but_not_precision(self):
        report = run_sweep(
            "chatpoll",
            "chatpoll_trace",
            ["create_poll_broken.json"],
            reference=["create_poll.json"],
        )
        m = report.matrix
        assert m.precision == 1.0 and m.fp == 0
        assert m.fn > 0 and m.recall < 1.0

    def test_degenerate_denominators_are_flagged(self):
        m = sw.ConfusionMatrix(tp=0, tn=5, fp=0, fn=0)
        assert m.precision == 1.0 and m.precision_flagged
        assert m.recall == 1.0 and m.recall_flagged

    def test_report_json_shape(self):
        report = run_sweep("profile", "profile_trace", ["update_profile.json"])
        doc = report.to_json()
        assert doc["app_id"] == "profile"
        assert doc["matrix"]["tp"] + doc["matrix"]["tn"] == len(doc["points"])
        assert "precision" in doc and "recall" in doc
        json.dumps(doc)  # serializable

    def test_table_mentions_counts(self):
        report = run_sweep("profile", "profile_trace", ["update_profile.json"])
        text = report.table()
        assert "profile" in text and "precision" in text


class TestEdgeCases:
    def test_empty_trace_yields_empty_sweep(self):
        app = load_app_spec(os.path.join(FIXTURES, "apps", "profile.json"))
        report = sw.crash_sweep_evaluate(
            app, Trace("profile", ()), [load_flow("update_profile.json")]
        )
        assert report.points == []
        assert report.matrix.precision_flagged

    def test_unreplayable_trace_fails_before_sweeping(self):
        from flowreco.simapp import TraceError, trace_from_json, trace_to_json

        app = load_app_spec(os.path.join(FIXTURES, "apps", "chatpoll.json"))
        trace = load_trace(os.path.join(FIXTURES, "traces", "chatpoll_trace.json"))
        doc = trace_to_json(trace)
        doc["actions"][0]["screen"] = "poll_pane"
        with pytest.raises(TraceError):
            sw.crash_sweep_evaluate(
                app, trace_from_json(doc), [load_flow("create_poll.json")]
            )

    def test_points_are_isolated_per_offset(self, tmp_path):
        """Each injection point runs in its own workspace; recovered state
        from one offset never leaks into another."""
        report = run_sweep(
            "chatpoll",
            "chatpoll_trace",
            ["create_poll.json"],
            workspace_root=str(tmp_path),
        )
        workspaces = [d for d in os.listdir(tmp_path) if d.startswith("point_")]
        assert len(workspaces) == len(report.points)

    def test_interval_in_virtual_ms(self):
        report = run_sweep(
            "profile", "profile_trace", ["update_profile.json"], interval=200, unit="ms"
        )
        assert [p.offset for p in report.points] == [2, 4, 6]
        assert report.matrix.fp == 0 and report.matrix.fn == 0
