import os
import random

import pytest

from flowreco import ssi

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def load_pair():
    v10 = ssi.load_interface(os.path.join(FIXTURES, "interfaces", "v10.json"))
    v9 = ssi.load_interface(os.path.join(FIXTURES, "interfaces", "v9.json"))
    return v10, v9


def fixture_overrides(v10, v9):
    return ssi.load_overrides(
        os.path.join(FIXTURES, "interfaces", "overrides.json"), v10, v9
    )


def fixture_pack():
    v10, v9 = load_pair()
    diff = ssi.diff_interfaces(v10, v9)
    return ssi.generate_pack(diff, v10, v9, fixture_overrides(v10, v9)), v10, v9


# --- wire codec ---------------------------------------------------------------

TYPES = ["i32", "i64", "bool", "str", "bytes", "token"]


def random_schema(rng, parcelables, allow_parcel=True):
    n = rng.randint(1, 5)
    schema = []
    for i in range(n):
        if allow_parcel and parcelables and rng.random() < 0.2:
            t = "parcel:" + rng.choice(sorted(parcelables))
        else:
            t = rng.choice(TYPES)
        schema.append((f"f{i}", t))
    return schema


def random_value(rng, wire_type, parcelables):
    if wire_type == "i32":
        return rng.randint(-(2**31), 2**31 - 1)
    if wire_type == "i64":
        return rng.randint(-(2**63), 2**63 - 1)
    if wire_type == "bool":
        return rng.random() < 0.5
    if wire_type == "str":
        return "".join(rng.choice("abcde é☃") for _ in range(rng.randint(0, 6)))
    if wire_type == "bytes":
        return bytes(rng.randrange(256) for _ in range(rng.randint(0, 8)))
    if wire_type == "token":
        return rng.randint(0, 2**64 - 1)
    name = wire_type.split(":", 1)[1]
    return {f: random_value(rng, t, parcelables) for f, t in parcelables[name]}


def random_parcelables(rng):
    out = {}
    for i in range(rng.randint(0, 2)):
        out[f"T{i}"] = random_schema(rng, out, allow_parcel=bool(out))
    return out


class TestWire:
    def test_round_trip_1000_random_schemas(self):
        rng = random.Random(77)
        for _ in range(1000):
            parcelables = random_parcelables(rng)
            schema = random_schema(rng, parcelables)
            values = [random_value(rng, t, parcelables) for _, t in schema]
            blob = ssi.encode_parcel(values, schema, parcelables)
            assert ssi.decode_parcel(blob, schema, parcelables) == values
            # canonical: re-encoding the decoded values is byte-identical
            again = ssi.encode_parcel(
                ssi.decode_parcel(blob, schema, parcelables), schema, parcelables
            )
            assert again == blob

    def test_single_byte_mutations_never_silently_round_trip(self):
        rng = random.Random(78)
        checked = 0
        while checked < 300:
            parcelables = random_parcelables(rng)
            schema = random_schema(rng, parcelables)
            values = [random_value(rng, t, parcelables) for _, t in schema]
            blob = ssi.encode_parcel(values, schema, parcelables)
            if not blob:
                continue
            i = rng.randrange(len(blob))
            flip = bytes([blob[i] ^ (1 << rng.randrange(8))])
            mutant = blob[:i] + flip + blob[i + 1 :]
            try:
                got = ssi.decode_parcel(mutant, schema, parcelables)
            except ssi.ParcelError:
                checked += 1
                continue
            assert got != values
            checked += 1

    def test_truncation_reports_offset(self):
        schema = [("a", "i64")]
        blob = ssi.encode_parcel([5], schema)
        with pytest.raises(ssi.ParcelError) as err:
            ssi.decode_parcel(blob[:-1], schema)
        assert err.value.offset is not None

    def test_trailing_bytes_rejected(self):
        schema = [("a", "i32")]
        blob = ssi.encode_parcel([5], schema) + b"\x00"
        with pytest.raises(ssi.ParcelError, match="trailing"):
            ssi.decode_parcel(blob, schema)

    def test_bad_bool_rejected(self):
        with pytest.raises(ssi.ParcelError, match="bool"):
            ssi.decode_parcel(b"\x02", [("a", "bool")])

    def test_wrong_value_count_rejected(self):
        with pytest.raises(ssi.ParcelError, match="expected"):
            ssi.encode_parcel([1, 2], [("a", "i32")])


# --- dispatch -----------------------------------------------------------------


class TestDispatch:
    def test_mismatched_dispatch_faults(self):
        v10, v9 = load_pair()
        host = ssi.ServiceRegistry(v9)
        # v10-only service
        txn = ssi.build_transaction(v10, "wallpaper", "get_wallpaper", [])
        fault = host.dispatch(txn)
        assert isinstance(fault, ssi.DispatchFault)
        assert fault.reason == "NoSuchService:wallpaper"
        # v10-only method on a shared service: its call id is unknown to v9
        txn = ssi.build_transaction(v10, "notify", "set_local_only", [True])
        fault = host.dispatch(txn)
        assert isinstance(fault, ssi.DispatchFault)
        assert fault.reason == "NoSuchMethod:notify.set_local_only"
        # renumbered call id landing on a different method
        txn = ssi.build_transaction(v10, "clock", "set_time", [42])
        fault = host.dispatch(txn)
        assert isinstance(fault, ssi.DispatchFault)
        assert fault.reason.startswith("CallIdMismatch:clock.set_time")
        # changed parcelable layout
        sample = {"rx": 1, "tx": 2, "tag": "wifi"}
        txn = ssi.build_transaction(v10, "stats", "record_sample", [sample])
        fault = host.dispatch(txn)
        assert isinstance(fault, ssi.DispatchFault)
        assert fault.reason.startswith("ParcelMismatch:stats.record_sample")

    def test_matched_dispatch_replies(self):
        v10, _ = load_pair()
        reg = ssi.ServiceRegistry(v10)
        reg.register_handler("clock", "get_time", lambda args: 123456)
        txn = ssi.build_transaction(v10, "clock", "get_time", [])
        reply = reg.dispatch(txn)
        assert isinstance(reply, ssi.Reply) and reply.status.ok
        (value,) = ssi.decode_parcel(reply.value, [("return", "i64")])
        assert value == 123456
        assert reg.calls_to("clock", "get_time") == 1

    def test_default_handler_returns_type_default(self):
        v10, _ = load_pair()
        reg = ssi.ServiceRegistry(v10)
        txn = ssi.build_transaction(v10, "net", "get_ip", ["eth0"])
        reply = reg.dispatch(txn)
        (value,) = ssi.decode_parcel(reply.value, [("return", "str")])
        assert value == ""

    def test_duplicate_call_ids_rejected_at_load(self):
        doc = {
            "version_id": "x",
            "services": {
                "s": {
                    "methods": [
                        {"name": "a", "call_id": 0},
                        {"name": "b", "call_id": 0},
                    ]
                }
            },
        }
        with pytest.raises(ssi.InterfaceDefError):
            ssi.interface_from_json(doc)


# --- diff ---------------------------------------------------------------------


class TestDiff:
    def test_matches_golden_classification(self):
        import json

        v10, v9 = load_pair()
        diff = ssi.diff_interfaces(v10, v9)
        with open(os.path.join(FIXTURES, "golden", "diff_v10_v9.json"), "rb") as fh:
            golden = json.load(fh)
        got = {
            f"{d.service}.{d.method}": sorted(d.patterns) if d.patterns else ["Same"]
            for d in diff.methods
        }
        assert got == golden

    def test_identical_interfaces_all_same(self):
        v10, _ = load_pair()
        diff = ssi.diff_interfaces(v10, v10)
        assert all(d.same for d in diff.methods)
        assert len(diff.methods) == 56

    def test_nested_parcelable_change_propagates(self):
        a = ssi.interface_from_json(
            {
                "version_id": "a",
                "services": {
                    "s": {
                        "methods": [
                            {"name": "m", "call_id": 0, "params": [["x", "parcel:Outer"]]}
                        ]
                    }
                },
                "parcelables": {
                    "Outer": [["inner", "parcel:Inner"]],
                    "Inner": [["v", "i32"]],
                },
            }
        )
        bdoc = ssi.interface_to_json(a)
        bdoc["version_id"] = "b"
        bdoc["parcelables"]["Inner"] = [["v", "i64"]]
        b = ssi.interface_from_json(bdoc)
        diff = ssi.diff_interfaces(a, b)
        assert diff.methods[0].patterns == frozenset({"ParcelReencode"})


# --- pack generation ----------------------------------------------------------


class TestPackGeneration:
    def test_total_over_fixture_pair(self):
        pack, v10, v9 = fixture_pack()
        for sname, svc in v10.services.items():
            for m in svc.methods:
                assert (sname, m.name) in pack.translators

    def test_auto_fraction_meets_threshold(self):
        pack, _, _ = fixture_pack()
        assert pack.stats.auto_count == 51
        assert pack.stats.template_count == 5
        assert pack.stats.auto_fraction >= 0.9

    def test_override_on_same_method_rejected(self):
        v10, v9 = load_pair()
        diff = ssi.diff_interfaces(v10, v9)
        bad = {("net", "get_ip"): ssi.Override("noop", mock=lambda a: "")}
        with pytest.raises(ssi.OverrideError, match="no translation"):
            ssi.generate_pack(diff, v10, v9, bad)

    def test_override_on_unknown_method_rejected(self):
        v10, v9 = load_pair()
        diff = ssi.diff_interfaces(v10, v9)
        bad = {("net", "nope"): ssi.Override("noop", mock=lambda a: "")}
        with pytest.raises(ssi.OverrideError, match="unknown"):
            ssi.generate_pack(diff, v10, v9, bad)

    def test_manifest_names_overrides(self):
        pack, _, _ = fixture_pack()
        manifest = pack.manifest()
        by_key = {
            (t["service"], t["method"]): t["override"] for t in manifest["translators"]
        }
        assert by_key[("settings", "get_animation_scale")] == "settings.get_animation_scale"
        assert by_key[("net", "get_ip")] is None

    def test_declarative_override_errors(self):
        v10, v9 = load_pair()
        with pytest.raises(ssi.OverrideError, match="unknown method"):
            ssi.overrides_from_json(
                [{"service": "net", "method": "nope", "mock": {"void": True}}], v10, v9
            )
        with pytest.raises(ssi.OverrideError, match="neither"):
            ssi.overrides_from_json(
                [{"service": "net", "method": "is_available"}], v10, v9
            )


# --- run-time translation -----------------------------------------------------


class TestTranslate:
    def host(self, v9):
        return ssi.ServiceRegistry(v9)

    def test_same_calls_pass_through_byte_identical(self):
        pack, v10, v9 = fixture_pack()
        txn = ssi.build_transaction(v10, "net", "get_ip", ["eth0"])
        result = ssi.translate_transaction(pack, txn)
        assert not result.dropped
        assert result.forward is txn

    def test_call_id_remap(self):
        pack, v10, v9 = fixture_pack()
        txn = ssi.build_transaction(v10, "clock", "get_time", [])
        result = ssi.translate_transaction(pack, txn)
        assert result.forward.call_id == v9.method("clock", "get_time").call_id
        reply = self.host(v9).dispatch(result.forward)
        assert isinstance(reply, ssi.Reply) and reply.status.ok

    def test_parcel_reencode_preserves_fields_by_name(self):
        pack, v10, v9 = fixture_pack()
        sample = {"rx": 11, "tx": 22, "tag": "wifi"}
        txn = ssi.build_transaction(v10, "stats", "record_sample", [sample])
        result = ssi.translate_transaction(pack, txn)
        host = self.host(v9)
        seen = []
        host.register_handler("stats", "record_sample", lambda args: seen.append(args))
        reply = host.dispatch(result.forward)
        assert reply.status.ok
        assert seen == [[{"tag": "wifi", "rx": 11, "tx": 22}]]

    def test_parcel_reencode_return_path(self):
        pack, v10, v9 = fixture_pack()
        txn = ssi.build_transaction(v10, "stats", "get_stats", [])
        result = ssi.translate_transaction(pack, txn)
        host = self.host(v9)
        host.register_handler(
            "stats", "get_stats", lambda args: {"tag": "cell", "rx": 7, "tx": 9}
        )
        reply = ssi.translate_reply(pack, host.dispatch(result.forward), txn)
        (value,) = ssi.decode_parcel(
            reply.value, [("return", "parcel:NetStats")], v10.parcelables
        )
        assert value == {"rx": 7, "tx": 9, "tag": "cell"}

    def test_signature_adapt_drops_primary_interface_name(self):
        pack, v10, v9 = fixture_pack()
        txn = ssi.build_transaction(v10, "net", "is_available", ["eth0"])
        result = ssi.translate_transaction(pack, txn)
        assert not result.dropped
        assert result.forward.args == b""  # v9 signature takes no arguments
        reply = self.host(v9).dispatch(result.forward)
        assert reply.status.ok

    def test_signature_adapt_rejects_other_interfaces(self):
        pack, v10, v9 = fixture_pack()
        txn = ssi.build_transaction(v10, "net", "is_available", ["wlan0"])
        result = ssi.translate_transaction(pack, txn)
        assert result.dropped
        assert not result.local_reply.status.ok
        assert result.local_reply.status.exception_kind == "InvalidInterface"

    def test_missing_call_mock_answers_locally(self):
        pack, v10, v9 = fixture_pack()
        host = self.host(v9)
        txn = ssi.build_transaction(v10, "settings", "get_animation_scale", [])
        result = ssi.translate_transaction(pack, txn)
        assert result.dropped and result.local_reply.status.ok
        (value,) = ssi.decode_parcel(result.local_reply.value, [("return", "i32")])
        assert value == 1
        assert host.calls_to("settings") == 0  # never reaches the host

    def test_missing_service_mock(self):
        pack, v10, _ = fixture_pack()
        txn = ssi.build_transaction(v10, "wallpaper", "set_wallpaper", ["file:///x"])
        result = ssi.translate_transaction(pack, txn)
        assert result.dropped and result.local_reply.status.ok

    def test_missing_without_mock_is_error_stub(self):
        v10, v9 = load_pair()
        diff = ssi.diff_interfaces(v10, v9)
        pack = ssi.generate_pack(diff, v10, v9)  # no overrides at all
        txn = ssi.build_transaction(v10, "wallpaper", "get_wallpaper", [])
        result = ssi.translate_transaction(pack, txn)
        assert result.dropped
        assert result.local_reply.status.exception_kind == "ServiceUnavailable"

    def test_unknown_call_id_answered_with_exception(self):
        pack, v10, _ = fixture_pack()
        txn = ssi.Transaction("clock", 999, b"", "mystery")
        result = ssi.translate_transaction(pack, txn)
        assert result.dropped
        assert result.local_reply.status.exception_kind == "UnknownCall"

    def test_every_fixture_method_translates_and_dispatches(self):
        """Totality: no v10 call can fault against a v9 host through the pack."""
        rng = random.Random(101)
        pack, v10, v9 = fixture_pack()
        host = self.host(v9)
        for sname, svc in v10.services.items():
            for m in svc.methods:
                args = [random_value(rng, t, v10.parcelables) for _, t in m.params]
                txn = ssi.build_transaction(v10, sname, m.name, args)
                result = ssi.translate_transaction(pack, txn)
                if result.dropped:
                    continue
                reply = host.dispatch(result.forward)
                assert isinstance(reply, ssi.Reply), (sname, m.name, reply)
                back = ssi.translate_reply(pack, reply, txn)
                # the caller can always decode under its own version
                ssi.decode_parcel(back.value, m.return_schema, v10.parcelables)
