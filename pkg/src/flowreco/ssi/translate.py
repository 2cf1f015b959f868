"""Interface diffing, translation-pack generation, and run-time translation.

Version mismatches between two interface definitions fall into five
patterns: remapped call ids, changed parcelable schemas, changed call
signatures, removed services, and removed calls. The first two translate
fully automatically; signature changes get a working default adapter that
an override may replace; removals get error stubs unless an override
supplies a mock handler. Hooks compose in a fixed order: id remap, then
signature adaptation, then parcel re-encoding.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from . import wire
from .interfaces import (
    InterfaceDef,
    MethodDef,
    Reply,
    ReplyStatus,
    Transaction,
    exception_reply,
    ok_reply,
)

log = logging.getLogger(__name__)

SAME = "Same"
CALL_ID_REMAP = "CallIdRemap"
PARCEL_REENCODE = "ParcelReencode"
SIGNATURE_ADAPT = "SignatureAdapt"
MISSING_SERVICE = "MissingService"
MISSING_CALL = "MissingCall"

AUTO_PATTERNS = frozenset({CALL_ID_REMAP, PARCEL_REENCODE})


# --- diff ---------------------------------------------------------------------


@dataclass(frozen=True)
class MethodDiff:
    service: str
    method: str
    patterns: frozenset[str]  # empty means Same

    @property
    def same(self) -> bool:
        return not self.patterns


@dataclass(frozen=True)
class DiffReport:
    from_version: str
    to_version: str
    methods: tuple[MethodDiff, ...]

    def for_method(self, service: str, method: str) -> Optional[MethodDiff]:
        for d in self.methods:
            if d.service == service and d.method == method:
                return d
        return None

    def to_json(self) -> dict:
        return {
            "from": self.from_version,
            "to": self.to_version,
            "methods": [
                {
                    "service": d.service,
                    "method": d.method,
                    "patterns": sorted(d.patterns) if d.patterns else [SAME],
                }
                for d in self.methods
            ],
        }


def _changed_parcelables(a: InterfaceDef, b: InterfaceDef) -> set[str]:
    """Types whose field schema differs between versions, transitively."""
    changed = {
        t
        for t in a.parcelables
        if t in b.parcelables and a.parcelables[t] != b.parcelables[t]
    }
    # a type referencing a changed type is itself changed
    grew = True
    while grew:
        grew = False
        for t, fields in a.parcelables.items():
            if t in changed:
                continue
            for _, ftype in fields:
                if wire.is_parcel_type(ftype) and wire.parcel_type_name(ftype) in changed:
                    changed.add(t)
                    grew = True
    return changed


def _touches(m: MethodDef, changed: set[str]) -> bool:
    types = [t for _, t in m.params]
    if m.returns is not None:
        types.append(m.returns)
    return any(
        wire.is_parcel_type(t) and wire.parcel_type_name(t) in changed for t in types
    )


def diff_interfaces(from_def: InterfaceDef, to_def: InterfaceDef) -> DiffReport:
    changed = _changed_parcelables(from_def, to_def)
    diffs = []
    for sname, svc in from_def.services.items():
        to_svc = to_def.services.get(sname)
        for m in svc.methods:
            if to_svc is None:
                patterns = {MISSING_SERVICE}
            else:
                to_m = to_svc.by_name(m.name)
                if to_m is None:
                    patterns = {MISSING_CALL}
                else:
                    patterns = set()
                    if to_m.call_id != m.call_id:
                        patterns.add(CALL_ID_REMAP)
                    if m.params != to_m.params or m.returns != to_m.returns:
                        patterns.add(SIGNATURE_ADAPT)
                    if _touches(m, changed) or _touches(to_m, changed):
                        patterns.add(PARCEL_REENCODE)
            diffs.append(MethodDiff(sname, m.name, frozenset(patterns)))
    return DiffReport(from_def.version_id, to_def.version_id, tuple(diffs))


# --- overrides ----------------------------------------------------------------


class AdaptError(Exception):
    """Raised by a custom adapter to answer the caller with an exception."""

    def __init__(self, kind: str, message: str = ""):
        self.kind = kind
        self.message = message
        super().__init__(f"{kind}: {message}")


# mock: from-version arg values -> from-version return value
MockHandler = Callable[[list], Any]
# adapter: from-version arg values -> to-version arg values (may raise AdaptError)
Adapter = Callable[[list], list]


@dataclass(frozen=True)
class Override:
    name: str
    mock: Optional[MockHandler] = None
    adapter: Optional[Adapter] = None


class OverrideError(ValueError):
    pass


# --- pack ---------------------------------------------------------------------


@dataclass
class Translator:
    service: str
    method: str
    patterns: frozenset[str]
    from_method: MethodDef
    to_method: Optional[MethodDef]  # None for missing service/call
    override: Optional[Override] = None

    @property
    def automatic(self) -> bool:
        return self.patterns <= AUTO_PATTERNS


@dataclass(frozen=True)
class GenerationStats:
    auto_count: int
    template_count: int

    @property
    def total(self) -> int:
        return self.auto_count + self.template_count

    @property
    def auto_fraction(self) -> float:
        return self.auto_count / self.total if self.total else 1.0


@dataclass
class TranslationPack:
    from_version: InterfaceDef
    to_version: InterfaceDef
    translators: dict[tuple[str, str], Translator]
    stats: GenerationStats

    def manifest(self) -> dict:
        return {
            "from": self.from_version.version_id,
            "to": self.to_version.version_id,
            "stats": {
                "auto": self.stats.auto_count,
                "template": self.stats.template_count,
            },
            "translators": [
                {
                    "service": t.service,
                    "method": t.method,
                    "patterns": sorted(t.patterns) if t.patterns else [SAME],
                    "override": t.override.name if t.override else None,
                }
                for t in self.translators.values()
            ],
        }


def generate_pack(
    diff: DiffReport,
    from_def: InterfaceDef,
    to_def: InterfaceDef,
    overrides: Optional[dict[tuple[str, str], Override]] = None,
) -> TranslationPack:
    overrides = dict(overrides or {})
    translators: dict[tuple[str, str], Translator] = {}
    auto = template = 0
    for d in diff.methods:
        key = (d.service, d.method)
        ov = overrides.pop(key, None)
        if d.same and ov is not None:
            raise OverrideError(
                f"override '{ov.name}' targets {d.service}.{d.method}, which needs no translation"
            )
        from_m = from_def.method(d.service, d.method)
        to_m = (
            None
            if d.patterns & {MISSING_SERVICE, MISSING_CALL}
            else to_def.method(d.service, d.method)
        )
        t = Translator(d.service, d.method, d.patterns, from_m, to_m, ov)
        translators[key] = t
        if d.same or t.automatic:
            auto += 1
        else:
            template += 1
    if overrides:
        leftover = ", ".join(f"{s}.{m}" for s, m in overrides)
        raise OverrideError(f"overrides for unknown methods: {leftover}")
    return TranslationPack(
        from_def, to_def, translators, GenerationStats(auto, template)
    )


# --- run-time translation -----------------------------------------------------


@dataclass(frozen=True)
class TranslationResult:
    forward: Optional[Transaction] = None
    local_reply: Optional[Reply] = None

    @property
    def dropped(self) -> bool:
        return self.local_reply is not None


def _convert_value(value, from_type: str, to_type: str, from_def, to_def):
    """Reshape one decoded value from one version's type to the other's.

    Parcelables convert by field name: shared fields carry over, added
    fields take type defaults, removed fields drop.
    """
    if not wire.is_parcel_type(to_type):
        if from_type == to_type:
            return value
        return wire.default_value(to_type, to_def.parcelables)
    to_schema = to_def.parcelables[wire.parcel_type_name(to_type)]
    src = value if isinstance(value, dict) else {}
    from_schema = (
        from_def.parcelables.get(wire.parcel_type_name(from_type), [])
        if wire.is_parcel_type(from_type)
        else []
    )
    from_types = dict(from_schema)
    out = {}
    for fname, ftype in to_schema:
        if fname in src:
            out[fname] = _convert_value(
                src[fname], from_types.get(fname, ftype), ftype, from_def, to_def
            )
        else:
            out[fname] = wire.default_value(ftype, to_def.parcelables)
    return out


def _adapt_args(t: Translator, args: list, from_def, to_def) -> list:
    """Default signature adapter: match parameters by name, drop extras,
    fill missing ones with type defaults, and re-encode parcelables."""
    by_name = {name: (val, ptype) for (name, ptype), val in zip(t.from_method.params, args)}
    out = []
    for pname, ptype in t.to_method.params:
        if pname in by_name:
            val, from_type = by_name[pname]
            out.append(_convert_value(val, from_type, ptype, from_def, to_def))
        else:
            out.append(wire.default_value(ptype, to_def.parcelables))
    return out


def translate_transaction(pack: TranslationPack, txn: Transaction) -> TranslationResult:
    svc = pack.from_version.services.get(txn.service_name)
    from_m = svc.by_call_id(txn.call_id) if svc is not None else None
    if from_m is None:
        log.warning("unknown call %s#%d", txn.service_name, txn.call_id)
        return TranslationResult(local_reply=exception_reply("UnknownCall"))
    t = pack.translators[(txn.service_name, from_m.name)]

    if t.patterns & {MISSING_SERVICE, MISSING_CALL}:
        args = wire.decode_parcel(
            txn.args, from_m.param_schema, pack.from_version.parcelables
        )
        if t.override is not None and t.override.mock is not None:
            ret = t.override.mock(args)
            value = (
                b""
                if from_m.returns is None
                else wire.encode_parcel(
                    [ret], from_m.return_schema, pack.from_version.parcelables
                )
            )
            return TranslationResult(local_reply=ok_reply(value))
        kind = (
            "ServiceUnavailable" if MISSING_SERVICE in t.patterns else "MethodUnavailable"
        )
        return TranslationResult(
            local_reply=exception_reply(kind, f"{t.service}.{t.method}")
        )

    if t.patterns == frozenset():  # Same: byte-identical passthrough
        return TranslationResult(forward=txn)

    args = wire.decode_parcel(
        txn.args, from_m.param_schema, pack.from_version.parcelables
    )
    if t.override is not None and t.override.adapter is not None:
        try:
            to_args = t.override.adapter(args)
        except AdaptError as exc:
            return TranslationResult(
                local_reply=exception_reply(exc.kind, exc.message)
            )
    else:
        to_args = _adapt_args(t, args, pack.from_version, pack.to_version)
    encoded = wire.encode_parcel(
        to_args, t.to_method.param_schema, pack.to_version.parcelables
    )
    return TranslationResult(
        forward=Transaction(
            service_name=t.service,
            call_id=t.to_method.call_id,
            args=encoded,
            method_name=t.to_method.name,
        )
    )


def translate_reply(pack: TranslationPack, reply: Reply, txn: Transaction) -> Reply:
    """Reverse value-shape differences so the caller sees its own version."""
    if not reply.status.ok:
        return reply
    svc = pack.from_version.services.get(txn.service_name)
    from_m = svc.by_call_id(txn.call_id) if svc is not None else None
    if from_m is None:
        return reply
    t = pack.translators[(txn.service_name, from_m.name)]
    if t.to_method is None or t.patterns == frozenset():
        return reply
    if from_m.returns is None:
        return Reply(reply.status, b"")
    if t.to_method.returns is None:
        value = wire.default_value(from_m.returns, pack.from_version.parcelables)
    else:
        (raw,) = wire.decode_parcel(
            reply.value, t.to_method.return_schema, pack.to_version.parcelables
        )
        value = _convert_value(
            raw, t.to_method.returns, from_m.returns, pack.to_version, pack.from_version
        )
    encoded = wire.encode_parcel(
        [value], from_m.return_schema, pack.from_version.parcelables
    )
    return Reply(reply.status, encoded)


def save_pack_manifest(pack: TranslationPack, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pack.manifest(), fh, indent=2, sort_keys=True)
        fh.write("\n")
