"""Versioned system-service interface definitions, transactions, dispatch.

An InterfaceDef is the IDL for one interface version: services, their
methods with hard-coded call ids, and parcelable field schemas. A
ServiceRegistry hosts one version's services and dispatches transactions,
faulting on anything that does not match its own definition (the faults
are what crash an app running against the wrong version).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Union

from . import wire


@dataclass(frozen=True)
class MethodDef:
    name: str
    call_id: int
    params: tuple[tuple[str, str], ...] = ()  # (name, wire type)
    returns: Optional[str] = None

    @property
    def param_schema(self) -> wire.FieldSchema:
        return list(self.params)

    @property
    def return_schema(self) -> wire.FieldSchema:
        return [] if self.returns is None else [("return", self.returns)]


@dataclass(frozen=True)
class ServiceDef:
    name: str
    methods: tuple[MethodDef, ...]

    def by_name(self, method: str) -> Optional[MethodDef]:
        for m in self.methods:
            if m.name == method:
                return m
        return None

    def by_call_id(self, call_id: int) -> Optional[MethodDef]:
        for m in self.methods:
            if m.call_id == call_id:
                return m
        return None


@dataclass(frozen=True)
class InterfaceDef:
    version_id: str
    services: dict[str, ServiceDef]
    parcelables: dict[str, list[tuple[str, str]]] = field(default_factory=dict)

    def method(self, service: str, name: str) -> Optional[MethodDef]:
        svc = self.services.get(service)
        return None if svc is None else svc.by_name(name)


class InterfaceDefError(ValueError):
    pass


def interface_from_json(doc: dict) -> InterfaceDef:
    services = {}
    for sname, sdoc in doc.get("services", {}).items():
        methods = []
        seen_ids = set()
        for mdoc in sdoc["methods"]:
            m = MethodDef(
                name=mdoc["name"],
                call_id=int(mdoc["call_id"]),
                params=tuple((p[0], p[1]) for p in mdoc.get("params", [])),
                returns=mdoc.get("returns"),
            )
            if m.call_id in seen_ids:
                raise InterfaceDefError(
                    f"service {sname}: duplicate call id {m.call_id}"
                )
            seen_ids.add(m.call_id)
            methods.append(m)
        services[sname] = ServiceDef(sname, tuple(methods))
    return InterfaceDef(
        version_id=doc["version_id"],
        services=services,
        parcelables={
            t: [(f[0], f[1]) for f in fields]
            for t, fields in doc.get("parcelables", {}).items()
        },
    )


def interface_to_json(idef: InterfaceDef) -> dict:
    return {
        "version_id": idef.version_id,
        "services": {
            sname: {
                "methods": [
                    {
                        "name": m.name,
                        "call_id": m.call_id,
                        "params": [list(p) for p in m.params],
                        "returns": m.returns,
                    }
                    for m in svc.methods
                ]
            }
            for sname, svc in idef.services.items()
        },
        "parcelables": {t: [list(f) for f in fs] for t, fs in idef.parcelables.items()},
    }


def load_interface(path) -> InterfaceDef:
    with open(path, "rb") as fh:
        return interface_from_json(json.load(fh))


# --- messages -----------------------------------------------------------------


@dataclass(frozen=True)
class Transaction:
    service_name: str
    call_id: int
    args: bytes  # parcel bytes under the caller's param schema
    method_name: str = ""  # diagnostic only; dispatch is by call id


@dataclass(frozen=True)
class ReplyStatus:
    ok: bool
    exception_kind: Optional[str] = None
    message: Optional[str] = None


@dataclass(frozen=True)
class Reply:
    status: ReplyStatus
    value: bytes = b""  # parcel bytes under the callee's return schema


def ok_reply(value: bytes = b"") -> Reply:
    return Reply(ReplyStatus(True), value)


def exception_reply(kind: str, message: str = "") -> Reply:
    return Reply(ReplyStatus(False, kind, message))


def build_transaction(
    idef: InterfaceDef, service: str, method: str, arg_values: list
) -> Transaction:
    m = idef.method(service, method)
    if m is None:
        raise InterfaceDefError(
            f"{idef.version_id} has no method {service}.{method}"
        )
    return Transaction(
        service_name=service,
        call_id=m.call_id,
        args=wire.encode_parcel(arg_values, m.param_schema, idef.parcelables),
        method_name=method,
    )


# --- dispatch -----------------------------------------------------------------


@dataclass(frozen=True)
class DispatchFault:
    reason: str


DispatchResult = Union[Reply, DispatchFault]

Handler = Callable[[list], Any]  # arg values -> return value (or None)


class ServiceRegistry:
    """Hosts one interface version's services.

    Unknown services/calls, undecodable args, or a caller-declared method
    name disagreeing with the call id all produce a DispatchFault; an app
    receiving a fault crashes, which is exactly the mismatch failure mode
    translation packs exist to prevent.
    """

    def __init__(self, idef: InterfaceDef):
        self.interface = idef
        self.handlers: dict[tuple[str, str], Handler] = {}
        self.call_counts: dict[tuple[str, str], int] = {}

    def register_handler(self, service: str, method: str, handler: Handler):
        self.handlers[(service, method)] = handler

    def calls_to(self, service: str, method: Optional[str] = None) -> int:
        if method is not None:
            return self.call_counts.get((service, method), 0)
        return sum(n for (s, _), n in self.call_counts.items() if s == service)

    def dispatch(self, txn: Transaction) -> DispatchResult:
        svc = self.interface.services.get(txn.service_name)
        if svc is None:
            return DispatchFault(f"NoSuchService:{txn.service_name}")
        m = svc.by_call_id(txn.call_id)
        if m is None:
            name = txn.method_name or f"#{txn.call_id}"
            return DispatchFault(f"NoSuchMethod:{txn.service_name}.{name}")
        if txn.method_name and txn.method_name != m.name:
            return DispatchFault(
                f"CallIdMismatch:{txn.service_name}.{txn.method_name}"
                f"->#{txn.call_id}={m.name}"
            )
        try:
            args = wire.decode_parcel(
                txn.args, m.param_schema, self.interface.parcelables
            )
        except wire.ParcelError as exc:
            return DispatchFault(f"ParcelMismatch:{txn.service_name}.{m.name}:{exc}")

        key = (txn.service_name, m.name)
        self.call_counts[key] = self.call_counts.get(key, 0) + 1
        handler = self.handlers.get(key)
        if handler is not None:
            ret = handler(args)
        else:
            ret = (
                None
                if m.returns is None
                else wire.default_value(m.returns, self.interface.parcelables)
            )
        value = (
            b""
            if m.returns is None
            else wire.encode_parcel([ret], m.return_schema, self.interface.parcelables)
        )
        return Reply(ReplyStatus(True), value)
