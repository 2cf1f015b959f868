"""Declarative override descriptions for translation packs.

Packs for removed or reshaped calls usually need a small amount of
hand-written glue. The JSON form lets fixtures and the CLI describe that
glue without shipping code:

    {"service": "settings", "method": "get_animation_scale",
     "mock": {"constant": 1}}
    {"service": "net", "method": "is_available",
     "adapter": {"require_param_equals": {"param": "ifname", "value": "eth0"},
                 "exception": "InvalidInterface"}}

A `mock` answers the call locally in the app's own version. An `adapter`
reshapes arguments toward the target version; `require_param_equals`
accepts the call only when the named parameter carries the given value
(the dropped parameter's implied default), and raises the configured
exception kind otherwise.
"""

from __future__ import annotations

import json

from . import wire
from .interfaces import InterfaceDef
from .translate import AdaptError, Override, OverrideError


def _constant_mock(value):
    def mock(args):
        return value

    return mock


def _void_mock(args):
    return None


def _require_param_adapter(cond: dict, exception: str, from_method, to_method, to_def):
    pnames = [name for name, _ in from_method.params]
    if cond["param"] not in pnames:
        raise OverrideError(
            f"adapter condition names unknown parameter '{cond['param']}'"
        )
    idx = pnames.index(cond["param"])
    expected = cond["value"]

    def adapter(args):
        if args[idx] != expected:
            raise AdaptError(exception, f"{cond['param']}={args[idx]!r}")
        by_name = dict(zip(pnames, args))
        out = []
        for pname, ptype in to_method.params:
            if pname in by_name:
                out.append(by_name[pname])
            else:
                out.append(wire.default_value(ptype, to_def.parcelables))
        return out

    return adapter


def override_from_json(
    doc: dict, from_def: InterfaceDef, to_def: InterfaceDef
) -> tuple[tuple[str, str], Override]:
    service, method = doc["service"], doc["method"]
    from_m = from_def.method(service, method)
    if from_m is None:
        raise OverrideError(f"override targets unknown method {service}.{method}")
    name = doc.get("name", f"{service}.{method}")
    if "mock" in doc:
        mdoc = doc["mock"]
        if mdoc.get("void"):
            return (service, method), Override(name, mock=_void_mock)
        if "constant" in mdoc:
            return (service, method), Override(name, mock=_constant_mock(mdoc["constant"]))
        raise OverrideError(f"unsupported mock description: {mdoc}")
    if "adapter" in doc:
        adoc = doc["adapter"]
        to_svc = to_def.services.get(service)
        to_m = to_svc.by_name(method) if to_svc is not None else None
        if to_m is None:
            raise OverrideError(
                f"adapter override for {service}.{method} has no target-version method"
            )
        if "require_param_equals" in adoc:
            adapter = _require_param_adapter(
                adoc["require_param_equals"], adoc.get("exception", "AdaptRejected"),
                from_m, to_m, to_def,
            )
            return (service, method), Override(name, adapter=adapter)
        raise OverrideError(f"unsupported adapter description: {adoc}")
    raise OverrideError(f"override for {service}.{method} has neither mock nor adapter")


def overrides_from_json(
    docs: list, from_def: InterfaceDef, to_def: InterfaceDef
) -> dict[tuple[str, str], Override]:
    out = {}
    for doc in docs:
        key, ov = override_from_json(doc, from_def, to_def)
        if key in out:
            raise OverrideError(f"duplicate override for {key[0]}.{key[1]}")
        out[key] = ov
    return out


def load_overrides(path, from_def: InterfaceDef, to_def: InterfaceDef):
    with open(path, "rb") as fh:
        return overrides_from_json(json.load(fh), from_def, to_def)
