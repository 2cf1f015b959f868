"""Parcel wire codec.

A parcel is an ordered payload of typed values serialized against a schema.
Wire format (bit-exact, little-endian):

    i32     4 bytes, signed two's complement
    i64     8 bytes, signed two's complement
    bool    1 byte, 0x00 or 0x01
    str     u32 byte length + UTF-8 bytes
    bytes   u32 length + raw bytes
    token   8 bytes, unsigned handle (opaque; passes through untranslated)
    parcel:<Type>  u32 length + nested parcel encoded per <Type>'s field schema

Decoding requires the writer's schema; trailing bytes and truncation are
decode errors carrying the byte offset.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Any, Optional

PRIMITIVES = ("i32", "i64", "bool", "str", "bytes", "token")

# schema: ordered list of (field_name, wire_type) pairs
FieldSchema = list[tuple[str, str]]


class ParcelError(ValueError):
    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (offset {offset})"
        super().__init__(message)


def is_parcel_type(wire_type: str) -> bool:
    return wire_type.startswith("parcel:")


def parcel_type_name(wire_type: str) -> str:
    return wire_type.split(":", 1)[1]


def default_value(wire_type: str, parcelables: dict[str, FieldSchema]) -> Any:
    if wire_type in ("i32", "i64", "token"):
        return 0
    if wire_type == "bool":
        return False
    if wire_type == "str":
        return ""
    if wire_type == "bytes":
        return b""
    if is_parcel_type(wire_type):
        schema = parcelables[parcel_type_name(wire_type)]
        return {name: default_value(t, parcelables) for name, t in schema}
    raise ParcelError(f"unknown wire type '{wire_type}'")


def _encode_value(value, wire_type: str, parcelables) -> bytes:
    try:
        if wire_type == "i32":
            return struct.pack("<i", value)
        if wire_type == "i64":
            return struct.pack("<q", value)
        if wire_type == "bool":
            return b"\x01" if value else b"\x00"
        if wire_type == "str":
            raw = value.encode("utf-8")
            return struct.pack("<I", len(raw)) + raw
        if wire_type == "bytes":
            return struct.pack("<I", len(value)) + bytes(value)
        if wire_type == "token":
            return struct.pack("<Q", value)
    except (struct.error, AttributeError, TypeError) as exc:
        raise ParcelError(f"value {value!r} does not conform to '{wire_type}': {exc}")
    if is_parcel_type(wire_type):
        name = parcel_type_name(wire_type)
        if name not in parcelables:
            raise ParcelError(f"unknown parcelable type '{name}'")
        nested = encode_parcel(
            [value[f] for f, _ in parcelables[name]], parcelables[name], parcelables
        )
        return struct.pack("<I", len(nested)) + nested
    raise ParcelError(f"unknown wire type '{wire_type}'")


def encode_parcel(values: list, schema: FieldSchema, parcelables: Optional[dict] = None) -> bytes:
    parcelables = parcelables or {}
    if len(values) != len(schema):
        raise ParcelError(
            f"expected {len(schema)} values for schema, got {len(values)}"
        )
    return b"".join(
        _encode_value(v, t, parcelables) for v, (_, t) in zip(values, schema)
    )


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ParcelError(
                f"truncated parcel: need {n} bytes, have {len(self.data) - self.pos}",
                self.pos,
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out


def _decode_value(r: _Reader, wire_type: str, parcelables):
    if wire_type == "i32":
        return struct.unpack("<i", r.take(4))[0]
    if wire_type == "i64":
        return struct.unpack("<q", r.take(8))[0]
    if wire_type == "bool":
        b = r.take(1)[0]
        if b not in (0, 1):
            raise ParcelError(f"invalid bool byte {b:#x}", r.pos - 1)
        return bool(b)
    if wire_type == "str":
        n = struct.unpack("<I", r.take(4))[0]
        raw = r.take(n)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParcelError(f"invalid UTF-8 in string: {exc}", r.pos - n)
    if wire_type == "bytes":
        n = struct.unpack("<I", r.take(4))[0]
        return r.take(n)
    if wire_type == "token":
        return struct.unpack("<Q", r.take(8))[0]
    if is_parcel_type(wire_type):
        name = parcel_type_name(wire_type)
        if name not in parcelables:
            raise ParcelError(f"unknown parcelable type '{name}'", r.pos)
        n = struct.unpack("<I", r.take(4))[0]
        nested = r.take(n)
        vals = decode_parcel(nested, parcelables[name], parcelables)
        return {f: v for (f, _), v in zip(parcelables[name], vals)}
    raise ParcelError(f"unknown wire type '{wire_type}'", r.pos)


def decode_parcel(data: bytes, schema: FieldSchema, parcelables: Optional[dict] = None) -> list:
    parcelables = parcelables or {}
    r = _Reader(data)
    values = [_decode_value(r, t, parcelables) for _, t in schema]
    if r.pos != len(data):
        raise ParcelError(
            f"trailing bytes after parcel: {len(data) - r.pos} left", r.pos
        )
    return values
