"""OCEL 2.0 JSON interchange: import and deterministic export.

Documents have four top-level arrays: ``objectTypes``, ``eventTypes``,
``objects`` and ``events``. Only the JSON serialization is supported; the
relational and XML forms of the standard are out of scope here.

Import normalizes timestamps to UTC, deduplicates repeated relation triples
(the relations are sets) with a logged warning, and rejects anything that
would not validate as a well-formed log. Object attribute entries without a
``time`` field are static values and sit at the minimum timestamp sentinel;
export writes them back without a ``time`` field, so import/export round-trip
exactly.

Export is byte-deterministic: types sorted by name, entities by id,
relationships by (qualifier, target), attributes by name (and time).
"""
from __future__ import annotations

import json
import logging
from typing import Any

from .errors import OcelModelError, OcelParseError, OcelSchemaError
from .model import (
    ALL_KINDS,
    AttrValue,
    Event,
    KIND_BOOLEAN,
    KIND_NUMBER,
    KIND_STRING,
    KIND_TIMESTAMP,
    Log,
    ObjectEntity,
    Relation,
    Timestamp,
    validate_log,
    value_kind,
)

log_ = logging.getLogger(__name__)

#: On-disk attribute type names, canonical first, aliases after.
_KIND_FROM_JSON = {
    "string": KIND_STRING,
    "float": KIND_NUMBER,
    "double": KIND_NUMBER,
    "integer": KIND_NUMBER,
    "int": KIND_NUMBER,
    "number": KIND_NUMBER,
    "boolean": KIND_BOOLEAN,
    "bool": KIND_BOOLEAN,
    "time": KIND_TIMESTAMP,
    "date": KIND_TIMESTAMP,
    "datetime": KIND_TIMESTAMP,
    "timestamp": KIND_TIMESTAMP,
}

_KIND_TO_JSON = {
    KIND_STRING: "string",
    KIND_NUMBER: "float",
    KIND_BOOLEAN: "boolean",
    KIND_TIMESTAMP: "time",
}

_TOP_KEYS = ("objectTypes", "eventTypes", "objects", "events")


def _fail(path: str, message: str) -> OcelSchemaError:
    return OcelSchemaError(f"{message} at {path}", path=path)


def _require(raw: Any, key: str, cls: type, path: str) -> Any:
    if not isinstance(raw, dict) or key not in raw:
        raise _fail(f"{path}.{key}", f"missing key {key!r}")
    value = raw[key]
    if not isinstance(value, cls):
        raise _fail(f"{path}.{key}", f"expected {cls.__name__}, got {type(value).__name__}")
    return value


def _warn_unknown_keys(raw: dict, known: tuple[str, ...], path: str) -> None:
    extra = set(raw) - set(known)
    if extra:
        log_.warning("ignoring unknown keys %s at %s", sorted(extra), path)


def _parse_types(raw: Any, path: str) -> dict[str, dict[str, str]]:
    if not isinstance(raw, list):
        raise _fail(path, "expected an array")
    out: dict[str, dict[str, str]] = {}
    for i, entry in enumerate(raw):
        here = f"{path}[{i}]"
        name = _require(entry, "name", str, here)
        if name in out:
            raise _fail(here, f"duplicate type {name!r}")
        _warn_unknown_keys(entry, ("name", "attributes"), here)
        schema: dict[str, str] = {}
        for j, attr in enumerate(entry.get("attributes", [])):
            attr_path = f"{here}.attributes[{j}]"
            attr_name = _require(attr, "name", str, attr_path)
            declared = _require(attr, "type", str, attr_path)
            kind = _KIND_FROM_JSON.get(declared.lower())
            if kind is None:
                raise _fail(f"{attr_path}.type", f"unknown attribute type {declared!r}")
            schema[attr_name] = kind
        out[name] = schema
    return out


def _parse_value(raw: Any, kind: str, path: str) -> AttrValue:
    if kind == KIND_STRING:
        if not isinstance(raw, str):
            raise _fail(path, f"expected string, got {type(raw).__name__}")
        return raw
    if kind == KIND_NUMBER:
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise _fail(path, f"expected number, got {type(raw).__name__}")
        return float(raw)
    if kind == KIND_BOOLEAN:
        if not isinstance(raw, bool):
            raise _fail(path, f"expected boolean, got {type(raw).__name__}")
        return raw
    if not isinstance(raw, str):
        raise _fail(path, f"expected ISO-8601 string, got {type(raw).__name__}")
    try:
        return Timestamp.from_iso(raw)
    except ValueError as exc:
        raise _fail(path, f"bad timestamp {raw!r}: {exc}")


def _parse_time(raw: Any, path: str) -> Timestamp:
    if not isinstance(raw, str):
        raise _fail(path, f"expected ISO-8601 string, got {type(raw).__name__}")
    try:
        return Timestamp.from_iso(raw)
    except ValueError as exc:
        raise _fail(path, f"bad timestamp {raw!r}: {exc}")


def _first_violation_error(log: Log) -> OcelModelError | None:
    report = validate_log(log)
    if report.ok:
        return None
    first = report.violations[0]
    return OcelModelError(f"log is not well-formed: {first}", report=report)


def import_json(doc: str | bytes) -> Log:
    """Parse an OCEL 2.0 JSON document into a validated log."""
    try:
        raw = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise OcelParseError(f"malformed JSON: {exc.msg}", offset=exc.pos) from exc
    if not isinstance(raw, dict):
        raise _fail("$", "top level must be an object")
    for key in _TOP_KEYS:
        if key not in raw:
            raise _fail("$", f"missing top-level key {key!r}")
    _warn_unknown_keys(raw, _TOP_KEYS, "$")

    object_types = _parse_types(raw["objectTypes"], "objectTypes")
    event_types = _parse_types(raw["eventTypes"], "eventTypes")

    objects: dict[str, ObjectEntity] = {}
    o2o: set[Relation] = set()
    raw_objects = raw["objects"]
    if not isinstance(raw_objects, list):
        raise _fail("objects", "expected an array")
    for i, entry in enumerate(raw_objects):
        here = f"objects[{i}]"
        oid = _require(entry, "id", str, here)
        otype = _require(entry, "type", str, here)
        _warn_unknown_keys(entry, ("id", "type", "attributes", "relationships"), here)
        if oid in objects:
            raise OcelModelError(f"duplicate object id {oid!r}")
        schema = object_types.get(otype, {})
        series: dict[str, list[tuple[Timestamp, AttrValue]]] = {}
        for j, attr in enumerate(entry.get("attributes", [])):
            attr_path = f"{here}.attributes[{j}]"
            name = _require(attr, "name", str, attr_path)
            raw_time = attr.get("time")
            time = Timestamp.MIN if raw_time is None else _parse_time(raw_time, f"{attr_path}.time")
            # Unregistered attributes parse by value shape; validation reports them.
            kind = schema.get(name) or _guess_kind(attr.get("value"))
            value = _parse_value(attr.get("value"), kind, f"{attr_path}.value")
            series.setdefault(name, []).append((time, value))
        attrs = {
            name: tuple(sorted(values, key=lambda tv: tv[0].millis))
            for name, values in series.items()
        }
        objects[oid] = ObjectEntity(oid, otype, attrs)
        for j, rel in enumerate(entry.get("relationships", [])):
            rel_path = f"{here}.relationships[{j}]"
            target = _require(rel, "objectId", str, rel_path)
            qualifier = _require(rel, "qualifier", str, rel_path)
            triple = Relation(oid, qualifier, target)
            if triple in o2o:
                log_.warning("dropping duplicate O2O triple at %s", rel_path)
            o2o.add(triple)

    events: dict[str, Event] = {}
    e2o: set[Relation] = set()
    raw_events = raw["events"]
    if not isinstance(raw_events, list):
        raise _fail("events", "expected an array")
    for i, entry in enumerate(raw_events):
        here = f"events[{i}]"
        eid = _require(entry, "id", str, here)
        etype = _require(entry, "type", str, here)
        _warn_unknown_keys(entry, ("id", "type", "time", "attributes", "relationships"), here)
        if eid in events:
            raise OcelModelError(f"duplicate event id {eid!r}")
        time = _parse_time(_require(entry, "time", str, here), f"{here}.time")
        schema = event_types.get(etype, {})
        attrs: dict[str, AttrValue] = {}
        for j, attr in enumerate(entry.get("attributes", [])):
            attr_path = f"{here}.attributes[{j}]"
            name = _require(attr, "name", str, attr_path)
            kind = schema.get(name) or _guess_kind(attr.get("value"))
            attrs[name] = _parse_value(attr.get("value"), kind, f"{attr_path}.value")
        events[eid] = Event(eid, etype, time, attrs)
        for j, rel in enumerate(entry.get("relationships", [])):
            rel_path = f"{here}.relationships[{j}]"
            target = _require(rel, "objectId", str, rel_path)
            qualifier = _require(rel, "qualifier", str, rel_path)
            triple = Relation(eid, qualifier, target)
            if triple in e2o:
                log_.warning("dropping duplicate E2O triple at %s", rel_path)
            e2o.add(triple)

    log = Log(
        event_types=event_types,
        object_types=object_types,
        events=events,
        objects=objects,
        e2o=frozenset(e2o),
        o2o=frozenset(o2o),
    )
    error = _first_violation_error(log)
    if error is not None:
        raise error
    return log


def _guess_kind(raw: Any) -> str:
    if isinstance(raw, bool):
        return KIND_BOOLEAN
    if isinstance(raw, (int, float)):
        return KIND_NUMBER
    return KIND_STRING


def _value_to_json(value: AttrValue) -> Any:
    if isinstance(value, Timestamp):
        return value.iso()
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        return float(value)
    return value


def _types_to_json(types: dict[str, dict[str, str]]) -> list[dict[str, Any]]:
    return [
        {
            "name": name,
            "attributes": [
                {"name": attr, "type": _KIND_TO_JSON[kind]}
                for attr, kind in sorted(schema.items())
            ],
        }
        for name, schema in sorted(types.items())
    ]


def export_json(log: Log) -> str:
    """Serialize a log deterministically; fails on an invalid log."""
    error = _first_violation_error(log)
    if error is not None:
        raise error

    o2o_by_source: dict[str, list[Relation]] = {}
    for rel in log.o2o:
        o2o_by_source.setdefault(rel.source, []).append(rel)

    objects = []
    for oid in sorted(log.objects):
        obj = log.objects[oid]
        attributes = []
        for name in sorted(obj.attrs):
            for time, value in obj.attrs[name]:
                entry: dict[str, Any] = {"name": name}
                if time != Timestamp.MIN:
                    entry["time"] = time.iso()
                entry["value"] = _value_to_json(value)
                attributes.append(entry)
        relationships = [
            {"objectId": rel.target, "qualifier": rel.qualifier}
            for rel in sorted(
                o2o_by_source.get(oid, []), key=lambda r: (r.qualifier, r.target)
            )
        ]
        objects.append({
            "id": oid,
            "type": obj.type,
            "attributes": attributes,
            "relationships": relationships,
        })

    e2o_by_source: dict[str, list[Relation]] = {}
    for rel in log.e2o:
        e2o_by_source.setdefault(rel.source, []).append(rel)

    events = []
    for eid in sorted(log.events):
        ev = log.events[eid]
        events.append({
            "id": eid,
            "type": ev.type,
            "time": ev.time.iso(),
            "attributes": [
                {"name": name, "value": _value_to_json(ev.attrs[name])}
                for name in sorted(ev.attrs)
            ],
            "relationships": [
                {"objectId": rel.target, "qualifier": rel.qualifier}
                for rel in sorted(
                    e2o_by_source.get(eid, []), key=lambda r: (r.qualifier, r.target)
                )
            ],
        })

    document = {
        "objectTypes": _types_to_json(log.object_types),
        "eventTypes": _types_to_json(log.event_types),
        "objects": objects,
        "events": events,
    }
    return json.dumps(document, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
