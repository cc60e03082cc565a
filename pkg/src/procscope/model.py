"""In-memory object-centric event log model.

A :class:`Log` bundles typed events and objects with their qualified
event-to-object and object-to-object relations. Logs are immutable after
construction: enrichment and every other transformation produce a new value,
so concurrent readers never need locks. Derived indexes are built lazily and
cached on first use.

The object type name ``"process"`` is reserved: enrichment represents each
analyst-defined scope as one object of that type.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from typing import ClassVar

from .errors import NotFoundError

PROCESS_TYPE = "process"

#: Reserved relation qualifiers written by scope enrichment.
IN_SCOPE = "in_scope"
INVOLVES = "involves"
PART_OF = "part_of"

_MIN_MILLIS = -(1 << 62)
_MAX_MILLIS = 1 << 62


@dataclass(frozen=True, order=True)
class Timestamp:
    """Instant with millisecond resolution and a total order.

    Two sentinels bound the domain: ``Timestamp.MIN`` compares below every
    finite value and ``Timestamp.MAX`` above. Object attributes without a
    recorded time carry the MIN sentinel.
    """

    millis: int

    MIN: ClassVar["Timestamp"]
    MAX: ClassVar["Timestamp"]

    @property
    def is_finite(self) -> bool:
        return _MIN_MILLIS < self.millis < _MAX_MILLIS

    @classmethod
    def from_iso(cls, text: str) -> "Timestamp":
        """Parse an ISO-8601 string; naive times are taken as UTC.

        Raises ValueError on anything :func:`datetime.fromisoformat` cannot
        digest (after mapping the ``Z`` suffix, which Python 3.10 lacks).
        """
        s = text.strip()
        if s.endswith(("Z", "z")):
            s = s[:-1] + "+00:00"
        dt = datetime.fromisoformat(s)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        # Whole seconds are exact in float; sub-second handled separately so
        # pre-epoch instants do not truncate toward zero.
        whole = int(dt.replace(microsecond=0).timestamp())
        return cls(whole * 1000 + dt.microsecond // 1000)

    @classmethod
    def from_datetime(cls, dt: datetime) -> "Timestamp":
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return cls(int(dt.timestamp() * 1000))

    def iso(self) -> str:
        """Canonical ISO-8601 UTC form with millisecond precision."""
        if not self.is_finite:
            raise ValueError("sentinel timestamp has no ISO form")
        seconds, ms = divmod(self.millis, 1000)
        dt = datetime.fromtimestamp(seconds, tz=timezone.utc)
        return (
            f"{dt.year:04d}-{dt.month:02d}-{dt.day:02d}"
            f"T{dt.hour:02d}:{dt.minute:02d}:{dt.second:02d}.{ms:03d}Z"
        )

    def __repr__(self) -> str:
        if self.millis <= _MIN_MILLIS:
            return "Timestamp.MIN"
        if self.millis >= _MAX_MILLIS:
            return "Timestamp.MAX"
        return f"Timestamp({self.millis})"


Timestamp.MIN = Timestamp(_MIN_MILLIS)
Timestamp.MAX = Timestamp(_MAX_MILLIS)

#: Attribute values are plain Python scalars tagged by one of four kinds.
AttrValue = str | float | bool | Timestamp

KIND_STRING = "string"
KIND_NUMBER = "number"
KIND_BOOLEAN = "boolean"
KIND_TIMESTAMP = "timestamp"

ALL_KINDS = (KIND_STRING, KIND_NUMBER, KIND_BOOLEAN, KIND_TIMESTAMP)


def value_kind(value: AttrValue) -> str:
    """Classify a value into its attribute kind. bool checked before number."""
    if isinstance(value, bool):
        return KIND_BOOLEAN
    if isinstance(value, (int, float)):
        return KIND_NUMBER
    if isinstance(value, Timestamp):
        return KIND_TIMESTAMP
    if isinstance(value, str):
        return KIND_STRING
    raise TypeError(f"unsupported attribute value type: {type(value).__name__}")


@dataclass(frozen=True)
class Event:
    id: str
    type: str
    time: Timestamp
    attrs: dict[str, AttrValue] = field(default_factory=dict)


@dataclass(frozen=True)
class ObjectEntity:
    """An object with time-indexed attribute values.

    Each attribute maps to a tuple of ``(timestamp, value)`` pairs, sorted
    ascending with unique timestamps. A value that was never timestamped sits
    at ``Timestamp.MIN``.
    """

    id: str
    type: str
    attrs: dict[str, tuple[tuple[Timestamp, AttrValue], ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class Relation:
    """One qualified relation triple. E2O: event -> object. O2O: object -> object."""

    source: str
    qualifier: str
    target: str


@dataclass(frozen=True)
class Violation:
    code: str
    where: str
    detail: str = ""
    pos: tuple[int, int] | None = None

    def __str__(self) -> str:
        loc = f" at {self.pos[0]}:{self.pos[1]}" if self.pos else ""
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.code} ({self.where}){loc}{tail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


@dataclass(frozen=True)
class ProcessCheck:
    """Whether one process-typed object meets both relation requirements."""

    object_id: str
    has_e2o: bool
    has_o2o: bool

    @property
    def qualifies(self) -> bool:
        return self.has_e2o and self.has_o2o

    @property
    def problems(self) -> tuple[str, ...]:
        out = []
        if not self.has_e2o:
            out.append("missing-e2o")
        if not self.has_o2o:
            out.append("missing-o2o")
        return tuple(out)


@dataclass(frozen=True)
class PocelReport:
    is_pocel: bool
    checks: tuple[ProcessCheck, ...]

    @property
    def qualifying(self) -> tuple[str, ...]:
        return tuple(c.object_id for c in self.checks if c.qualifies)


@dataclass(frozen=True, eq=True)
class Log:
    """Full event log value: type registries, entities, and relations.

    ``event_types`` and ``object_types`` map a type name to its attribute
    schema (attribute name -> kind). The same attribute name under two types
    is two distinct attributes.
    """

    event_types: dict[str, dict[str, str]]
    object_types: dict[str, dict[str, str]]
    events: dict[str, Event]
    objects: dict[str, ObjectEntity]
    e2o: frozenset[Relation]
    o2o: frozenset[Relation]

    @classmethod
    def empty(cls) -> "Log":
        return cls({}, {}, {}, {}, frozenset(), frozenset())

    # ---- derived indexes (built once; the log itself never mutates) ----

    @cached_property
    def events_by_object(self) -> dict[str, tuple[str, ...]]:
        """Object id -> event ids related via E2O, in (time, id) order."""
        buckets: dict[str, list[str]] = {}
        for rel in self.e2o:
            buckets.setdefault(rel.target, []).append(rel.source)
        out: dict[str, tuple[str, ...]] = {}
        for oid, eids in buckets.items():
            unique = sorted(set(eids), key=self._event_order_key)
            out[oid] = tuple(unique)
        return out

    @cached_property
    def relations_by_event(self) -> dict[str, tuple[tuple[str, str], ...]]:
        """Event id -> (qualifier, object id) pairs in deterministic order."""
        buckets: dict[str, list[tuple[str, str]]] = {}
        for rel in self.e2o:
            buckets.setdefault(rel.source, []).append((rel.qualifier, rel.target))
        return {eid: tuple(sorted(pairs)) for eid, pairs in buckets.items()}

    @cached_property
    def events_by_type(self) -> dict[str, tuple[str, ...]]:
        buckets: dict[str, list[str]] = {}
        for ev in self.events.values():
            buckets.setdefault(ev.type, []).append(ev.id)
        return {t: tuple(sorted(ids)) for t, ids in buckets.items()}

    @cached_property
    def objects_by_type(self) -> dict[str, tuple[str, ...]]:
        buckets: dict[str, list[str]] = {}
        for obj in self.objects.values():
            buckets.setdefault(obj.type, []).append(obj.id)
        return {t: tuple(sorted(ids)) for t, ids in buckets.items()}

    @cached_property
    def process_ids(self) -> tuple[str, ...]:
        return self.objects_by_type.get(PROCESS_TYPE, ())

    def _event_order_key(self, eid: str) -> tuple[int, str]:
        # Timestamp ties break by lexicographic event id for determinism.
        ev = self.events.get(eid)
        return (ev.time.millis if ev else 0, eid)


def validate_log(log: Log) -> ValidationReport:
    """Check every well-formedness rule; violations are data, not faults.

    Pure and idempotent: the same log always yields the same report.
    """
    found: list[Violation] = []

    event_ids = set(log.events)
    object_ids = set(log.objects)
    for shared in sorted(event_ids & object_ids):
        found.append(Violation("id-collision", f"id {shared}", "used by both an event and an object"))

    for eid, ev in sorted(log.events.items()):
        where = f"event {eid}"
        if not eid:
            found.append(Violation("empty-id", where))
        if eid != ev.id:
            found.append(Violation("id-mismatch", where, f"keyed {eid!r} but id is {ev.id!r}"))
        schema = log.event_types.get(ev.type)
        if schema is None:
            found.append(Violation("unknown-event-type", where, f"type {ev.type!r} not registered"))
            continue
        for name, value in sorted(ev.attrs.items()):
            kind = schema.get(name)
            if kind is None:
                found.append(Violation("unknown-event-attribute", where, f"attribute {name!r} not in schema of {ev.type!r}"))
            elif value_kind(value) != kind:
                found.append(Violation("attribute-kind-mismatch", where, f"{name!r} expects {kind}, got {value_kind(value)}"))

    for oid, obj in sorted(log.objects.items()):
        where = f"object {oid}"
        if not oid:
            found.append(Violation("empty-id", where))
        if oid != obj.id:
            found.append(Violation("id-mismatch", where, f"keyed {oid!r} but id is {obj.id!r}"))
        schema = log.object_types.get(obj.type)
        if schema is None:
            found.append(Violation("unknown-object-type", where, f"type {obj.type!r} not registered"))
            continue
        for name, series in sorted(obj.attrs.items()):
            kind = schema.get(name)
            if kind is None:
                found.append(Violation("unknown-object-attribute", where, f"attribute {name!r} not in schema of {obj.type!r}"))
                continue
            times = [t for t, _ in series]
            if times != sorted(times) or len(set(times)) != len(times):
                found.append(Violation("unsorted-object-attribute", where, f"{name!r} values must be ascending with unique timestamps"))
            for t, value in series:
                if value_kind(value) != kind:
                    found.append(Violation("attribute-kind-mismatch", where, f"{name!r} expects {kind}, got {value_kind(value)}"))
                    break

    for rel in sorted(log.e2o, key=lambda r: (r.source, r.qualifier, r.target)):
        where = f"e2o ({rel.source}, {rel.qualifier}, {rel.target})"
        if rel.source not in log.events:
            found.append(Violation("dangling-e2o", where, f"event {rel.source!r} does not exist"))
        if rel.target not in log.objects:
            found.append(Violation("dangling-e2o", where, f"object {rel.target!r} does not exist"))

    for rel in sorted(log.o2o, key=lambda r: (r.source, r.qualifier, r.target)):
        where = f"o2o ({rel.source}, {rel.qualifier}, {rel.target})"
        if rel.source not in log.objects:
            found.append(Violation("dangling-o2o", where, f"object {rel.source!r} does not exist"))
        if rel.target not in log.objects:
            found.append(Violation("dangling-o2o", where, f"object {rel.target!r} does not exist"))
        if rel.source == rel.target:
            found.append(Violation("self-o2o", where, "source and target must differ"))

    return ValidationReport(tuple(found))


def is_pocel(log: Log) -> PocelReport:
    """Scope-enriched verdict: some process object has an incoming E2O
    relation and an outgoing O2O relation to a different object."""
    e2o_targets = {rel.target for rel in log.e2o}
    o2o_out = {rel.source for rel in log.o2o if rel.source != rel.target}
    checks = tuple(
        ProcessCheck(pid, has_e2o=pid in e2o_targets, has_o2o=pid in o2o_out)
        for pid in log.process_ids
    )
    return PocelReport(is_pocel=any(c.qualifies for c in checks), checks=checks)


def events_of_object(log: Log, oid: str) -> list[Event]:
    """All events E2O-related to ``oid``, ascending by (time, event id)."""
    if oid not in log.objects:
        raise NotFoundError(f"unknown object id {oid!r}", object_id=oid)
    return [log.events[eid] for eid in log.events_by_object.get(oid, ())]


def objects_of_event(log: Log, eid: str) -> list[tuple[str, ObjectEntity]]:
    """All (qualifier, object) pairs of an event, in (qualifier, id) order."""
    if eid not in log.events:
        raise NotFoundError(f"unknown event id {eid!r}", event_id=eid)
    return [(q, log.objects[oid]) for q, oid in log.relations_by_event.get(eid, ())]
