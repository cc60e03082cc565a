"""Build an object-centric event log in memory, validate it, and query it.

A log couples four registries: event types, object types, the entities
themselves, and the qualified relations between them. Everything is
immutable; analysis functions are plain reads.
"""
from procscope import (
    Event,
    Log,
    ObjectEntity,
    Relation,
    Timestamp,
    events_of_object,
    export_json,
    import_json,
    is_pocel,
    objects_of_event,
    validate_log,
)

t = lambda h: Timestamp.from_iso(f"2024-01-15T{h:02d}:00:00Z")

log = Log(
    event_types={"place": {}, "pick": {}, "ship": {}},
    object_types={"order": {}, "item": {"weight": "number"}},
    events={
        "e1": Event("e1", "place", t(9)),
        "e2": Event("e2", "pick", t(10)),
        "e3": Event("e3", "pick", t(11)),
        "e4": Event("e4", "ship", t(12)),
        "e5": Event("e5", "pick", t(13)),
    },
    objects={
        "o1": ObjectEntity("o1", "order"),
        "i1": ObjectEntity("i1", "item", {"weight": ((t(8), 5.0),)}),
        "i2": ObjectEntity("i2", "item", {"weight": ((t(8), 12.0),)}),
    },
    e2o=frozenset({
        Relation("e1", "rel", "o1"),
        Relation("e2", "rel", "o1"), Relation("e2", "rel", "i1"),
        Relation("e3", "rel", "o1"), Relation("e3", "rel", "i2"),
        Relation("e4", "rel", "i1"), Relation("e4", "rel", "i2"),
        Relation("e5", "rel", "i1"),
    }),
    o2o=frozenset(),
)

report = validate_log(log)
print("well-formed:", report.ok)

# The validator reports problems as data instead of raising.
broken = Log(
    log.event_types, log.object_types, log.events, log.objects,
    log.e2o | {Relation("e1", "rel", "ghost")}, log.o2o,
)
for violation in validate_log(broken).violations:
    print("found:", violation)

print("\ntimeline of order o1:", [e.id for e in events_of_object(log, "o1")])
print("objects of event e4:", [(q, o.id) for q, o in objects_of_event(log, "e4")])
print("scope-enriched yet:", is_pocel(log).is_pocel)

# Round-trip through the OCEL 2.0 JSON interchange form.
document = export_json(log)
assert import_json(document) == log
print("\nJSON round trip ok,", len(document), "bytes, deterministic:",
      export_json(log) == document)
