"""Deterministic synthetic logistics log for demos and end-to-end checks.

The generated log tells one story per customer order: the order is placed
and confirmed, a transport document is issued, goods are collected and
packed into a container, the container is trucked to a terminal, a forklift
stages it for export, and it is finally scheduled and loaded onto a
long-distance carrier. Forklifts shuttle between the yard and the terminal,
so after staging a container at the terminal they return empty.

Four scope rulesets partition the events by type into order management,
goods management, transportation management and export management. Because
every event type belongs to exactly one scope, the generator knows the
exact per-scope event counts ahead of enrichment, and it knows which
handover edges the execution graph must contain — including the
transportation/export loop driven by the returning forklifts.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .model import Event, Log, ObjectEntity, Relation, Timestamp

SCOPE_RULES = """\
SCOPE "Order Management" :
  INCLUDE {(place_order), (confirm_order), (issue_transport_document)} ;
SCOPE "Goods Management" :
  INCLUDE {(order_empty_container), (collect_goods), (pack_container)} ;
SCOPE "Transportation Management" :
  INCLUDE {(depart_warehouse), (arrive_terminal), (unload_truck), (pickup_at_yard), (return_to_yard)} ;
SCOPE "Export Management" :
  INCLUDE {(stage_container), (export_clearance), (schedule_export), (load_carrier)} ;
"""

_SCOPE_OF_EVENT_TYPE = {
    "place_order": "Order Management",
    "confirm_order": "Order Management",
    "issue_transport_document": "Order Management",
    "order_empty_container": "Goods Management",
    "collect_goods": "Goods Management",
    "pack_container": "Goods Management",
    "depart_warehouse": "Transportation Management",
    "arrive_terminal": "Transportation Management",
    "unload_truck": "Transportation Management",
    "pickup_at_yard": "Transportation Management",
    "return_to_yard": "Transportation Management",
    "stage_container": "Export Management",
    "export_clearance": "Export Management",
    "schedule_export": "Export Management",
    "load_carrier": "Export Management",
}

#: Edges that must appear in the execution graph, and no others.
EXPECTED_EDGES = frozenset({
    ("Order Management", "Goods Management"),            # transport documents
    ("Goods Management", "Transportation Management"),   # containers
    ("Goods Management", "Export Management"),           # handling units
    ("Transportation Management", "Export Management"),  # containers + forklifts
    ("Export Management", "Transportation Management"),  # forklifts returning empty
})


@dataclass
class LogisticsFixture:
    log: Log
    scope_text: str
    expected_event_counts: dict[str, int]
    expected_edges: frozenset[tuple[str, str]] = EXPECTED_EDGES
    event_total: int = 0


@dataclass
class _Builder:
    rng: random.Random
    events: dict[str, Event] = field(default_factory=dict)
    objects: dict[str, ObjectEntity] = field(default_factory=dict)
    e2o: set[Relation] = field(default_factory=set)
    counts: dict[str, int] = field(default_factory=dict)
    clock: int = 0

    def obj(self, oid: str, otype: str, attrs: dict | None = None) -> str:
        series = {
            name: ((Timestamp.MIN, value),) for name, value in (attrs or {}).items()
        }
        self.objects[oid] = ObjectEntity(oid, otype, series)
        return oid

    def event(self, etype: str, related: list[str], attrs: dict | None = None) -> None:
        self.clock += self.rng.randint(60_000, 540_000)  # one to nine minutes
        eid = f"e{len(self.events) + 1:06d}"
        self.events[eid] = Event(eid, etype, Timestamp(self.clock), dict(attrs or {}))
        for oid in related:
            self.e2o.add(Relation(eid, "rel", oid))
        scope = _SCOPE_OF_EVENT_TYPE[etype]
        self.counts[scope] = self.counts.get(scope, 0) + 1


def generate_logistics_log(seed: int = 42, orders: int = 480, units_per_order: int = 3) -> LogisticsFixture:
    """Build the fixture; same seed, same log, same ground truth."""
    rng = random.Random(seed)
    b = _Builder(rng)
    b.clock = Timestamp.from_iso("2024-03-01T06:00:00Z").millis

    trucks = [b.obj(f"truck{i:02d}", "truck") for i in range(1, 41)]
    forklifts = [b.obj(f"forklift{i:02d}", "forklift") for i in range(1, 25)]
    carriers = [b.obj(f"carrier{i:02d}", "carrier") for i in range(1, 13)]

    for k in range(1, orders + 1):
        order = b.obj(f"order{k:04d}", "order", {"priority": float(rng.randint(1, 3))})
        doc = b.obj(f"tdoc{k:04d}", "transport_document")
        container = b.obj(f"cont{k:04d}", "container")
        units = [
            b.obj(f"hu{k:04d}_{u}", "handling_unit", {"weight": round(rng.uniform(2.0, 80.0), 1)})
            for u in range(1, units_per_order + 1)
        ]
        truck = trucks[(k - 1) % len(trucks)]
        forklift = forklifts[(k - 1) % len(forklifts)]
        carrier = carriers[(k - 1) % len(carriers)]

        b.event("place_order", [order])
        b.event("confirm_order", [order])
        b.event("issue_transport_document", [order, doc])

        b.event("order_empty_container", [doc, container])
        for unit in units:
            b.event("collect_goods", [unit, doc])
        for unit in units:
            b.event("pack_container", [unit, container])

        b.event("depart_warehouse", [container, truck])
        b.event("arrive_terminal", [container, truck])
        b.event("unload_truck", [container, truck])
        b.event("pickup_at_yard", [container, forklift])
        b.event("stage_container", [container, forklift])
        b.event("return_to_yard", [forklift])

        for unit in units:
            b.event("export_clearance", [unit])
        b.event("schedule_export", [container, carrier])
        b.event("load_carrier", [container, carrier], {"mode": rng.choice(["ship", "train"])})

    log = Log(
        event_types={
            "place_order": {}, "confirm_order": {}, "issue_transport_document": {},
            "order_empty_container": {}, "collect_goods": {}, "pack_container": {},
            "depart_warehouse": {}, "arrive_terminal": {}, "unload_truck": {},
            "pickup_at_yard": {}, "return_to_yard": {}, "stage_container": {},
            "export_clearance": {}, "schedule_export": {},
            "load_carrier": {"mode": "string"},
        },
        object_types={
            "order": {"priority": "number"},
            "transport_document": {},
            "handling_unit": {"weight": "number"},
            "container": {},
            "truck": {},
            "forklift": {},
            "carrier": {},
        },
        events=b.events,
        objects=b.objects,
        e2o=frozenset(b.e2o),
        o2o=frozenset(),
    )
    return LogisticsFixture(
        log=log,
        scope_text=SCOPE_RULES,
        expected_event_counts=dict(b.counts),
        event_total=len(b.events),
    )
