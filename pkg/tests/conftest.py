"""Shared fixtures.

``sample_a`` is the hand-built five-event order/item log used throughout the
suite: o1 is an order, i1/i2 are items (weights 5 and 12), events are
e1:place{o1}, e2:pick{o1,i1}, e3:pick{o1,i2}, e4:ship{i1,i2}, e5:pick{i1}
at strictly increasing hourly timestamps, all with qualifier "rel".
"""
from __future__ import annotations

import pytest

from procscope.engine import apply_scope
from procscope.lang import parse_ruleset
from procscope.model import Event, Log, ObjectEntity, Relation, Timestamp


def sample_times() -> dict[int, Timestamp]:
    return {i: Timestamp.from_iso(f"2024-01-15T{8 + i:02d}:00:00Z") for i in range(6)}


def make_sample_a() -> Log:
    t = sample_times()
    return Log(
        event_types={"place": {}, "pick": {}, "ship": {}},
        object_types={"order": {}, "item": {"weight": "number"}},
        events={
            "e1": Event("e1", "place", t[1]),
            "e2": Event("e2", "pick", t[2]),
            "e3": Event("e3", "pick", t[3]),
            "e4": Event("e4", "ship", t[4]),
            "e5": Event("e5", "pick", t[5]),
        },
        objects={
            "o1": ObjectEntity("o1", "order"),
            "i1": ObjectEntity("i1", "item", {"weight": ((t[0], 5.0),)}),
            "i2": ObjectEntity("i2", "item", {"weight": ((t[0], 12.0),)}),
        },
        e2o=frozenset({
            Relation("e1", "rel", "o1"),
            Relation("e2", "rel", "o1"),
            Relation("e2", "rel", "i1"),
            Relation("e3", "rel", "o1"),
            Relation("e3", "rel", "i2"),
            Relation("e4", "rel", "i1"),
            Relation("e4", "rel", "i2"),
            Relation("e5", "rel", "i1"),
        }),
        o2o=frozenset(),
    )


@pytest.fixture
def sample_a() -> Log:
    return make_sample_a()


@pytest.fixture
def times() -> dict[int, Timestamp]:
    return sample_times()


@pytest.fixture
def sample_a_enriched(sample_a: Log) -> Log:
    """sample_a with P1 = include order, P2 = include ship applied."""
    log = apply_scope(sample_a, "P1", parse_ruleset("INCLUDE {(order)}"))
    return apply_scope(log, "P2", parse_ruleset("INCLUDE {(ship)}"))
