"""Seeded random generators for logs and rule ASTs.

Object and event type name pools are disjoint so auto-kind entity references
never turn ambiguous. Generated rulesets are always validate-clean against
the log they were drawn for, and generated values overlap the attribute
value pools so conditions match often enough to be interesting.
"""
from __future__ import annotations

import random

from procscope.lang.ast import (
    And,
    Condition,
    EntityRef,
    FilterItem,
    Leaf,
    Or,
    Rule,
    RulesetExpr,
    Statement,
)
from procscope.model import Event, Log, ObjectEntity, Relation, Timestamp

OBJECT_TYPE_POOL = ("alpha", "beta", "gamma", "delta")
EVENT_TYPE_POOL = ("ping", "pong", "zap", "quux")
ATTR_POOL = ("size", "level", "label", "flag", "stamp")
QUALIFIERS = ("rel", "uses", "of")

_NUMBERS = (1.0, 5.0, 10.0, 12.0, -3.5)
_STRINGS = ("red", "green", "blue box", "red box")
_TIMES = tuple(Timestamp(1_700_000_000_000 + k * 3_600_000) for k in range(5))

_KIND_VALUES = {
    "number": _NUMBERS,
    "string": _STRINGS,
    "boolean": (True, False),
    "timestamp": _TIMES,
}

_KIND_OPS = {
    "number": ("<", ">", "=", "!=", "<=", ">="),
    "timestamp": ("<", ">", "=", "!=", "<=", ">="),
    "string": ("=", "!=", "contains"),
    "boolean": ("=", "!="),
}


def _rand_schema(rng: random.Random) -> dict[str, str]:
    names = rng.sample(ATTR_POOL, k=rng.randint(0, 3))
    return {name: rng.choice(tuple(_KIND_VALUES)) for name in names}


def rand_log(rng: random.Random, max_events: int = 50) -> Log:
    object_types = {
        name: _rand_schema(rng)
        for name in rng.sample(OBJECT_TYPE_POOL, k=rng.randint(1, 4))
    }
    event_types = {
        name: _rand_schema(rng)
        for name in rng.sample(EVENT_TYPE_POOL, k=rng.randint(1, 4))
    }

    objects: dict[str, ObjectEntity] = {}
    for i in range(rng.randint(1, 12)):
        oid = f"o{i}"
        otype = rng.choice(sorted(object_types))
        attrs = {}
        for attr, kind in object_types[otype].items():
            if rng.random() < 0.3:
                continue
            count = rng.randint(1, 3)
            times = sorted(rng.sample(range(0, 10_000_000, 1000), k=count))
            attrs[attr] = tuple(
                (Timestamp(t), rng.choice(_KIND_VALUES[kind])) for t in times
            )
        objects[oid] = ObjectEntity(oid, otype, attrs)

    events: dict[str, Event] = {}
    for i in range(rng.randint(1, max_events)):
        eid = f"e{i:03d}"
        etype = rng.choice(sorted(event_types))
        attrs = {
            attr: rng.choice(_KIND_VALUES[kind])
            for attr, kind in event_types[etype].items()
            if rng.random() < 0.7
        }
        # Duplicate times are allowed; ordering falls back to the event id.
        events[eid] = Event(eid, etype, Timestamp(rng.randrange(0, 5_000_000, 250_000)), attrs)

    e2o: set[Relation] = set()
    oids = sorted(objects)
    for eid in events:
        for _ in range(rng.randint(0, 3)):
            e2o.add(Relation(eid, rng.choice(QUALIFIERS), rng.choice(oids)))

    o2o: set[Relation] = set()
    if len(oids) >= 2:
        for _ in range(rng.randint(0, 4)):
            a, b = rng.sample(oids, k=2)
            o2o.add(Relation(a, "near", b))

    return Log(
        event_types=event_types,
        object_types=object_types,
        events=events,
        objects=objects,
        e2o=frozenset(e2o),
        o2o=frozenset(o2o),
    )


def _rand_item(rng: random.Random, log: Log) -> FilterItem:
    sides = [s for s, reg in (("object", log.object_types), ("event", log.event_types)) if reg]
    kind = rng.choice(sides)
    if kind == "object":
        name = rng.choice(sorted(log.object_types))
        schema = log.object_types[name]
    else:
        name = rng.choice(sorted(log.event_types))
        schema = log.event_types[name]
    explicit = rng.random() < 0.25
    ref = EntityRef(name, kind if explicit else "auto")
    if name == "process" and rng.random() < 0.8:
        pids = log.objects_by_type.get("process", ())
        target = rng.choice(pids) if pids and rng.random() < 0.8 else "nothing"
        return FilterItem(ref, Condition("id", rng.choice(("=", "!=", "contains")), target))
    if not schema or rng.random() < 0.45:
        return FilterItem(ref, None)
    attr = rng.choice(sorted(schema))
    attr_kind = schema[attr]
    operator = rng.choice(_KIND_OPS[attr_kind])
    value = rng.choice(_KIND_VALUES[attr_kind])
    return FilterItem(ref, Condition(attr, operator, value))


def _rand_statement(rng: random.Random, log: Log) -> Statement:
    return Statement(tuple(_rand_item(rng, log) for _ in range(rng.randint(1, 2))))


def _rand_rule(rng: random.Random, log: Log) -> Rule:
    shape = rng.random()
    if shape < 0.5:
        return Rule(include=_rand_statement(rng, log))
    if shape < 0.75:
        return Rule(exclude=_rand_statement(rng, log))
    return Rule(include=_rand_statement(rng, log), exclude=_rand_statement(rng, log))


def rand_ruleset(rng: random.Random, log: Log, max_depth: int = 4) -> RulesetExpr:
    """A validate-clean ruleset over the log's registries."""
    if max_depth <= 0 or rng.random() < 0.45:
        return Leaf(_rand_rule(rng, log))
    left = rand_ruleset(rng, log, max_depth - 1)
    right = rand_ruleset(rng, log, max_depth - 1)
    node = And(left, right) if rng.random() < 0.5 else Or(left, right)
    return node


# ---------------------------------------------------------------------------
# Log-independent AST generation for grammar round-trip checks
# ---------------------------------------------------------------------------

_NAME_POOL = (
    "orders", "items", "ship", "place order", "pick-up", "x",
    'weird "name"', "costs_eur", "größe", "true", "object",
)
_ATTR_NAMES = ("weight", "status", "shipped at", "ok", "n1")


def _free_value(rng: random.Random):
    roll = rng.random()
    if roll < 0.3:
        return rng.choice(("ship", "back\\slash", 'quo"te', "", "multi\nline"))
    if roll < 0.6:
        return rng.choice((10.0, -2.5, 0.0, 3.25e16, 1e-05, 123456.789))
    if roll < 0.8:
        return rng.random() < 0.5
    return Timestamp(rng.randrange(-1_000_000_000_000, 2_000_000_000_000, 777))


def _free_item(rng: random.Random) -> FilterItem:
    ref = EntityRef(rng.choice(_NAME_POOL), rng.choice(("auto", "auto", "object", "event")))
    if rng.random() < 0.5:
        return FilterItem(ref, None)
    op = rng.choice(("<", ">", "=", "!=", "<=", ">=", "contains"))
    return FilterItem(ref, Condition(rng.choice(_ATTR_NAMES), op, _free_value(rng)))


def _free_rule(rng: random.Random) -> Rule:
    roll = rng.random()
    items = lambda: Statement(tuple(_free_item(rng) for _ in range(rng.randint(1, 3))))
    if roll < 0.45:
        return Rule(include=items())
    if roll < 0.7:
        return Rule(exclude=items())
    return Rule(include=items(), exclude=items())


def free_ruleset(rng: random.Random, max_depth: int = 5) -> RulesetExpr:
    """Arbitrary well-formed AST in the parser's canonical image.

    The grammar cannot textually distinguish And(include-only leaf,
    exclude-only leaf) from the combined rule, and the parser reads that
    text as the combined rule; such pairs are therefore swapped, which keeps
    the printed form unambiguous.
    """
    if max_depth <= 0 or rng.random() < 0.4:
        return Leaf(_free_rule(rng))
    left = free_ruleset(rng, max_depth - 1)
    right = free_ruleset(rng, max_depth - 1)
    if rng.random() < 0.5:
        if (
            isinstance(left, Leaf) and left.rule.exclude is None
            and isinstance(right, Leaf) and right.rule.include is None
        ):
            left, right = right, left
        return And(left, right)
    return Or(left, right)
