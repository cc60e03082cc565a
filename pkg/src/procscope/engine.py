"""Rule evaluation over a log and the scope enrichment procedure.

Evaluation denotes every ruleset as a :class:`Selection`: one constraint per
side (events, objects), each either an explicit id set or unconstrained.
Unconstrained means the side was never mentioned by any filter item in the
subtree and is represented as ``None``; it is the identity of AND and the
absorbing element of OR.

Enrichment resolves a selection into concrete event and object sets linked
through E2O, then embeds the scope as a fresh ``process`` object:

* ``(event, "in_scope", p)`` for every selected event,
* ``(p, "involves", o)`` for every selected non-process object,
* ``(child, "part_of", p)`` for every selected process object, which is how
  coarser scopes aggregate finer ones.

The input log is never modified; enrichment returns a new value.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DuplicateScopeNameError,
    EmptyObjectSetError,
    EmptyScopeError,
    QualifierCollisionError,
    UnresolvedEntityError,
)
from .lang.ast import And, FilterItem, Leaf, Rule, RulesetExpr, ScopeDefinition, Statement
from .lang.validation import PSEUDO_ID_ATTRIBUTE, resolve_entity
from .model import (
    IN_SCOPE,
    INVOLVES,
    PART_OF,
    PROCESS_TYPE,
    AttrValue,
    Log,
    ObjectEntity,
    Relation,
    Timestamp,
)


@dataclass(frozen=True)
class Selection:
    """Evaluation result; ``None`` on a side means unconstrained."""

    events: frozenset[str] | None
    objects: frozenset[str] | None

    @classmethod
    def unconstrained(cls) -> "Selection":
        return cls(None, None)


@dataclass(frozen=True)
class ScopeResult:
    """Concrete scope membership after linking both sides through E2O."""

    events: frozenset[str]
    objects: frozenset[str]


@dataclass(frozen=True)
class ScopeSummary:
    name: str
    event_count: int
    object_count: int


def _kinds_match(actual: AttrValue, literal: AttrValue) -> bool:
    if isinstance(actual, bool) != isinstance(literal, bool):
        return False
    if isinstance(actual, bool):
        return True
    if isinstance(actual, (int, float)):
        return isinstance(literal, (int, float))
    return type(actual) is type(literal)


def satisfies(actual: AttrValue, operator: str, literal: AttrValue) -> bool:
    """Apply one comparison; mismatched kinds never match."""
    if not _kinds_match(actual, literal):
        return False
    if operator == "=":
        return actual == literal
    if operator == "!=":
        return actual != literal
    if operator == "contains":
        return isinstance(actual, str) and isinstance(literal, str) and literal in actual
    # Ordered comparisons are defined for numbers and timestamps only.
    if isinstance(actual, bool) or not isinstance(actual, (int, float, Timestamp)):
        return False
    if operator == "<":
        return actual < literal
    if operator == ">":
        return actual > literal
    if operator == "<=":
        return actual <= literal
    if operator == ">=":
        return actual >= literal
    return False


def match_filter_item(log: Log, item: FilterItem) -> Selection:
    """Denote one filter item.

    Event-type items constrain only the event side; object-type items only
    the object side. A condition on an object attribute matches when any of
    its timestamped values satisfies it; an entity lacking the attribute
    never matches, not even ``!=``.
    """
    resolved = resolve_entity(log, item.entity)
    if resolved is None:
        raise UnresolvedEntityError(
            f"cannot resolve entity {item.entity.name!r}",
            name=item.entity.name, kind=item.entity.kind,
        )
    kind, name = resolved
    cond = item.condition

    if kind == "event":
        ids = log.events_by_type.get(name, ())
        if cond is None:
            picked = frozenset(ids)
        else:
            picked = frozenset(
                eid for eid in ids
                if (value := log.events[eid].attrs.get(cond.attribute)) is not None
                and satisfies(value, cond.operator, cond.value)
            )
        return Selection(events=picked, objects=None)

    ids = log.objects_by_type.get(name, ())
    if cond is None:
        picked = frozenset(ids)
    elif name == PROCESS_TYPE and cond.attribute == PSEUDO_ID_ATTRIBUTE:
        picked = frozenset(oid for oid in ids if satisfies(oid, cond.operator, cond.value))
    else:
        picked = frozenset(
            oid for oid in ids
            if any(
                satisfies(value, cond.operator, cond.value)
                for _, value in log.objects[oid].attrs.get(cond.attribute, ())
            )
        )
    return Selection(events=None, objects=picked)


def _union(a: frozenset[str] | None, b: frozenset[str] | None) -> frozenset[str] | None:
    if a is None or b is None:
        return None
    return a | b


def _intersect(a: frozenset[str] | None, b: frozenset[str] | None) -> frozenset[str] | None:
    if a is None:
        return b
    if b is None:
        return a
    return a & b


def _complement(side: frozenset[str] | None, universe: frozenset[str]) -> frozenset[str] | None:
    return None if side is None else universe - side


def _minus(
    kept: frozenset[str] | None,
    removed: frozenset[str] | None,
    universe: frozenset[str],
) -> frozenset[str] | None:
    if removed is None:
        return kept
    if kept is None:
        return universe - removed
    return kept - removed


def _collect(a: frozenset[str] | None, b: frozenset[str] | None) -> frozenset[str] | None:
    if a is None:
        return b
    if b is None:
        return a
    return a | b


def _eval_statement(log: Log, stmt: Statement) -> Selection:
    # A statement collects picks: each side unions the items that constrain
    # it and stays unconstrained only when no item mentions it. This differs
    # from ruleset-level OR, where an unconstrained side absorbs.
    out = None
    for item in stmt.items:
        sel = match_filter_item(log, item)
        out = sel if out is None else Selection(
            _collect(out.events, sel.events), _collect(out.objects, sel.objects)
        )
    assert out is not None
    return out


def _eval_rule(log: Log, rule: Rule) -> Selection:
    all_events = frozenset(log.events)
    all_objects = frozenset(log.objects)
    if rule.include is not None and rule.exclude is not None:
        inc = _eval_statement(log, rule.include)
        exc = _eval_statement(log, rule.exclude)
        return Selection(
            _minus(inc.events, exc.events, all_events),
            _minus(inc.objects, exc.objects, all_objects),
        )
    if rule.include is not None:
        return _eval_statement(log, rule.include)
    assert rule.exclude is not None
    exc = _eval_statement(log, rule.exclude)
    return Selection(
        _complement(exc.events, all_events),
        _complement(exc.objects, all_objects),
    )


def evaluate(log: Log, expr: RulesetExpr) -> Selection:
    """Denote a whole ruleset as a Selection.

    AND intersects componentwise with unconstrained as identity; OR unions
    with unconstrained absorbing. A standalone EXCLUDE complements relative
    to the log.
    """
    if isinstance(expr, Leaf):
        return _eval_rule(log, expr.rule)
    left = evaluate(log, expr.left)
    right = evaluate(log, expr.right)
    if isinstance(expr, And):
        return Selection(
            _intersect(left.events, right.events),
            _intersect(left.objects, right.objects),
        )
    return Selection(
        _union(left.events, right.events),
        _union(left.objects, right.objects),
    )


def resolve_scope(log: Log, sel: Selection) -> ScopeResult:
    """Link the two sides existentially through E2O (one hop, no closure).

    Events are kept when the object side is explicit only if they relate to
    at least one selected object; objects are kept only when they relate to
    at least one kept event.
    """
    base_events = sel.events if sel.events is not None else frozenset(log.events)
    if sel.objects is not None:
        kept_events = frozenset(
            eid for eid in base_events
            if any(oid in sel.objects for _, oid in log.relations_by_event.get(eid, ()))
        )
    else:
        kept_events = base_events
    if not kept_events:
        raise EmptyScopeError("the ruleset selects no events")

    base_objects = sel.objects if sel.objects is not None else frozenset(log.objects)
    kept_objects = frozenset(
        oid for oid in base_objects
        if any(eid in kept_events for eid in log.events_by_object.get(oid, ()))
    )
    return ScopeResult(events=kept_events, objects=kept_objects)


def apply_scope(log: Log, name: str, expr: RulesetExpr) -> Log:
    """Embed one scope as a fresh process object; returns a new log.

    Nothing pre-existing is removed or altered: the event set is unchanged
    and exactly one object is added.
    """
    if name in log.objects or name in log.events:
        raise DuplicateScopeNameError(
            f"{name!r} is already an object or event id", name=name,
        )
    result = resolve_scope(log, evaluate(log, expr))
    if not result.objects:
        raise EmptyObjectSetError(
            "the selected events relate to no objects; the scope would have no O2O relations",
            name=name,
        )

    new_e2o = {Relation(eid, IN_SCOPE, name) for eid in result.events}
    new_o2o = set()
    for oid in result.objects:
        if log.objects[oid].type == PROCESS_TYPE:
            new_o2o.add(Relation(oid, PART_OF, name))
        else:
            new_o2o.add(Relation(name, INVOLVES, oid))
    colliding = (new_e2o & log.e2o) | (new_o2o & log.o2o)
    if colliding:
        sample = sorted(colliding, key=lambda r: (r.source, r.qualifier, r.target))[0]
        raise QualifierCollisionError(
            f"enrichment would duplicate relation ({sample.source}, {sample.qualifier}, {sample.target})",
            name=name,
        )

    object_types = dict(log.object_types)
    object_types.setdefault(PROCESS_TYPE, {})
    objects = dict(log.objects)
    objects[name] = ObjectEntity(name, PROCESS_TYPE)
    return Log(
        event_types=dict(log.event_types),
        object_types=object_types,
        events=dict(log.events),
        objects=objects,
        e2o=log.e2o | new_e2o,
        o2o=log.o2o | new_o2o,
    )


def apply_scopes(log: Log, defs: list[ScopeDefinition]) -> Log:
    """Fold scope definitions left to right; later scopes can aggregate
    earlier ones by matching the ``process`` entity's id."""
    out = log
    for index, definition in enumerate(defs):
        try:
            out = apply_scope(out, definition.name, definition.ruleset)
        except Exception as exc:
            details = getattr(exc, "details", None)
            if isinstance(details, dict):
                details.setdefault("scope_index", index)
                details.setdefault("scope_name", definition.name)
            raise
    return out


def scope_summary(log: Log, name: str) -> ScopeSummary:
    """Event and object membership counts of one applied scope."""
    events = sum(1 for rel in log.e2o if rel.target == name and rel.qualifier == IN_SCOPE)
    objects = sum(
        1 for rel in log.o2o
        if (rel.source == name and rel.qualifier == INVOLVES)
        or (rel.target == name and rel.qualifier == PART_OF)
    )
    return ScopeSummary(name, events, objects)
