"""Static checks of a rule AST against a concrete log's type registries."""
from __future__ import annotations

from ..model import (
    KIND_NUMBER,
    KIND_STRING,
    KIND_TIMESTAMP,
    Log,
    PROCESS_TYPE,
    ValidationReport,
    Violation,
    value_kind,
)
from .ast import Condition, EntityRef, FilterItem, OPERATORS, RulesetExpr, iter_items

#: Operators that need an ordered kind (numbers or timestamps).
_ORDERED_OPS = frozenset({"<", ">", "<=", ">="})

#: Process objects carry no declared attributes; their id is matchable directly.
PSEUDO_ID_ATTRIBUTE = "id"


def resolve_entity(log: Log, ref: EntityRef) -> tuple[str, str] | None:
    """Pin a reference to ("object"|"event", name), or None if it cannot resolve."""
    in_objects = ref.name in log.object_types
    in_events = ref.name in log.event_types
    if ref.kind == "object":
        return ("object", ref.name) if in_objects else None
    if ref.kind == "event":
        return ("event", ref.name) if in_events else None
    if in_objects and not in_events:
        return ("object", ref.name)
    if in_events and not in_objects:
        return ("event", ref.name)
    return None


def _entity_violation(log: Log, item: FilterItem) -> Violation:
    ref = item.entity
    ambiguous = (
        ref.kind == "auto"
        and ref.name in log.object_types
        and ref.name in log.event_types
    )
    if ambiguous:
        return Violation(
            "ambiguous-entity",
            f"entity {ref.name!r}",
            "name exists as both an object type and an event type; add an object: or event: prefix",
            pos=item.pos,
        )
    return Violation(
        "unknown-entity",
        f"entity {ref.name!r}",
        f"no {ref.kind if ref.kind != 'auto' else 'object or event'} type of this name",
        pos=item.pos,
    )


def _condition_violations(
    log: Log, item: FilterItem, kind: str, name: str, cond: Condition
) -> list[Violation]:
    schema = log.object_types[name] if kind == "object" else log.event_types[name]
    attr_kind = schema.get(cond.attribute)
    if attr_kind is None and kind == "object" and name == PROCESS_TYPE and cond.attribute == PSEUDO_ID_ATTRIBUTE:
        attr_kind = KIND_STRING
    where = f"entity {name!r}, attribute {cond.attribute!r}"
    if attr_kind is None:
        return [Violation("unknown-attribute", where, f"not declared for {kind} type {name!r}", pos=item.pos)]

    out: list[Violation] = []
    if cond.operator not in OPERATORS:
        out.append(Violation("unknown-operator", where, f"operator {cond.operator!r}", pos=item.pos))
        return out
    if cond.operator in _ORDERED_OPS and attr_kind not in (KIND_NUMBER, KIND_TIMESTAMP):
        out.append(Violation(
            "operator-kind-mismatch", where,
            f"{cond.operator!r} needs a number or timestamp attribute, schema kind is {attr_kind}",
            pos=item.pos,
        ))
    if cond.operator == "contains" and attr_kind != KIND_STRING:
        out.append(Violation(
            "operator-kind-mismatch", where,
            f"'contains' applies to strings only, schema kind is {attr_kind}",
            pos=item.pos,
        ))
    literal_kind = value_kind(cond.value)
    if literal_kind != attr_kind:
        out.append(Violation(
            "operator-kind-mismatch", where,
            f"comparing {attr_kind} attribute with a {literal_kind} literal",
            pos=item.pos,
        ))
    return out


def validate_ruleset(expr: RulesetExpr, log: Log) -> ValidationReport:
    """Resolve every filter item and check attribute/operator/value agreement.

    Monotone in the log: adding types or attributes never creates new
    violations for a fixed AST.
    """
    found: list[Violation] = []
    for item in iter_items(expr):
        resolved = resolve_entity(log, item.entity)
        if resolved is None:
            found.append(_entity_violation(log, item))
            continue
        kind, name = resolved
        if item.condition is not None:
            found.extend(_condition_violations(log, item, kind, name, item.condition))
    return ValidationReport(tuple(found))
