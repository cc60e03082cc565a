"""AST for the scope rule language.

A ruleset is a binary tree of AND/OR nodes over rules; a rule includes
and/or excludes one statement; a statement is a non-empty list of filter
items, each naming an entity (object or event type) with an optional
attribute condition.

Source positions are carried for diagnostics but excluded from equality, so
a re-parsed canonical print compares equal to the original tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Union

from ..model import AttrValue

#: Comparison operators; `contains` applies to strings only.
OPERATORS = ("<", ">", "=", "!=", "<=", ">=", "contains")

EntityKind = Literal["object", "event", "auto"]


@dataclass(frozen=True)
class EntityRef:
    """A reference to an object type or an event type.

    ``kind`` is "auto" until the name is pinned by an explicit ``object:`` /
    ``event:`` prefix or resolved against a concrete log.
    """

    name: str
    kind: EntityKind = "auto"


@dataclass(frozen=True)
class Condition:
    attribute: str
    operator: str
    value: AttrValue


@dataclass(frozen=True)
class FilterItem:
    entity: EntityRef
    condition: Condition | None = None
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Statement:
    items: tuple[FilterItem, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError("a statement needs at least one filter item")


@dataclass(frozen=True)
class Rule:
    """INCLUDE and/or EXCLUDE statements; at least one side is present."""

    include: Statement | None = None
    exclude: Statement | None = None

    def __post_init__(self) -> None:
        if self.include is None and self.exclude is None:
            raise ValueError("a rule needs an include or an exclude statement")


@dataclass(frozen=True)
class Leaf:
    rule: Rule


@dataclass(frozen=True)
class And:
    left: "RulesetExpr"
    right: "RulesetExpr"


@dataclass(frozen=True)
class Or:
    left: "RulesetExpr"
    right: "RulesetExpr"


RulesetExpr = Union[Leaf, And, Or]


@dataclass(frozen=True)
class ScopeDefinition:
    """A named ruleset; applying it adds one process object to a log."""

    name: str
    ruleset: RulesetExpr


def iter_items(expr: RulesetExpr):
    """Yield every filter item in the tree, left to right."""
    if isinstance(expr, Leaf):
        for stmt in (expr.rule.include, expr.rule.exclude):
            if stmt is not None:
                yield from stmt.items
    else:
        yield from iter_items(expr.left)
        yield from iter_items(expr.right)
