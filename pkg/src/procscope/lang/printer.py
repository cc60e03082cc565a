"""Canonical text form for rule ASTs.

The printer is the inverse of the parser on its own output: parsing a
printed tree yields an equal tree. Canonical choices: empty condition slots
are dropped, compound rulesets are fully parenthesized, ``≠`` becomes
``!=``, strings are double-quoted, numbers use their shortest round-trip
decimal form.
"""
from __future__ import annotations

import re

from ..model import AttrValue, Timestamp
from .ast import And, FilterItem, Leaf, Or, Rule, RulesetExpr, ScopeDefinition, Statement

_BARE_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")

#: Words that lex as something other than a plain IDENT and therefore need quotes.
_RESERVED = frozenset({"INCLUDE", "EXCLUDE", "AND", "OR", "SCOPE"})


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _name(text: str) -> str:
    if _BARE_NAME.fullmatch(text) and text not in _RESERVED:
        return text
    return _quote(text)


def _value(value: AttrValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(float(value))
    if isinstance(value, Timestamp):
        return f't"{value.iso()}"'
    return _quote(value)


def _item(item: FilterItem) -> str:
    prefix = f"{item.entity.kind}:" if item.entity.kind != "auto" else ""
    head = f"{prefix}{_name(item.entity.name)}"
    if item.condition is None:
        return f"({head})"
    c = item.condition
    return f"({head}, {_name(c.attribute)}, {c.operator}, {_value(c.value)})"


def _statement(stmt: Statement) -> str:
    return "{" + ", ".join(_item(it) for it in stmt.items) + "}"


def _rule(rule: Rule) -> str:
    parts = []
    if rule.include is not None:
        parts.append(f"INCLUDE {_statement(rule.include)}")
    if rule.exclude is not None:
        parts.append(f"EXCLUDE {_statement(rule.exclude)}")
    return " AND ".join(parts)


def print_ruleset(expr: RulesetExpr) -> str:
    if isinstance(expr, Leaf):
        return _rule(expr.rule)
    op = "AND" if isinstance(expr, And) else "OR"
    return f"({print_ruleset(expr.left)} {op} {print_ruleset(expr.right)})"


def print_scope_file(defs: list[ScopeDefinition]) -> str:
    lines = [f"SCOPE {_quote(d.name)} : {print_ruleset(d.ruleset)} ;" for d in defs]
    return "\n".join(lines) + ("\n" if lines else "")
