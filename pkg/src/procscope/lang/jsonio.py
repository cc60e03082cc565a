"""Lossless JSON form of rule ASTs, for export, reuse, and the HTTP API.

Schema (informal):

    node  = {"rule": {"include"?: [item...], "exclude"?: [item...]}}
          | {"op": "and"|"or", "left": node, "right": node}
    item  = {"entity": {"kind": "object"|"event"|"auto", "name": str},
             "attribute"?: str, "operator"?: str,
             "value"?: str | number | bool | {"timestamp": str}}

A condition is present as a whole (attribute, operator and value) or absent.
"""
from __future__ import annotations

import json
from typing import Any

from ..errors import OcelSchemaError
from ..model import AttrValue, Timestamp
from .ast import (
    And,
    Condition,
    EntityRef,
    FilterItem,
    Leaf,
    Or,
    Rule,
    RulesetExpr,
    Statement,
    OPERATORS,
)

_KINDS = ("object", "event", "auto")


def _value_to_json(value: AttrValue) -> Any:
    if isinstance(value, Timestamp):
        return {"timestamp": value.iso()}
    return value


def _item_to_json(item: FilterItem) -> dict[str, Any]:
    out: dict[str, Any] = {"entity": {"kind": item.entity.kind, "name": item.entity.name}}
    if item.condition is not None:
        out["attribute"] = item.condition.attribute
        out["operator"] = item.condition.operator
        out["value"] = _value_to_json(item.condition.value)
    return out


def _node_to_json(expr: RulesetExpr) -> dict[str, Any]:
    if isinstance(expr, Leaf):
        rule: dict[str, Any] = {}
        if expr.rule.include is not None:
            rule["include"] = [_item_to_json(i) for i in expr.rule.include.items]
        if expr.rule.exclude is not None:
            rule["exclude"] = [_item_to_json(i) for i in expr.rule.exclude.items]
        return {"rule": rule}
    op = "and" if isinstance(expr, And) else "or"
    return {"op": op, "left": _node_to_json(expr.left), "right": _node_to_json(expr.right)}


def ruleset_to_json(expr: RulesetExpr) -> str:
    """Serialize to a deterministic JSON document."""
    return json.dumps(_node_to_json(expr), sort_keys=True, separators=(", ", ": "))


def _fail(path: str, message: str) -> OcelSchemaError:
    return OcelSchemaError(f"{message} at {path}", path=path)


def _value_from_json(raw: Any, path: str) -> AttrValue:
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, str):
        return raw
    if isinstance(raw, dict):
        ts = raw.get("timestamp")
        if not isinstance(ts, str) or set(raw) != {"timestamp"}:
            raise _fail(path, "timestamp value must be {\"timestamp\": \"<ISO-8601>\"}")
        try:
            return Timestamp.from_iso(ts)
        except ValueError as exc:
            raise _fail(f"{path}.timestamp", f"bad timestamp: {exc}")
    raise _fail(path, f"unsupported value type {type(raw).__name__}")


def _item_from_json(raw: Any, path: str) -> FilterItem:
    if not isinstance(raw, dict):
        raise _fail(path, "item must be an object")
    entity = raw.get("entity")
    if not isinstance(entity, dict):
        raise _fail(f"{path}.entity", "missing entity")
    kind = entity.get("kind", "auto")
    name = entity.get("name")
    if kind not in _KINDS:
        raise _fail(f"{path}.entity.kind", f"kind must be one of {_KINDS}")
    if not isinstance(name, str) or not name:
        raise _fail(f"{path}.entity.name", "name must be a non-empty string")
    ref = EntityRef(name, kind)

    condition_keys = {"attribute", "operator", "value"} & set(raw)
    if not condition_keys:
        return FilterItem(ref, None)
    if condition_keys != {"attribute", "operator", "value"}:
        raise _fail(path, "condition needs attribute, operator and value together")
    attribute = raw["attribute"]
    operator = raw["operator"]
    if not isinstance(attribute, str) or not attribute:
        raise _fail(f"{path}.attribute", "attribute must be a non-empty string")
    if operator not in OPERATORS:
        raise _fail(f"{path}.operator", f"operator must be one of {OPERATORS}")
    value = _value_from_json(raw["value"], f"{path}.value")
    return FilterItem(ref, Condition(attribute, operator, value))


def _statement_from_json(raw: Any, path: str) -> Statement:
    if not isinstance(raw, list) or not raw:
        raise _fail(path, "statement must be a non-empty array of items")
    return Statement(tuple(_item_from_json(item, f"{path}[{i}]") for i, item in enumerate(raw)))


def _node_from_json(raw: Any, path: str) -> RulesetExpr:
    if not isinstance(raw, dict):
        raise _fail(path, "node must be an object")
    if "rule" in raw:
        rule = raw["rule"]
        if not isinstance(rule, dict):
            raise _fail(f"{path}.rule", "rule must be an object")
        unknown = set(rule) - {"include", "exclude"}
        if unknown:
            raise _fail(f"{path}.rule", f"unknown keys {sorted(unknown)}")
        include = exclude = None
        if "include" in rule:
            include = _statement_from_json(rule["include"], f"{path}.rule.include")
        if "exclude" in rule:
            exclude = _statement_from_json(rule["exclude"], f"{path}.rule.exclude")
        if include is None and exclude is None:
            raise _fail(f"{path}.rule", "rule needs an include or exclude statement")
        return Leaf(Rule(include=include, exclude=exclude))
    if "op" in raw:
        op = raw["op"]
        if op not in ("and", "or"):
            raise _fail(f"{path}.op", "op must be \"and\" or \"or\"")
        if "left" not in raw or "right" not in raw:
            raise _fail(path, "compound node needs left and right")
        left = _node_from_json(raw["left"], f"{path}.left")
        right = _node_from_json(raw["right"], f"{path}.right")
        return And(left, right) if op == "and" else Or(left, right)
    raise _fail(path, "node must have a \"rule\" or an \"op\" key")


def ruleset_from_json(doc: str | bytes | dict) -> RulesetExpr:
    """Parse the JSON form back into an AST; inverse of :func:`ruleset_to_json`."""
    if isinstance(doc, (str, bytes)):
        try:
            raw = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise OcelSchemaError(f"not valid JSON: {exc}", path="$") from exc
    else:
        raw = doc
    return _node_from_json(raw, "$")
