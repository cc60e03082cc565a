"""Scope rule language: AST, parser, canonical printer, validation, JSON form."""
from .ast import (
    And,
    Condition,
    EntityRef,
    FilterItem,
    Leaf,
    Or,
    Rule,
    RulesetExpr,
    ScopeDefinition,
    Statement,
    OPERATORS,
)
from .parser import parse_ruleset, parse_scope_file
from .printer import print_ruleset, print_scope_file
from .validation import validate_ruleset
from .jsonio import ruleset_from_json, ruleset_to_json

__all__ = [
    "And",
    "Condition",
    "EntityRef",
    "FilterItem",
    "Leaf",
    "Or",
    "Rule",
    "RulesetExpr",
    "ScopeDefinition",
    "Statement",
    "OPERATORS",
    "parse_ruleset",
    "parse_scope_file",
    "print_ruleset",
    "print_scope_file",
    "validate_ruleset",
    "ruleset_from_json",
    "ruleset_to_json",
]
