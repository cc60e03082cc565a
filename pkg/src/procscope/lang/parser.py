"""Tokenizer and recursive-descent parser for the scope rule language.

Concrete syntax, mirroring the abstract grammar one-to-one:

    ruleset   ::= rule | "(" ruleset "AND" ruleset ")" | "(" ruleset "OR" ruleset ")"
    rule      ::= "INCLUDE" statement | "EXCLUDE" statement
                | "INCLUDE" statement "AND" "EXCLUDE" statement
    statement ::= "{" filter_item ("," filter_item)* "}"
    filter_item ::= "(" entity ")" | "(" entity "," "," "," ")"
                  | "(" entity "," attribute "," operator "," value ")"
    entity    ::= ["object:" | "event:"] (IDENT | STRING)
    operator  ::= "<" | ">" | "=" | "!=" | "<=" | ">=" | "contains"   (≠ is an alias of !=)
    value     ::= STRING | NUMBER | "true" | "false" | t"<ISO-8601>"

Keywords are case-sensitive upper-case. The empty-slot item form
``(entity, , , )`` is accepted and canonicalized to ``(entity)``.

The one ambiguity in the grammar is ``( INCLUDE s AND EXCLUDE t )``, which
derives both as a parenthesized pair of rules and as the combined rule. The
parser resolves it greedily in favor of the combined rule; the two readings
evaluate to the same selection, so nothing is lost. Redundant parentheses
are rejected everywhere else.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import DuplicateScopeError, RulesetSyntaxError
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
    ScopeDefinition,
    Statement,
)

KEYWORDS = frozenset({"INCLUDE", "EXCLUDE", "AND", "OR", "SCOPE"})

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>        [ \t\r\n]+                      )
    | (?P<TIMESTAMP> t"(?:[^"\\]|\\.)*"              )
    | (?P<STRING>    "(?:[^"\\]|\\.)*"               )
    | (?P<NUMBER>    -?[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)? )
    | (?P<IDENT>     [A-Za-z_][A-Za-z0-9_\-]*        )
    | (?P<OP>        <=|>=|!=|≠|<|>|=           )
    | (?P<PUNCT>     [{}(),:;]                       )
    """,
    re.VERBOSE,
)

_PUNCT_NAMES = {
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    ":": "COLON",
    ";": "SEMI",
}


@dataclass(frozen=True)
class Token:
    type: str
    text: str
    line: int
    col: int

    def describe(self) -> str:
        if self.type == "EOF":
            return "end of input"
        return repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RulesetSyntaxError(
                f"unexpected character {text[pos]!r}",
                line=line, col=col, expected=("token",), found=text[pos],
            )
        kind = m.lastgroup or ""
        lexeme = m.group()
        if kind == "PUNCT":
            kind = _PUNCT_NAMES[lexeme]
        elif kind == "IDENT" and lexeme in KEYWORDS:
            kind = lexeme
        if kind != "WS":
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


def _unescape(raw: str) -> str:
    """Strip quotes and resolve backslash escapes (backslash keeps the next char)."""
    body = raw[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            out.append(body[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    # ---- token plumbing ----

    def peek(self, ahead: int = 0) -> Token:
        j = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[j]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.type != "EOF":
            self.i += 1
        return tok

    def expect(self, *types: str, label: str | None = None) -> Token:
        tok = self.peek()
        if tok.type not in types:
            raise self.error(label or " or ".join(types))
        return self.advance()

    def error(self, expected: str) -> RulesetSyntaxError:
        tok = self.peek()
        return RulesetSyntaxError(
            f"expected {expected}, found {tok.describe()} at {tok.line}:{tok.col}",
            line=tok.line, col=tok.col,
            expected=tuple(sorted(expected.split(" or "))), found=tok.describe(),
        )

    # ---- grammar ----

    def parse_ruleset(self) -> RulesetExpr:
        expr, _ = self._expr()
        if self.peek().type != "EOF":
            raise self.error("end of input")
        return expr

    def _expr(self) -> tuple[RulesetExpr, bool]:
        """Parse one ruleset. The flag reports a combined rule parsed bare,
        which is the only form allowed to stand alone inside parentheses."""
        tok = self.peek()
        if tok.type == "LPAREN":
            self.advance()
            left, left_combined = self._expr()
            nxt = self.peek()
            if nxt.type == "RPAREN" and left_combined:
                # ( INCLUDE s AND EXCLUDE t ): the grammar's one ambiguity.
                self.advance()
                return left, False
            if nxt.type not in ("AND", "OR"):
                raise self.error("AND or OR")
            self.advance()
            right, _ = self._expr()
            self.expect("RPAREN", label="')'")
            node = And(left, right) if nxt.type == "AND" else Or(left, right)
            return node, False
        if tok.type in ("INCLUDE", "EXCLUDE"):
            rule = self._rule()
            return Leaf(rule), rule.include is not None and rule.exclude is not None
        raise self.error("INCLUDE, EXCLUDE or '('")

    def _rule(self) -> Rule:
        tok = self.peek()
        if tok.type == "EXCLUDE":
            self.advance()
            return Rule(exclude=self._statement())
        self.expect("INCLUDE", label="INCLUDE or EXCLUDE")
        include = self._statement()
        if self.peek().type == "AND" and self.peek(1).type == "EXCLUDE":
            self.advance()
            self.advance()
            return Rule(include=include, exclude=self._statement())
        return Rule(include=include)

    def _statement(self) -> Statement:
        self.expect("LBRACE", label="'{'")
        items = [self._item()]
        while self.peek().type == "COMMA":
            self.advance()
            items.append(self._item())
        self.expect("RBRACE", label="'}' or ','")
        return Statement(tuple(items))

    def _item(self) -> FilterItem:
        opening = self.expect("LPAREN", label="'('")
        entity = self._entity()
        pos = (opening.line, opening.col)
        if self.peek().type == "RPAREN":
            self.advance()
            return FilterItem(entity, None, pos=pos)
        self.expect("COMMA", label="')' or ','")
        if self.peek().type == "COMMA":
            # Empty-slot form: the remaining three components are all blank.
            self.advance()
            self.expect("COMMA", label="','")
            self.expect("RPAREN", label="')'")
            return FilterItem(entity, None, pos=pos)
        attribute = self._name("attribute")
        self.expect("COMMA", label="','")
        operator = self._operator()
        self.expect("COMMA", label="','")
        value = self._value()
        self.expect("RPAREN", label="')'")
        return FilterItem(entity, Condition(attribute, operator, value), pos=pos)

    def _entity(self) -> EntityRef:
        tok = self.peek()
        if (
            tok.type == "IDENT"
            and tok.text in ("object", "event")
            and self.peek(1).type == "COLON"
        ):
            self.advance()
            self.advance()
            return EntityRef(self._name("entity name"), kind=tok.text)  # type: ignore[arg-type]
        return EntityRef(self._name("entity name"))

    def _name(self, what: str) -> str:
        tok = self.peek()
        if tok.type == "IDENT":
            self.advance()
            return tok.text
        if tok.type == "STRING":
            self.advance()
            return _unescape(tok.text)
        raise self.error(f"{what}")

    def _operator(self) -> str:
        tok = self.peek()
        if tok.type == "OP":
            self.advance()
            return "!=" if tok.text == "≠" else tok.text
        if tok.type == "IDENT" and tok.text == "contains":
            self.advance()
            return "contains"
        raise self.error("comparison operator")

    def _value(self) -> AttrValue:
        tok = self.peek()
        if tok.type == "STRING":
            self.advance()
            return _unescape(tok.text)
        if tok.type == "NUMBER":
            self.advance()
            return float(tok.text)
        if tok.type == "IDENT" and tok.text in ("true", "false"):
            self.advance()
            return tok.text == "true"
        if tok.type == "TIMESTAMP":
            self.advance()
            raw = _unescape(tok.text[1:])
            try:
                return Timestamp.from_iso(raw)
            except ValueError as exc:
                raise RulesetSyntaxError(
                    f"bad timestamp literal {raw!r} at {tok.line}:{tok.col}: {exc}",
                    line=tok.line, col=tok.col, expected=("ISO-8601 timestamp",),
                    found=tok.text,
                ) from exc
        raise self.error("value literal")

    def parse_scope_file(self) -> list[ScopeDefinition]:
        defs: list[ScopeDefinition] = []
        seen: set[str] = set()
        while self.peek().type != "EOF":
            tok = self.expect("SCOPE", label="SCOPE")
            name = self._name("scope name")
            if name in seen:
                raise DuplicateScopeError(
                    f"scope {name!r} defined twice", name=name, line=tok.line, col=tok.col,
                )
            seen.add(name)
            self.expect("COLON", label="':'")
            expr, _ = self._expr()
            self.expect("SEMI", label="';'")
            defs.append(ScopeDefinition(name, expr))
        return defs


def parse_ruleset(text: str) -> RulesetExpr:
    """Parse one ruleset expression; the whole input must be consumed."""
    return _Parser(tokenize(text)).parse_ruleset()


def parse_scope_file(text: str) -> list[ScopeDefinition]:
    """Parse ``SCOPE "<name>" : <ruleset> ;`` declarations in file order."""
    return _Parser(tokenize(text)).parse_scope_file()
