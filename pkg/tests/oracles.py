"""Independent oracles the implementation is checked against.

Everything here is written definitionally: plain loops over the raw log
tuple, no shared helpers with the engine, no cached indexes, plus a generic
Earley recognizer that replays the grammar productions directly. Slow on
purpose; only used on small inputs.
"""
from __future__ import annotations

import re

from procscope.lang.ast import And, Leaf, Or, RulesetExpr
from procscope.model import Log, Timestamp

TOP = None  # unconstrained side marker

# ---------------------------------------------------------------------------
# Selection / resolution oracle
# ---------------------------------------------------------------------------


def _cmp(actual, op, lit) -> bool:
    if isinstance(actual, bool) or isinstance(lit, bool):
        if not (isinstance(actual, bool) and isinstance(lit, bool)):
            return False
        if op == "=":
            return actual is lit
        if op == "!=":
            return actual is not lit
        return False
    if isinstance(actual, str) and isinstance(lit, str):
        if op == "=":
            return actual == lit
        if op == "!=":
            return actual != lit
        if op == "contains":
            return lit in actual
        return False
    number_like = lambda v: isinstance(v, (int, float)) and not isinstance(v, bool)
    if number_like(actual) and number_like(lit):
        pass
    elif isinstance(actual, Timestamp) and isinstance(lit, Timestamp):
        pass
    else:
        return False
    if op == "=":
        return actual == lit
    if op == "!=":
        return actual != lit
    if op == "<":
        return actual < lit
    if op == ">":
        return actual > lit
    if op == "<=":
        return actual <= lit
    if op == ">=":
        return actual >= lit
    return False


def _oracle_item(log: Log, item):
    name, kind = item.entity.name, item.entity.kind
    is_object = name in log.object_types if kind in ("object", "auto") else False
    is_event = name in log.event_types if kind in ("event", "auto") else False
    if kind == "auto" and is_object and is_event:
        raise AssertionError("ambiguous entity in oracle input")
    if is_event:
        picked = set()
        for ev in log.events.values():
            if ev.type != name:
                continue
            if item.condition is None:
                picked.add(ev.id)
            else:
                c = item.condition
                if c.attribute in ev.attrs and _cmp(ev.attrs[c.attribute], c.operator, c.value):
                    picked.add(ev.id)
        return (picked, TOP)
    if is_object:
        picked = set()
        for obj in log.objects.values():
            if obj.type != name:
                continue
            if item.condition is None:
                picked.add(obj.id)
                continue
            c = item.condition
            if name == "process" and c.attribute == "id":
                if _cmp(obj.id, c.operator, c.value):
                    picked.add(obj.id)
                continue
            for _, value in obj.attrs.get(c.attribute, ()):
                if _cmp(value, c.operator, c.value):
                    picked.add(obj.id)
                    break
        return (TOP, picked)
    raise AssertionError(f"unresolvable entity {name!r} in oracle input")


def _collect_side(a, b):
    if a is TOP:
        return b
    if b is TOP:
        return a
    return a | b


def _oracle_statement(log: Log, stmt):
    events, objects = TOP, TOP
    for item in stmt.items:
        ev, ob = _oracle_item(log, item)
        events = _collect_side(events, ev)
        objects = _collect_side(objects, ob)
    return events, objects


def _oracle_rule(log: Log, rule):
    all_events, all_objects = set(log.events), set(log.objects)
    if rule.include is not None and rule.exclude is not None:
        ie, io = _oracle_statement(log, rule.include)
        xe, xo = _oracle_statement(log, rule.exclude)
        events = ie if xe is TOP else (all_events - xe if ie is TOP else ie - xe)
        objects = io if xo is TOP else (all_objects - xo if io is TOP else io - xo)
        return events, objects
    if rule.include is not None:
        return _oracle_statement(log, rule.include)
    xe, xo = _oracle_statement(log, rule.exclude)
    return (
        TOP if xe is TOP else all_events - xe,
        TOP if xo is TOP else all_objects - xo,
    )


def oracle_evaluate(log: Log, expr: RulesetExpr):
    """Returns (events, objects); each side a set or TOP."""
    if isinstance(expr, Leaf):
        return _oracle_rule(log, expr.rule)
    le, lo = oracle_evaluate(log, expr.left)
    re_, ro = oracle_evaluate(log, expr.right)
    if isinstance(expr, And):
        events = le if re_ is TOP else (re_ if le is TOP else le & re_)
        objects = lo if ro is TOP else (ro if lo is TOP else lo & ro)
    else:
        events = TOP if (le is TOP or re_ is TOP) else le | re_
        objects = TOP if (lo is TOP or ro is TOP) else lo | ro
    return events, objects


def oracle_resolve(log: Log, events, objects):
    """Returns (E*, O*); E* may be empty (caller decides how to treat it)."""
    base_events = set(log.events) if events is TOP else set(events)
    if objects is not TOP:
        kept_events = set()
        for eid in base_events:
            for rel in log.e2o:
                if rel.source == eid and rel.target in objects:
                    kept_events.add(eid)
                    break
    else:
        kept_events = base_events
    base_objects = set(log.objects) if objects is TOP else set(objects)
    kept_objects = set()
    for oid in base_objects:
        for rel in log.e2o:
            if rel.target == oid and rel.source in kept_events:
                kept_objects.add(oid)
                break
    return kept_events, kept_objects


# ---------------------------------------------------------------------------
# Handover oracle
# ---------------------------------------------------------------------------


def oracle_handovers(log: Log) -> list[tuple[str, str, str, str, int]]:
    """(object id, object type, source, target, flow ms) tuples in the
    deterministic emission order."""
    process_ids = {oid for oid, obj in log.objects.items() if obj.type == "process"}
    membership: dict[str, set[str]] = {eid: set() for eid in log.events}
    related: dict[str, set[str]] = {oid: set() for oid in log.objects}
    for rel in log.e2o:
        if rel.target in process_ids:
            membership[rel.source].add(rel.target)
        related[rel.target].add(rel.source)

    out = []
    for oid in sorted(log.objects):
        obj = log.objects[oid]
        if obj.type == "process":
            continue
        timeline = sorted(related[oid], key=lambda eid: (log.events[eid].time.millis, eid))
        timeline = [eid for eid in timeline if membership[eid]]
        for i in range(len(timeline) - 1):
            a_set, b_set = membership[timeline[i]], membership[timeline[i + 1]]
            if a_set == b_set:
                continue
            gap = log.events[timeline[i + 1]].time.millis - log.events[timeline[i]].time.millis
            for a in sorted(a_set - b_set):
                for b in sorted(b_set - a_set):
                    out.append((oid, obj.type, a, b, gap))
    return out


# ---------------------------------------------------------------------------
# Derivation-replay membership oracle (token classifier + Earley recognizer)
# ---------------------------------------------------------------------------

_LEX = re.compile(
    r"""
      (?P<WS>[ \t\r\n]+)
    | (?P<TS>t"(?:[^"\\]|\\.)*")
    | (?P<STRING>"(?:[^"\\]|\\.)*")
    | (?P<NUMBER>-?[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)
    | (?P<IDENT>[A-Za-z_][A-Za-z0-9_\-]*)
    | (?P<OPSYM><=|>=|!=|≠|<|>|=)
    | (?P<PUNCT>[{}(),:;])
    """,
    re.VERBOSE,
)

_PUNCT = {"{": "LB", "}": "RB", "(": "LP", ")": "RP", ",": "COMMA", ":": "COLON", ";": "SEMI"}
_WORDS = {"INCLUDE", "EXCLUDE", "AND", "OR", "SCOPE"}


def _unescape_quoted(raw: str) -> str:
    body = raw[1:-1]
    out, i = [], 0
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body):
            out.append(body[i + 1])
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def _lex(text: str) -> list[tuple[str, str]] | None:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        if m is None:
            return None
        kind = m.lastgroup or ""
        lexeme = m.group()
        if kind == "PUNCT":
            kind = _PUNCT[lexeme]
        elif kind == "IDENT" and lexeme in _WORDS:
            kind = lexeme
        elif kind == "TS":
            # A timestamp literal is only a token when its payload is a
            # real instant, matching the parser's lexical contract.
            try:
                Timestamp.from_iso(_unescape_quoted(lexeme[1:]))
            except ValueError:
                return None
        if kind != "WS":
            tokens.append((kind, lexeme))
        pos = m.end()
    return tokens


def _t(category: str, text: str | None = None):
    return ("t", category, text)


def _n(name: str):
    return ("n", name)


_GRAMMAR: dict[str, list[list]] = {
    "ruleset": [
        [_n("rule")],
        [_t("LP"), _n("ruleset"), _t("AND"), _n("ruleset"), _t("RP")],
        [_t("LP"), _n("ruleset"), _t("OR"), _n("ruleset"), _t("RP")],
    ],
    "rule": [
        [_t("INCLUDE"), _n("statement")],
        [_t("EXCLUDE"), _n("statement")],
        [_t("INCLUDE"), _n("statement"), _t("AND"), _t("EXCLUDE"), _n("statement")],
    ],
    "statement": [
        [_t("LB"), _n("items"), _t("RB")],
    ],
    "items": [
        [_n("item")],
        [_n("item"), _t("COMMA"), _n("items")],
    ],
    "item": [
        [_t("LP"), _n("entity"), _t("RP")],
        [_t("LP"), _n("entity"), _t("COMMA"), _t("COMMA"), _t("COMMA"), _t("RP")],
        [_t("LP"), _n("entity"), _t("COMMA"), _n("name"), _t("COMMA"), _n("op"), _t("COMMA"), _n("value"), _t("RP")],
    ],
    "entity": [
        [_n("name")],
        [_t("IDENT", "object"), _t("COLON"), _n("name")],
        [_t("IDENT", "event"), _t("COLON"), _n("name")],
    ],
    "name": [
        [_t("IDENT")],
        [_t("STRING")],
    ],
    "op": [
        [_t("OPSYM")],
        [_t("IDENT", "contains")],
    ],
    "value": [
        [_t("STRING")],
        [_t("NUMBER")],
        [_t("IDENT", "true")],
        [_t("IDENT", "false")],
        [_t("TS")],
    ],
}


def _earley(tokens: list[tuple[str, str]], start: str) -> bool:
    # States are (head, tuple(body), dot, origin).
    chart: list[set] = [set() for _ in range(len(tokens) + 1)]
    for body in _GRAMMAR[start]:
        chart[0].add((start, tuple(map(tuple, body)), 0, 0))
    for i in range(len(tokens) + 1):
        agenda = list(chart[i])
        while agenda:
            state = agenda.pop()
            head, body, dot, origin = state
            if dot < len(body):
                sym = body[dot]
                if sym[0] == "n":
                    for production in _GRAMMAR[sym[1]]:
                        new = (sym[1], tuple(map(tuple, production)), 0, i)
                        if new not in chart[i]:
                            chart[i].add(new)
                            agenda.append(new)
                    # Nullable rules do not occur in this grammar, so no
                    # completed-empty handling is needed here.
                else:
                    _, category, text = sym
                    if i < len(tokens):
                        tok_cat, tok_text = tokens[i]
                        if tok_cat == category and (text is None or tok_text == text):
                            moved = (head, body, dot + 1, origin)
                            if moved not in chart[i + 1]:
                                chart[i + 1].add(moved)
            else:
                for prev in list(chart[origin]):
                    p_head, p_body, p_dot, p_origin = prev
                    if p_dot < len(p_body) and p_body[p_dot] == ("n", head):
                        moved = (p_head, p_body, p_dot + 1, p_origin)
                        if moved not in chart[i]:
                            chart[i].add(moved)
                            agenda.append(moved)
    return any(
        head == start and dot == len(body) and origin == 0
        for head, body, dot, origin in chart[len(tokens)]
    )


def oracle_accepts(text: str) -> bool:
    """True iff the text derives from the ruleset start symbol."""
    tokens = _lex(text)
    if tokens is None or not tokens:
        return False
    return _earley(tokens, "ruleset")
