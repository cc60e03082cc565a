"""Rule evaluation semantics and scope enrichment."""
from __future__ import annotations

import itertools
import random

import pytest

from procscope.engine import (
    Selection,
    apply_scope,
    apply_scopes,
    evaluate,
    match_filter_item,
    resolve_scope,
    scope_summary,
)
from procscope.errors import (
    DuplicateScopeNameError,
    EmptyObjectSetError,
    EmptyScopeError,
    UnresolvedEntityError,
)
from procscope.lang import ScopeDefinition, parse_ruleset
from procscope.lang.ast import And, EntityRef, FilterItem, Leaf, Or, Rule, Statement
from procscope.model import IN_SCOPE, INVOLVES, PART_OF, Relation, is_pocel, validate_log

from generators import _rand_item, rand_log, rand_ruleset
from oracles import TOP, oracle_evaluate, oracle_resolve


def item(text: str) -> FilterItem:
    ruleset = parse_ruleset(f"INCLUDE {{{text}}}")
    return ruleset.rule.include.items[0]


class TestMatchFilterItem:
    def test_object_type(self, sample_a):
        sel = match_filter_item(sample_a, item("(order)"))
        assert sel == Selection(events=None, objects=frozenset({"o1"}))

    def test_object_condition_any_timestamped_value(self, sample_a):
        sel = match_filter_item(sample_a, item("(item, weight, >, 10)"))
        assert sel == Selection(events=None, objects=frozenset({"i2"}))

    def test_event_type(self, sample_a):
        sel = match_filter_item(sample_a, item("(ship)"))
        assert sel == Selection(events=frozenset({"e4"}), objects=None)

    def test_missing_attribute_never_matches(self, sample_a):
        sel = match_filter_item(sample_a, item('(item, weight, !=, 5)'))
        assert sel.objects == frozenset({"i2"})  # i1 has weight 5; both carry the attr
        from procscope.model import Log, ObjectEntity

        bare = Log(
            event_types={},
            object_types={"item": {"weight": "number"}},
            events={},
            objects={"x": ObjectEntity("x", "item")},
            e2o=frozenset(),
            o2o=frozenset(),
        )
        assert match_filter_item(bare, item("(item, weight, !=, 5)")).objects == frozenset()

    def test_unresolved_entity(self, sample_a):
        with pytest.raises(UnresolvedEntityError):
            match_filter_item(sample_a, item("(widget)"))


class TestEvaluate:
    def test_statement_collects_both_sides(self, sample_a):
        sel = evaluate(sample_a, parse_ruleset("INCLUDE {(order), (place)}"))
        assert sel == Selection(events=frozenset({"e1"}), objects=frozenset({"o1"}))

    def test_standalone_exclude_complements(self, sample_a):
        sel = evaluate(sample_a, parse_ruleset("EXCLUDE {(item, weight, >, 10)}"))
        assert sel == Selection(events=None, objects=frozenset({"o1", "i1"}))

    def test_and_intersects_with_empty_result(self, sample_a):
        sel = evaluate(sample_a, parse_ruleset("(INCLUDE {(pick)} AND INCLUDE {(ship)})"))
        assert sel == Selection(events=frozenset(), objects=None)

    def test_or_absorbs_unconstrained(self, sample_a):
        sel = evaluate(sample_a, parse_ruleset("(INCLUDE {(order)} OR INCLUDE {(place)})"))
        assert sel == Selection(events=None, objects=None)

    def test_combined_rule_subtracts(self, sample_a):
        sel = evaluate(sample_a, parse_ruleset("INCLUDE {(pick)} AND EXCLUDE {(ship)}"))
        assert sel.events == frozenset({"e2", "e3", "e5"})
        sel2 = evaluate(sample_a, parse_ruleset("INCLUDE {(item)} AND EXCLUDE {(item, weight, >, 10)}"))
        assert sel2.objects == frozenset({"i1"})

    def test_exclusion_of_unconstrained_side_materializes(self, sample_a):
        # include side never mentions events, exclusion does: full set minus excluded
        sel = evaluate(sample_a, parse_ruleset("INCLUDE {(order)} AND EXCLUDE {(pick)}"))
        assert sel.events == frozenset({"e1", "e4"})
        assert sel.objects == frozenset({"o1"})


class TestResolveScope:
    def test_object_rule_pulls_events(self, sample_a):
        result = resolve_scope(sample_a, evaluate(sample_a, parse_ruleset("INCLUDE {(order)}")))
        assert result.events == frozenset({"e1", "e2", "e3"})
        assert result.objects == frozenset({"o1"})

    def test_event_rule_pulls_objects(self, sample_a):
        result = resolve_scope(sample_a, evaluate(sample_a, parse_ruleset("INCLUDE {(ship)}")))
        assert result.events == frozenset({"e4"})
        assert result.objects == frozenset({"i1", "i2"})

    def test_empty_scope_rejected(self, sample_a):
        with pytest.raises(EmptyScopeError):
            resolve_scope(
                sample_a,
                evaluate(sample_a, parse_ruleset("(INCLUDE {(pick)} AND INCLUDE {(ship)})")),
            )


class TestApplyScope:
    def test_p1_shape(self, sample_a):
        enriched = apply_scope(sample_a, "P1", parse_ruleset("INCLUDE {(order)}"))
        assert is_pocel(enriched).is_pocel
        assert enriched.objects["P1"].type == "process"
        in_scope = {r for r in enriched.e2o if r.qualifier == IN_SCOPE}
        assert in_scope == {Relation(e, IN_SCOPE, "P1") for e in ("e1", "e2", "e3")}
        assert {r for r in enriched.o2o if r.qualifier == INVOLVES} == {
            Relation("P1", INVOLVES, "o1"),
        }

    def test_input_not_modified(self, sample_a):
        before_events = dict(sample_a.events)
        before_e2o = set(sample_a.e2o)
        apply_scope(sample_a, "P1", parse_ruleset("INCLUDE {(order)}"))
        assert sample_a.events == before_events
        assert set(sample_a.e2o) == before_e2o
        assert "P1" not in sample_a.objects

    def test_conservative(self, sample_a):
        enriched = apply_scope(sample_a, "P1", parse_ruleset("INCLUDE {(order)}"))
        assert enriched.events == sample_a.events
        assert len(enriched.objects) == len(sample_a.objects) + 1
        assert sample_a.e2o <= enriched.e2o
        assert sample_a.o2o <= enriched.o2o
        assert validate_log(enriched).ok

    def test_duplicate_name(self, sample_a):
        enriched = apply_scope(sample_a, "P1", parse_ruleset("INCLUDE {(order)}"))
        with pytest.raises(DuplicateScopeNameError):
            apply_scope(enriched, "P1", parse_ruleset("INCLUDE {(ship)}"))

    def test_name_clash_with_event_id(self, sample_a):
        with pytest.raises(DuplicateScopeNameError):
            apply_scope(sample_a, "e1", parse_ruleset("INCLUDE {(order)}"))

    def test_empty_object_set(self, times):
        from procscope.model import Event, Log

        log = Log(
            event_types={"ping": {}},
            object_types={},
            events={"e": Event("e", "ping", times[0])},
            objects={},
            e2o=frozenset(),
            o2o=frozenset(),
        )
        with pytest.raises(EmptyObjectSetError):
            apply_scope(log, "P", parse_ruleset("INCLUDE {(ping)}"))

    def test_aggregation_scope(self, sample_a_enriched):
        p3 = apply_scope(
            sample_a_enriched,
            "P3",
            parse_ruleset('INCLUDE {(process, id, =, "P1"), (process, id, =, "P2")}'),
        )
        p3_events = {r.source for r in p3.e2o if r.target == "P3"}
        p1_events = {r.source for r in p3.e2o if r.target == "P1"}
        p2_events = {r.source for r in p3.e2o if r.target == "P2"}
        assert p3_events == p1_events | p2_events
        assert {r for r in p3.o2o if r.qualifier == PART_OF} == {
            Relation("P1", PART_OF, "P3"), Relation("P2", PART_OF, "P3"),
        }
        assert is_pocel(p3).is_pocel


class TestApplyScopes:
    def test_empty_list_is_identity(self, sample_a):
        assert apply_scopes(sample_a, []) == sample_a

    def test_two_scopes(self, sample_a):
        enriched = apply_scopes(sample_a, [
            ScopeDefinition("P1", parse_ruleset("INCLUDE {(order)}")),
            ScopeDefinition("P2", parse_ruleset("INCLUDE {(ship)}")),
        ])
        assert set(enriched.process_ids) == {"P1", "P2"}
        p1, p2 = scope_summary(enriched, "P1"), scope_summary(enriched, "P2")
        assert (p1.event_count, p1.object_count) == (3, 1)
        assert (p2.event_count, p2.object_count) == (1, 2)

    def test_failure_reports_index(self, sample_a):
        defs = [
            ScopeDefinition("P1", parse_ruleset("INCLUDE {(order)}")),
            ScopeDefinition("P1", parse_ruleset("INCLUDE {(ship)}")),
        ]
        with pytest.raises(DuplicateScopeNameError) as err:
            apply_scopes(sample_a, defs)
        assert err.value.details["scope_index"] == 1


def _materialize(log, sel: Selection):
    events = set(log.events) if sel.events is None else set(sel.events)
    objects = set(log.objects) if sel.objects is None else set(sel.objects)
    return events, objects


class TestOracleAgreement:
    def test_evaluation_against_brute_force(self):
        rng = random.Random(1234)
        for _ in range(150):
            log = rand_log(rng, max_events=30)
            ast = rand_ruleset(rng, log, max_depth=4)
            sel = evaluate(log, ast)
            oracle_events, oracle_objects = oracle_evaluate(log, ast)
            assert (sel.events is None) == (oracle_events is TOP)
            assert (sel.objects is None) == (oracle_objects is TOP)
            if sel.events is not None:
                assert set(sel.events) == oracle_events
            if sel.objects is not None:
                assert set(sel.objects) == oracle_objects

    def test_resolution_against_brute_force(self):
        rng = random.Random(4321)
        checked = 0
        for _ in range(150):
            log = rand_log(rng, max_events=30)
            ast = rand_ruleset(rng, log, max_depth=3)
            sel = evaluate(log, ast)
            expected_events, expected_objects = oracle_resolve(
                log,
                TOP if sel.events is None else set(sel.events),
                TOP if sel.objects is None else set(sel.objects),
            )
            if not expected_events:
                with pytest.raises(EmptyScopeError):
                    resolve_scope(log, sel)
                continue
            result = resolve_scope(log, sel)
            assert set(result.events) == expected_events
            assert set(result.objects) == expected_objects
            checked += 1
        assert checked > 50

    def test_combined_rule_equals_and_of_leaves(self):
        """The two readings of INCLUDE s AND EXCLUDE t coincide, exhaustively
        over statements drawn from a small item pool."""
        rng = random.Random(777)
        for _ in range(12):
            log = rand_log(rng, max_events=20)
            pool = [_rand_item(rng, log) for _ in range(4)]
            statements = [Statement((a,)) for a in pool]
            statements += [Statement((a, b)) for a, b in itertools.combinations(pool, 2)]
            for s, t in itertools.product(statements, repeat=2):
                combined = Leaf(Rule(include=s, exclude=t))
                split = And(Leaf(Rule(include=s)), Leaf(Rule(exclude=t)))
                assert evaluate(log, combined) == evaluate(log, split)

    def test_or_is_monotone(self):
        rng = random.Random(2024)
        for _ in range(80):
            log = rand_log(rng, max_events=25)
            a = rand_ruleset(rng, log, max_depth=2)
            b = rand_ruleset(rng, log, max_depth=2)
            single_e, single_o = _materialize(log, evaluate(log, a))
            both_e, both_o = _materialize(log, evaluate(log, Or(a, b)))
            assert single_e <= both_e
            assert single_o <= both_o
