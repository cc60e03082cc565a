"""Tour of the scope rule language: parse, print, validate, evaluate.

Rules include or exclude entities (object types and event types), optionally
filtered by an attribute condition, and compose with parenthesized AND/OR.
"""
import json

from procscope import (
    evaluate,
    parse_ruleset,
    parse_scope_file,
    print_ruleset,
    resolve_scope,
    ruleset_from_json,
    ruleset_to_json,
    validate_ruleset,
)
from procscope.synthetic import generate_logistics_log

log = generate_logistics_log(seed=7, orders=40).log

# Type-only rules mirror the "just tick the types you want" workflow.
basic = parse_ruleset("INCLUDE {(order), (place_order), (confirm_order)}")
print("basic rule:", print_ruleset(basic))

# Conditions: (entity, attribute, operator, value). Sloppy spacing and empty
# condition slots are fine; printing canonicalizes.
advanced = parse_ruleset(
    'INCLUDE {( handling_unit , weight , > , 40 ), (container ,,,)} '
    'AND EXCLUDE {(load_carrier, mode, =, "train")}'
)
print("canonical:", print_ruleset(advanced))

# Compound rulesets are explicitly parenthesized, exactly one operator per pair.
compound = parse_ruleset(
    "(INCLUDE {(depart_warehouse)} OR (INCLUDE {(arrive_terminal)} "
    "OR INCLUDE {(unload_truck)}))"
)

# Static validation resolves names against a concrete log and checks kinds.
for ruleset in (basic, advanced, compound):
    assert validate_ruleset(ruleset, log).ok
bad = parse_ruleset('INCLUDE {(handling_unit, weight, contains, "x")}')
for violation in validate_ruleset(bad, log).violations:
    print("rejected:", violation)

# Evaluation denotes a ruleset as (event side, object side); resolving links
# the two sides through the event-object relations.
selection = evaluate(log, advanced)
scope = resolve_scope(log, selection)
print(f"\nadvanced rule selects {len(scope.events)} events / {len(scope.objects)} objects")

# Rulesets serialize losslessly to JSON for reuse and for the HTTP API.
payload = ruleset_to_json(advanced)
assert ruleset_from_json(payload) == advanced
print("\nruleset as JSON:")
print(json.dumps(json.loads(payload), indent=2)[:400], "...")

# Scope files bundle named rulesets.
defs = parse_scope_file(
    'SCOPE "Heavy goods" : INCLUDE {(handling_unit, weight, >, 40)} ;\n'
    'SCOPE "Rail exports" : INCLUDE {(load_carrier, mode, =, "train")} ;\n'
)
print("\nscope file defines:", [d.name for d in defs])
