"""Scope-enriched object-centric event logs.

Working units:

* :mod:`procscope.model` — the in-memory event log with validation.
* :mod:`procscope.ocel_json` — OCEL 2.0 JSON import/export.
* :mod:`procscope.lang` — the scope rule language (parser, printer,
  validation, JSON form).
* :mod:`procscope.engine` — rule evaluation and scope enrichment.
* :mod:`procscope.graph` — the inter-process execution graph with handover
  and flow-time metrics, plus DOT / VOSviewer / JSON exports.
* :mod:`procscope.synthetic` — deterministic demo log generator.
* :mod:`procscope.cli` / :mod:`procscope.service` — command line and HTTP
  front ends.
"""
from .engine import (
    Selection,
    ScopeResult,
    ScopeSummary,
    apply_scope,
    apply_scopes,
    evaluate,
    match_filter_item,
    resolve_scope,
    scope_summary,
)
from .graph import (
    DotConfig,
    ExecutionGraph,
    GraphEdge,
    Handover,
    ProcessNode,
    build_graph,
    derive_handovers,
    export_dot,
    export_graph_json,
    export_vosviewer,
    process_membership,
)
from .lang import (
    ScopeDefinition,
    parse_ruleset,
    parse_scope_file,
    print_ruleset,
    ruleset_from_json,
    ruleset_to_json,
    validate_ruleset,
)
from .model import (
    Event,
    Log,
    ObjectEntity,
    Relation,
    Timestamp,
    events_of_object,
    is_pocel,
    objects_of_event,
    validate_log,
)
from .ocel_json import export_json, import_json

__version__ = "0.1.0"

__all__ = [
    "Event",
    "ObjectEntity",
    "Relation",
    "Timestamp",
    "Log",
    "validate_log",
    "is_pocel",
    "events_of_object",
    "objects_of_event",
    "import_json",
    "export_json",
    "ScopeDefinition",
    "parse_ruleset",
    "parse_scope_file",
    "print_ruleset",
    "ruleset_to_json",
    "ruleset_from_json",
    "validate_ruleset",
    "Selection",
    "ScopeResult",
    "ScopeSummary",
    "match_filter_item",
    "evaluate",
    "resolve_scope",
    "apply_scope",
    "apply_scopes",
    "scope_summary",
    "ProcessNode",
    "Handover",
    "GraphEdge",
    "ExecutionGraph",
    "DotConfig",
    "process_membership",
    "derive_handovers",
    "build_graph",
    "export_dot",
    "export_vosviewer",
    "export_graph_json",
    "__version__",
]
