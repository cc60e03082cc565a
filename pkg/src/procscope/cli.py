"""``procscope`` command line: validate scope files, enrich logs, derive
and export execution graphs, and report log statistics.

Exit codes: 0 success, 1 validation findings, 2 usage error (argparse),
3 I/O or model error. Reports go to stdout, diagnostics to stderr. Output
files are written atomically (temp file + rename). Set ``PROCSCOPE_NO_COLOR=1``
to disable ANSI styling.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import engine, graph as beg
from .errors import ProcscopeError
from .lang import parse_scope_file, validate_ruleset
from .model import Log, is_pocel
from .ocel_json import export_json, import_json


def _styled(text: str, code: str) -> str:
    if os.environ.get("PROCSCOPE_NO_COLOR") == "1" or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProcscopeError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_atomic(path: str, payload: str) -> None:
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=str(target.parent) or ".", prefix=f".{target.name}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
            os.replace(tmp, target)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise ProcscopeError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _load_log(path: str) -> Log:
    return import_json(_read_text(path))


def cmd_validate(args: argparse.Namespace) -> int:
    log = _load_log(args.log)
    defs = parse_scope_file(_read_text(args.scopes))
    findings = 0
    for definition in defs:
        report = validate_ruleset(definition.ruleset, log)
        for violation in report.violations:
            findings += 1
            loc = f" at {violation.pos[0]}:{violation.pos[1]}" if violation.pos else ""
            print(f"{definition.name}{loc}: {violation.code}: {violation.where}: {violation.detail}")
    if findings:
        print(f"{findings} finding(s) in {len(defs)} scope(s)")
        return 1
    print(_styled(f"OK: {len(defs)} scopes valid", "32"))
    return 0


def cmd_enrich(args: argparse.Namespace) -> int:
    log = _load_log(args.log)
    defs = parse_scope_file(_read_text(args.scopes))
    enriched = engine.apply_scopes(log, defs)
    _write_atomic(args.out, export_json(enriched))
    for definition in defs:
        summary = engine.scope_summary(enriched, definition.name)
        print(f"{summary.name}: {summary.event_count} events, {summary.object_count} objects")
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    log = _load_log(args.pocel)
    g = beg.build_graph(log)
    if args.format == "dot":
        cfg = beg.DotConfig(
            node_size=args.node_size, edge_label=args.edge_label, node_color=args.node_color,
        )
        payload = beg.export_dot(g, cfg)
    elif args.format == "vosviewer":
        payload = beg.export_vosviewer(g)
    else:
        payload = beg.export_graph_json(g)
    _write_atomic(args.out, payload)
    print(f"wrote {args.format} graph: {len(g.nodes)} nodes, {len(g.edges)} edges")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    log = _load_log(args.log)
    verdict = is_pocel(log)
    print(f"events        {len(log.events)}")
    print(f"objects       {len(log.objects)}")
    print(f"e2o relations {len(log.e2o)}")
    print(f"o2o relations {len(log.o2o)}")
    print("event types:")
    for name in sorted(log.event_types):
        print(f"  {name}  {len(log.events_by_type.get(name, ()))}")
    print("object types:")
    for name in sorted(log.object_types):
        print(f"  {name}  {len(log.objects_by_type.get(name, ()))}")
    print(f"POCEL: {'yes' if verdict.is_pocel else 'no'}")
    if verdict.is_pocel:
        print("process scopes:")
        for pid in log.process_ids:
            summary = engine.scope_summary(log, pid)
            print(f"  {pid}  {summary.event_count} events")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procscope",
        description="Scope-enrich object-centric event logs and analyze process interactions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scope file against a log")
    p.add_argument("log", help="OCEL 2.0 JSON file (.jsonocel or .json)")
    p.add_argument("scopes", help="scope definitions file (.scopes)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("enrich", help="apply scopes and write the enriched log")
    p.add_argument("log")
    p.add_argument("scopes")
    p.add_argument("out", help="output .jsonocel path")
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("graph", help="derive the execution graph from an enriched log")
    p.add_argument("pocel", help="scope-enriched OCEL 2.0 JSON file")
    p.add_argument("out", help="output path")
    p.add_argument("--format", choices=("dot", "json", "vosviewer"), default="dot")
    p.add_argument("--edge-label", dest="edge_label",
                   choices=beg.EDGE_LABEL_METRICS, default="shared_objects")
    p.add_argument("--node-size", dest="node_size",
                   choices=beg.NODE_SIZE_METRICS, default="object_count")
    p.add_argument("--node-color", dest="node_color",
                   choices=beg.NODE_COLOR_MODES, default="total")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("stats", help="print counts and the POCEL verdict")
    p.add_argument("log")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProcscopeError as exc:
        print(str(exc), file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
