"""Inter-process execution graph derived from a scope-enriched log.

Nodes are the process objects. A handover happens when an object's process
membership changes between two of its consecutive events: for departed
processes ``a`` and entered processes ``b`` one directed handover ``a -> b``
is recorded, timed by the gap between the two events. Events outside every
scope are skipped in the timelines; membership growth or shrinkage alone
(one-sided difference) is not a handover, so aggregate scopes do not create
traffic against their children.

All derivations are pure reads over the log and all exports are
deterministic, so two runs produce byte-identical output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import NotPocelError
from .model import Log, PROCESS_TYPE, is_pocel

#: Sequential five-step palette for degree-based node coloring (light to dark).
PALETTE = ("#eff3ff", "#bdd7e7", "#6baed6", "#3182bd", "#08519c")

NODE_SIZE_METRICS = ("object_count", "type_diversity")
EDGE_LABEL_METRICS = ("object_types", "shared_objects", "avg_flow_time")
NODE_COLOR_MODES = ("in", "out", "total")


@dataclass(frozen=True)
class ProcessNode:
    process_id: str
    event_count: int
    object_count: int
    type_diversity: int
    in_degree: int
    out_degree: int

    @property
    def total_degree(self) -> int:
        return self.in_degree + self.out_degree


@dataclass(frozen=True)
class Handover:
    object_id: str
    object_type: str
    source_process: str
    target_process: str
    flow_time: int  # milliseconds


@dataclass(frozen=True)
class TypeStats:
    object_count: int
    transition_count: int
    mean_flow_time: float


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    shared_object_count: int
    transition_count: int
    mean_flow_time: float
    per_type: dict[str, TypeStats] = field(default_factory=dict)


@dataclass(frozen=True)
class ExecutionGraph:
    nodes: tuple[ProcessNode, ...]
    edges: tuple[GraphEdge, ...]


@dataclass(frozen=True)
class DotConfig:
    node_size: str = "object_count"
    edge_label: str = "shared_objects"
    node_color: str = "total"

    def __post_init__(self) -> None:
        if self.node_size not in NODE_SIZE_METRICS:
            raise ValueError(f"node_size must be one of {NODE_SIZE_METRICS}")
        if self.edge_label not in EDGE_LABEL_METRICS:
            raise ValueError(f"edge_label must be one of {EDGE_LABEL_METRICS}")
        if self.node_color not in NODE_COLOR_MODES:
            raise ValueError(f"node_color must be one of {NODE_COLOR_MODES}")


def _require_pocel(log: Log) -> None:
    if not is_pocel(log).is_pocel:
        raise NotPocelError("input log is not scope-enriched")


def process_membership(log: Log) -> dict[str, set[str]]:
    """Event id -> process object ids it relates to (any qualifier).

    Every event appears, with an empty set when it is outside all scopes.
    """
    _require_pocel(log)
    processes = set(log.process_ids)
    out: dict[str, set[str]] = {eid: set() for eid in log.events}
    for rel in log.e2o:
        if rel.target in processes:
            out[rel.source].add(rel.target)
    return out


def derive_handovers(log: Log) -> list[Handover]:
    """Walk every non-process object's scoped timeline and emit one handover
    per (departed process, entered process) pair at each membership change.

    Order: object id, then timeline position, then (source, target).
    """
    _require_pocel(log)
    membership = process_membership(log)
    out: list[Handover] = []
    for oid in sorted(log.objects):
        obj = log.objects[oid]
        if obj.type == PROCESS_TYPE:
            continue
        timeline = [
            eid for eid in log.events_by_object.get(oid, ()) if membership[eid]
        ]
        for prev, nxt in zip(timeline, timeline[1:]):
            before, after = membership[prev], membership[nxt]
            if before == after:
                continue
            gap = log.events[nxt].time.millis - log.events[prev].time.millis
            for a in sorted(before - after):
                for b in sorted(after - before):
                    out.append(Handover(oid, obj.type, a, b, gap))
    return out


def build_graph(log: Log) -> ExecutionGraph:
    """One node per process object (isolated ones included), one edge per
    ordered process pair with at least one handover."""
    _require_pocel(log)
    handovers = derive_handovers(log)

    grouped: dict[tuple[str, str], list[Handover]] = {}
    for h in handovers:
        grouped.setdefault((h.source_process, h.target_process), []).append(h)

    edges = []
    for (source, target) in sorted(grouped):
        bucket = grouped[(source, target)]
        by_type: dict[str, list[Handover]] = {}
        for h in bucket:
            by_type.setdefault(h.object_type, []).append(h)
        per_type = {
            otype: TypeStats(
                object_count=len({h.object_id for h in hs}),
                transition_count=len(hs),
                mean_flow_time=sum(h.flow_time for h in hs) / len(hs),
            )
            for otype, hs in sorted(by_type.items())
        }
        edges.append(GraphEdge(
            source=source,
            target=target,
            shared_object_count=len({h.object_id for h in bucket}),
            transition_count=len(bucket),
            mean_flow_time=sum(h.flow_time for h in bucket) / len(bucket),
            per_type=per_type,
        ))

    in_deg: dict[str, int] = {}
    out_deg: dict[str, int] = {}
    for edge in edges:
        out_deg[edge.source] = out_deg.get(edge.source, 0) + 1
        in_deg[edge.target] = in_deg.get(edge.target, 0) + 1

    nodes = []
    for pid in log.process_ids:
        seen_objects: set[str] = set()
        seen_types: set[str] = set()
        scope_events = log.events_by_object.get(pid, ())
        for eid in scope_events:
            for _, oid in log.relations_by_event.get(eid, ()):
                obj = log.objects[oid]
                if obj.type != PROCESS_TYPE:
                    seen_objects.add(oid)
                    seen_types.add(obj.type)
        nodes.append(ProcessNode(
            process_id=pid,
            event_count=len(scope_events),
            object_count=len(seen_objects),
            type_diversity=len(seen_types),
            in_degree=in_deg.get(pid, 0),
            out_degree=out_deg.get(pid, 0),
        ))

    return ExecutionGraph(nodes=tuple(nodes), edges=tuple(edges))


def humanize_duration(millis: float) -> str:
    """Render a duration as its two most significant nonzero units, e.g. ``2d 4h``."""
    total = int(round(millis))
    if total <= 0:
        return "0ms"
    units = (("d", 86_400_000), ("h", 3_600_000), ("m", 60_000), ("s", 1_000), ("ms", 1))
    parts = []
    rest = total
    for suffix, width in units:
        amount, rest = divmod(rest, width)
        if amount:
            parts.append(f"{amount}{suffix}")
        if len(parts) == 2:
            break
    return " ".join(parts)


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _scale(value: float, lo: float, hi: float, out_lo: float, out_hi: float) -> float:
    if hi <= lo:
        return (out_lo + out_hi) / 2
    return out_lo + (value - lo) / (hi - lo) * (out_hi - out_lo)


def _bucket(value: int, lo: int, hi: int, steps: int) -> int:
    # Equal-width buckets over the observed range; degenerate range -> lowest.
    if hi <= lo:
        return 0
    idx = int((value - lo) / (hi - lo) * steps)
    return min(idx, steps - 1)


def _edge_label(edge: GraphEdge, metric: str) -> str:
    if metric == "object_types":
        return ", ".join(sorted(edge.per_type))
    if metric == "shared_objects":
        return str(edge.shared_object_count)
    return humanize_duration(edge.mean_flow_time)


def export_dot(graph: ExecutionGraph, cfg: DotConfig = DotConfig()) -> str:
    """Graphviz digraph with node width by the chosen size metric (min-max
    scaled to [0.5, 3.0]), fill color bucketed by the chosen degree, and the
    configured edge labels."""
    nodes = sorted(graph.nodes, key=lambda n: n.process_id)
    edges = sorted(graph.edges, key=lambda e: (e.source, e.target))

    sizes = {n.process_id: getattr(n, cfg.node_size) for n in nodes}
    degrees = {
        n.process_id: {
            "in": n.in_degree, "out": n.out_degree, "total": n.total_degree,
        }[cfg.node_color]
        for n in nodes
    }
    size_lo = min(sizes.values(), default=0)
    size_hi = max(sizes.values(), default=0)
    deg_lo = min(degrees.values(), default=0)
    deg_hi = max(degrees.values(), default=0)

    lines = ["digraph execution {", "  node [shape=circle, style=filled];"]
    for node in nodes:
        width = _scale(sizes[node.process_id], size_lo, size_hi, 0.5, 3.0)
        color = PALETTE[_bucket(degrees[node.process_id], deg_lo, deg_hi, len(PALETTE))]
        lines.append(
            f"  {_dot_quote(node.process_id)} "
            f"[label={_dot_quote(node.process_id)}, width={width:.2f}, fillcolor=\"{color}\"];"
        )
    for edge in edges:
        label = _edge_label(edge, cfg.edge_label)
        lines.append(
            f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)} "
            f"[label={_dot_quote(label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_vosviewer(graph: ExecutionGraph) -> str:
    """VOSviewer network JSON. Its links are undirected, so reciprocal edges
    merge with summed strength; the original directions are preserved in a
    ``directed_note`` per link."""
    items = [
        {
            "id": n.process_id,
            "label": n.process_id,
            "weights": {
                "object_count": n.object_count,
                "type_diversity": n.type_diversity,
                "event_count": n.event_count,
            },
        }
        for n in sorted(graph.nodes, key=lambda n: n.process_id)
    ]
    merged: dict[tuple[str, str], list[GraphEdge]] = {}
    for edge in graph.edges:
        key = (min(edge.source, edge.target), max(edge.source, edge.target))
        merged.setdefault(key, []).append(edge)
    links = []
    for (a, b) in sorted(merged):
        pair = merged[(a, b)]
        note = "; ".join(
            f"{e.source}->{e.target}:{e.shared_object_count}"
            for e in sorted(pair, key=lambda e: (e.source, e.target))
        )
        links.append({
            "source_id": a,
            "target_id": b,
            "strength": sum(e.shared_object_count for e in pair),
            "directed_note": note,
        })
    return json.dumps({"network": {"items": items, "links": links}}, indent=2) + "\n"


def graph_to_dict(graph: ExecutionGraph) -> dict:
    """Plain-dict form of the graph, deterministically ordered.

    Schema: ``{"nodes": [{id, event_count, object_count, type_diversity,
    in_degree, out_degree, total_degree}], "edges": [{source, target,
    shared_object_count, transition_count, mean_flow_time_ms,
    per_type: {type: {object_count, transition_count, mean_flow_time_ms}}}]}``
    """
    nodes = [
        {
            "id": n.process_id,
            "event_count": n.event_count,
            "object_count": n.object_count,
            "type_diversity": n.type_diversity,
            "in_degree": n.in_degree,
            "out_degree": n.out_degree,
            "total_degree": n.total_degree,
        }
        for n in sorted(graph.nodes, key=lambda n: n.process_id)
    ]
    edges = [
        {
            "source": e.source,
            "target": e.target,
            "shared_object_count": e.shared_object_count,
            "transition_count": e.transition_count,
            "mean_flow_time_ms": e.mean_flow_time,
            "per_type": {
                otype: {
                    "object_count": stats.object_count,
                    "transition_count": stats.transition_count,
                    "mean_flow_time_ms": stats.mean_flow_time,
                }
                for otype, stats in sorted(e.per_type.items())
            },
        }
        for e in sorted(graph.edges, key=lambda e: (e.source, e.target))
    ]
    return {"nodes": nodes, "edges": edges}


def export_graph_json(graph: ExecutionGraph) -> str:
    """Serialize :func:`graph_to_dict` as deterministic JSON."""
    return json.dumps(graph_to_dict(graph), indent=2) + "\n"
