/** Shared types mirroring the procscope HTTP API payloads. */

export type EntityKind = 'object' | 'event' | 'auto';

export type Operator = '<' | '>' | '=' | '!=' | '<=' | '>=' | 'contains';

export const OPERATORS: readonly Operator[] = ['<', '>', '=', '!=', '<=', '>=', 'contains'];

/** Attribute value in ruleset JSON: scalar or a tagged timestamp. */
export type ValueJson = string | number | boolean | { timestamp: string };

export interface EntityRefJson {
  kind: EntityKind;
  name: string;
}

export interface FilterItemJson {
  entity: EntityRefJson;
  attribute?: string;
  operator?: Operator;
  value?: ValueJson;
}

export interface RuleNodeJson {
  rule: { include?: FilterItemJson[]; exclude?: FilterItemJson[] };
}

export interface OpNodeJson {
  op: 'and' | 'or';
  left: RulesetJson;
  right: RulesetJson;
}

export type RulesetJson = RuleNodeJson | OpNodeJson;

export interface ScopePayload {
  name: string;
  ruleset: RulesetJson;
}

/** Registries returned by POST /logs, feeding the pickers. */
export interface LogInfo {
  log_id: string;
  stats: { events: number; objects: number; e2o: number; o2o: number };
  event_types: Record<string, Record<string, string>>;
  object_types: Record<string, Record<string, string>>;
}

export interface ScopeSummary {
  name: string;
  events: number;
  objects: number;
}

export interface GraphNodeJson {
  id: string;
  event_count: number;
  object_count: number;
  type_diversity: number;
  in_degree: number;
  out_degree: number;
  total_degree: number;
}

export interface GraphEdgeJson {
  source: string;
  target: string;
  shared_object_count: number;
  transition_count: number;
  mean_flow_time_ms: number;
  per_type: Record<
    string,
    { object_count: number; transition_count: number; mean_flow_time_ms: number }
  >;
}

export interface GraphJson {
  nodes: GraphNodeJson[];
  edges: GraphEdgeJson[];
}

export type NodeSizeMetric = 'object_count' | 'type_diversity';
export type EdgeLabelMetric = 'object_types' | 'shared_objects' | 'avg_flow_time';
export type NodeColorMode = 'in' | 'out' | 'total';

export interface GraphViewSettings {
  node_size: NodeSizeMetric;
  edge_label: EdgeLabelMetric;
  node_color: NodeColorMode;
}

export const DEFAULT_SETTINGS: GraphViewSettings = {
  node_size: 'object_count',
  edge_label: 'shared_objects',
  node_color: 'total',
};
