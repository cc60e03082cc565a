/** Shared test fixtures. */
import type { GraphJson } from '../src/types.js';

/** Graph JSON the service derives for the five-event order/item sample log
 * enriched with P1 = include order, P2 = include ship. */
export const SAMPLE_A_GRAPH: GraphJson = {
  nodes: [
    {
      id: 'P1',
      event_count: 3,
      object_count: 3,
      type_diversity: 2,
      in_degree: 0,
      out_degree: 1,
      total_degree: 1,
    },
    {
      id: 'P2',
      event_count: 1,
      object_count: 2,
      type_diversity: 1,
      in_degree: 1,
      out_degree: 0,
      total_degree: 1,
    },
  ],
  edges: [
    {
      source: 'P1',
      target: 'P2',
      shared_object_count: 2,
      transition_count: 2,
      mean_flow_time_ms: 5_400_000,
      per_type: {
        item: { object_count: 2, transition_count: 2, mean_flow_time_ms: 5_400_000 },
      },
    },
  ],
};
