/**
 * Rule drafts: the builder's editing model and its lossless mapping onto
 * ruleset JSON.
 *
 * The builder covers a deliberate subset of the rule grammar: a scope is a
 * flat list of rules combined with one global AND/OR. The full parenthesized
 * grammar stays available through scope-file upload on the server side.
 *
 * Serialization is invertible on that subset: `rulesetToDraft` returns the
 * draft a ruleset came from, or null when the shape needs the full grammar.
 * A single include-only rule without conditions is canonically a basic
 * draft; advanced drafts of exactly that shape load back as basic.
 */
import type {
  EntityRefJson,
  FilterItemJson,
  Operator,
  RuleNodeJson,
  RulesetJson,
  ValueJson,
} from './types.js';

export interface ItemDraft {
  entity: EntityRefJson;
  condition: { attribute: string; operator: Operator; value: ValueJson } | null;
}

export interface RuleDraftRow {
  include: ItemDraft[];
  exclude: ItemDraft[];
}

export interface BasicDraft {
  mode: 'basic';
  name: string;
  /** Checked type shortcuts; serialized as condition-less include items. */
  picks: EntityRefJson[];
}

export interface AdvancedDraft {
  mode: 'advanced';
  name: string;
  combinator: 'and' | 'or';
  rows: RuleDraftRow[];
}

export type RuleDraft = BasicDraft | AdvancedDraft;

function itemToJson(item: ItemDraft): FilterItemJson {
  const out: FilterItemJson = { entity: { ...item.entity } };
  if (item.condition) {
    out.attribute = item.condition.attribute;
    out.operator = item.condition.operator;
    out.value = item.condition.value;
  }
  return out;
}

function itemFromJson(raw: FilterItemJson): ItemDraft {
  const condition =
    raw.attribute !== undefined && raw.operator !== undefined && raw.value !== undefined
      ? { attribute: raw.attribute, operator: raw.operator, value: raw.value }
      : null;
  return { entity: { ...raw.entity }, condition };
}

function rowToJson(row: RuleDraftRow): RuleNodeJson {
  const rule: RuleNodeJson['rule'] = {};
  if (row.include.length) rule.include = row.include.map(itemToJson);
  if (row.exclude.length) rule.exclude = row.exclude.map(itemToJson);
  return { rule };
}

/** Serialize a draft to the ruleset JSON the API expects. */
export function draftToRuleset(draft: RuleDraft): RulesetJson {
  if (draft.mode === 'basic') {
    if (!draft.picks.length) throw new Error('basic draft needs at least one checked type');
    return {
      rule: { include: draft.picks.map((entity) => ({ entity: { ...entity } })) },
    };
  }
  const rows = draft.rows.filter((row) => row.include.length || row.exclude.length);
  if (!rows.length) throw new Error('advanced draft needs at least one non-empty rule');
  let node: RulesetJson = rowToJson(rows[0]);
  for (const row of rows.slice(1)) {
    node = { op: draft.combinator, left: node, right: rowToJson(row) };
  }
  return node;
}

function isRuleNode(node: RulesetJson): node is RuleNodeJson {
  return 'rule' in node;
}

/** Flatten a left-leaning chain of one operator into rule nodes, or null. */
function flattenChain(node: RulesetJson): { op: 'and' | 'or'; rules: RuleNodeJson[] } | null {
  if (isRuleNode(node)) return { op: 'and', rules: [node] };
  const rules: RuleNodeJson[] = [];
  const op = node.op;
  let current: RulesetJson = node;
  while (!isRuleNode(current)) {
    if (current.op !== op || !isRuleNode(current.right)) return null;
    rules.unshift(current.right);
    current = current.left;
  }
  rules.unshift(current);
  return { op, rules };
}

/**
 * Load a ruleset back into the builder. Returns null when the tree is not
 * expressible as a flat single-operator draft.
 */
export function rulesetToDraft(name: string, node: RulesetJson): RuleDraft | null {
  const chain = flattenChain(node);
  if (!chain) return null;

  const rows: RuleDraftRow[] = [];
  for (const ruleNode of chain.rules) {
    const include = (ruleNode.rule.include ?? []).map(itemFromJson);
    const exclude = (ruleNode.rule.exclude ?? []).map(itemFromJson);
    if (!include.length && !exclude.length) return null;
    rows.push({ include, exclude });
  }

  if (
    rows.length === 1 &&
    !rows[0].exclude.length &&
    rows[0].include.every((item) => item.condition === null)
  ) {
    return { mode: 'basic', name, picks: rows[0].include.map((item) => item.entity) };
  }
  return { mode: 'advanced', name, combinator: chain.op, rows };
}
