/**
 * Single-page analyst loop: upload a log, build scope rulesets (basic or
 * advanced mode), apply them, then explore the inter-process graph.
 *
 * State lives in one store object and every mutation funnels through
 * render(); at most one enrich request is in flight at a time. The page
 * computes no process-mining semantics itself: selections, summaries and
 * graph metrics all come from the service.
 */
import { Api } from './api.js';
import type { AdvancedDraft, ItemDraft, RuleDraft } from './drafts.js';
import { draftToRuleset, rulesetToDraft } from './drafts.js';
import { computeLayout } from './layout.js';
import { encodePng } from './png.js';
import { buildScene, edgeLabel } from './scene.js';
import type {
  EntityKind,
  GraphJson,
  GraphViewSettings,
  LogInfo,
  Operator,
  ScopeSummary,
} from './types.js';
import { DEFAULT_SETTINGS, OPERATORS } from './types.js';

interface Store {
  api: Api;
  log: LogInfo | null;
  drafts: RuleDraft[];
  summaries: ScopeSummary[] | null;
  graph: GraphJson | null;
  settings: GraphViewSettings;
  busy: boolean;
  error: string | null;
}

const store: Store = {
  api: new Api(''),
  log: null,
  drafts: [],
  summaries: null,
  graph: null,
  settings: { ...DEFAULT_SETTINGS },
  busy: false,
  error: null,
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function download(name: string, blob: Blob): void {
  const link = document.createElement('a');
  link.href = URL.createObjectURL(blob);
  link.download = name;
  link.click();
  URL.revokeObjectURL(link.href);
}

// ---- upload ----------------------------------------------------------------

async function onUpload(file: File): Promise<void> {
  store.busy = true;
  store.error = null;
  render();
  try {
    store.log = await store.api.uploadLog(file);
    store.drafts = [];
    store.summaries = null;
    store.graph = null;
  } catch (error) {
    store.error = describe(error);
  } finally {
    store.busy = false;
    render();
  }
}

function describe(error: unknown): string {
  if (error && typeof error === 'object' && 'message' in error) {
    return String((error as { message: unknown }).message);
  }
  return String(error);
}

// ---- drafts ----------------------------------------------------------------

function newBasicDraft(): RuleDraft {
  return { mode: 'basic', name: `Scope ${store.drafts.length + 1}`, picks: [] };
}

function newAdvancedDraft(): AdvancedDraft {
  return {
    mode: 'advanced',
    name: `Scope ${store.drafts.length + 1}`,
    combinator: 'and',
    rows: [{ include: [emptyItem()], exclude: [] }],
  };
}

function emptyItem(): ItemDraft {
  const firstType = Object.keys(store.log?.object_types ?? {}).sort()[0] ?? '';
  return { entity: { kind: 'object', name: firstType }, condition: null };
}

async function applyScopes(): Promise<void> {
  if (!store.log || store.busy) return;
  store.busy = true;
  store.error = null;
  render();
  try {
    const payload = store.drafts.map((draft) => ({
      name: draft.name,
      ruleset: draftToRuleset(draft),
    }));
    await store.api.putScopes(store.log.log_id, payload);
    store.summaries = await store.api.enrich(store.log.log_id);
    store.graph = await store.api.graph(store.log.log_id);
  } catch (error) {
    store.error = describe(error);
  } finally {
    store.busy = false;
    render();
  }
}

function exportRulesets(): void {
  const payload = store.drafts.map((draft) => ({
    name: draft.name,
    ruleset: draftToRuleset(draft),
  }));
  download('rulesets.json', new Blob([JSON.stringify(payload, null, 2)], { type: 'application/json' }));
}

async function importRulesets(file: File): Promise<void> {
  const text = await file.text();
  const raw = JSON.parse(text) as { name: string; ruleset: unknown }[];
  const drafts: RuleDraft[] = [];
  for (const entry of raw) {
    const draft = rulesetToDraft(entry.name, entry.ruleset as never);
    if (!draft) {
      store.error = `scope ${entry.name} uses the full grammar; edit it as a file instead`;
      render();
      return;
    }
    drafts.push(draft);
  }
  store.drafts = drafts;
  store.error = null;
  render();
}

// ---- graph -----------------------------------------------------------------

const CANVAS_W = 800;
const CANVAS_H = 520;

function drawGraph(canvas: HTMLCanvasElement): void {
  if (!store.graph) return;
  const scene = buildScene(
    store.graph,
    computeLayout(store.graph, CANVAS_W, CANVAS_H),
    store.settings,
    CANVAS_W,
    CANVAS_H,
  );
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  ctx.clearRect(0, 0, CANVAS_W, CANVAS_H);
  ctx.fillStyle = '#ffffff';
  ctx.fillRect(0, 0, CANVAS_W, CANVAS_H);

  ctx.strokeStyle = '#787878';
  ctx.fillStyle = '#333333';
  ctx.font = '12px sans-serif';
  for (const edge of scene.edges) {
    const midX = (edge.x1 + edge.x2) / 2;
    const midY = (edge.y1 + edge.y2) / 2;
    const bend = edge.reciprocal ? 18 : 0;
    const nx = -(edge.y2 - edge.y1);
    const ny = edge.x2 - edge.x1;
    const norm = Math.max(Math.hypot(nx, ny), 1);
    const cx = midX + (nx / norm) * bend;
    const cy = midY + (ny / norm) * bend;
    ctx.beginPath();
    ctx.moveTo(edge.x1, edge.y1);
    ctx.quadraticCurveTo(cx, cy, edge.x2, edge.y2);
    ctx.stroke();
    const angle = Math.atan2(edge.y2 - cy, edge.x2 - cx);
    ctx.beginPath();
    ctx.moveTo(edge.x2, edge.y2);
    ctx.lineTo(edge.x2 - 10 * Math.cos(angle - 0.4), edge.y2 - 10 * Math.sin(angle - 0.4));
    ctx.lineTo(edge.x2 - 10 * Math.cos(angle + 0.4), edge.y2 - 10 * Math.sin(angle + 0.4));
    ctx.closePath();
    ctx.fill();
    ctx.fillText(edge.label, cx + 4, cy - 4);
  }

  for (const node of scene.nodes) {
    ctx.beginPath();
    ctx.arc(node.x, node.y, node.radius, 0, 2 * Math.PI);
    ctx.fillStyle = node.fill;
    ctx.fill();
    ctx.strokeStyle = '#1f3044';
    ctx.stroke();
    ctx.fillStyle = '#111111';
    ctx.fillText(node.id, node.x + node.radius + 4, node.y + 4);
  }
}

function exportPng(canvas: HTMLCanvasElement): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  const image = ctx.getImageData(0, 0, CANVAS_W, CANVAS_H);
  const png = encodePng(new Uint8Array(image.data.buffer.slice(0)), CANVAS_W, CANVAS_H);
  download('execution-graph.png', new Blob([png.buffer as ArrayBuffer], { type: 'image/png' }));
}

// ---- rendering -------------------------------------------------------------

function render(): void {
  const root = document.getElementById('app');
  if (!root) return;
  root.replaceChildren();

  root.append(el('h1', {}, 'procscope'));
  if (store.error) root.append(el('p', { class: 'error' }, store.error));
  if (store.busy) root.append(el('p', { class: 'busy' }, 'working…'));

  root.append(renderUpload());
  if (store.log) root.append(renderScopes());
  if (store.summaries) root.append(renderSummaries());
  if (store.graph) root.append(renderGraph());
}

function renderUpload(): HTMLElement {
  const input = el('input', { type: 'file', accept: '.jsonocel,.json' });
  input.addEventListener('change', () => {
    const file = input.files?.[0];
    if (file) void onUpload(file);
  });
  const section = el('section', { class: 'card' }, el('h2', {}, '1. Import a log'), input);
  if (store.log) {
    const s = store.log.stats;
    section.append(
      el('p', {}, `${s.events} events, ${s.objects} objects, ${s.e2o} event-object relations`),
      el('p', {},
        `object types: ${Object.keys(store.log.object_types).sort().join(', ')} — ` +
        `event types: ${Object.keys(store.log.event_types).sort().join(', ')}`),
    );
  }
  return section;
}

function entityOptions(selected: { kind: EntityKind; name: string }): HTMLSelectElement {
  const select = el('select', { class: 'entity' });
  for (const [kind, registry] of [
    ['object', store.log?.object_types ?? {}],
    ['event', store.log?.event_types ?? {}],
  ] as const) {
    for (const name of Object.keys(registry).sort()) {
      const option = el('option', { value: `${kind}:${name}` }, `${kind}: ${name}`);
      if (kind === selected.kind && name === selected.name) option.selected = true;
      select.append(option);
    }
  }
  return select;
}

function renderScopes(): HTMLElement {
  const section = el('section', { class: 'card' }, el('h2', {}, '2. Define process scopes'));
  store.drafts.forEach((draft, index) => section.append(renderDraft(draft, index)));

  const addBasic = el('button', {}, '+ basic scope');
  addBasic.addEventListener('click', () => {
    store.drafts.push(newBasicDraft());
    render();
  });
  const addAdvanced = el('button', {}, '+ advanced scope');
  addAdvanced.addEventListener('click', () => {
    store.drafts.push(newAdvancedDraft());
    render();
  });
  const apply = el('button', { class: 'primary' }, 'Apply scopes');
  apply.addEventListener('click', () => void applyScopes());
  if (!store.drafts.length || store.busy) apply.setAttribute('disabled', '');

  const exportBtn = el('button', {}, 'Export rulesets');
  exportBtn.addEventListener('click', exportRulesets);
  if (!store.drafts.length) exportBtn.setAttribute('disabled', '');
  const importInput = el('input', { type: 'file', accept: '.json', style: 'display:none' });
  importInput.addEventListener('change', () => {
    const file = importInput.files?.[0];
    if (file) void importRulesets(file);
  });
  const importBtn = el('button', {}, 'Import rulesets');
  importBtn.addEventListener('click', () => importInput.click());

  section.append(el('div', { class: 'row' }, addBasic, addAdvanced, apply, exportBtn, importBtn, importInput));
  return section;
}

function renderDraft(draft: RuleDraft, index: number): HTMLElement {
  const name = el('input', { value: draft.name });
  name.addEventListener('change', () => {
    draft.name = name.value;
  });
  const remove = el('button', {}, 'remove');
  remove.addEventListener('click', () => {
    store.drafts.splice(index, 1);
    render();
  });
  const head = el('div', { class: 'row' }, el('strong', {}, `${draft.mode} `), name, remove);
  const body = draft.mode === 'basic' ? renderBasic(draft) : renderAdvanced(draft);
  return el('div', { class: 'draft' }, head, body);
}

function renderBasic(draft: RuleDraft & { mode: 'basic' }): HTMLElement {
  const wrap = el('div', { class: 'picks' });
  for (const [kind, registry] of [
    ['object', store.log?.object_types ?? {}],
    ['event', store.log?.event_types ?? {}],
  ] as const) {
    for (const typeName of Object.keys(registry).sort()) {
      const checked = draft.picks.some((p) => p.kind === kind && p.name === typeName);
      const box = el('input', { type: 'checkbox' });
      box.checked = checked;
      box.addEventListener('change', () => {
        if (box.checked) draft.picks.push({ kind, name: typeName });
        else draft.picks = draft.picks.filter((p) => !(p.kind === kind && p.name === typeName));
      });
      wrap.append(el('label', { class: 'pick' }, box, `${kind}: ${typeName}`));
    }
  }
  return wrap;
}

function renderAdvanced(draft: AdvancedDraft): HTMLElement {
  const wrap = el('div', {});
  const combinator = el('select', {},
    el('option', { value: 'and' }, 'AND'),
    el('option', { value: 'or' }, 'OR'));
  combinator.value = draft.combinator;
  combinator.addEventListener('change', () => {
    draft.combinator = combinator.value as 'and' | 'or';
  });
  wrap.append(el('div', { class: 'row' }, 'combine rules with ', combinator));

  draft.rows.forEach((row, rowIndex) => {
    const rowEl = el('div', { class: 'rule-row' }, el('em', {}, `rule ${rowIndex + 1}`));
    for (const side of ['include', 'exclude'] as const) {
      const list = el('div', { class: 'items' }, el('span', {}, side.toUpperCase()));
      row[side].forEach((entry, itemIndex) => {
        list.append(renderItem(draft, entry, () => {
          row[side].splice(itemIndex, 1);
          render();
        }));
      });
      const add = el('button', {}, `+ ${side} item`);
      add.addEventListener('click', () => {
        row[side].push(emptyItem());
        render();
      });
      list.append(add);
      rowEl.append(list);
    }
    const removeRow = el('button', {}, 'remove rule');
    removeRow.addEventListener('click', () => {
      draft.rows.splice(rowIndex, 1);
      render();
    });
    rowEl.append(removeRow);
    wrap.append(rowEl);
  });
  const addRow = el('button', {}, '+ rule');
  addRow.addEventListener('click', () => {
    draft.rows.push({ include: [emptyItem()], exclude: [] });
    render();
  });
  wrap.append(addRow);
  return wrap;
}

function renderItem(draft: AdvancedDraft, entry: ItemDraft, onRemove: () => void): HTMLElement {
  void draft;
  const entity = entityOptions(entry.entity as { kind: EntityKind; name: string });
  entity.addEventListener('change', () => {
    const [kind, ...rest] = entity.value.split(':');
    entry.entity = { kind: kind as EntityKind, name: rest.join(':') };
    render();
  });

  const schema =
    entry.entity.kind === 'object'
      ? store.log?.object_types[entry.entity.name] ?? {}
      : store.log?.event_types[entry.entity.name] ?? {};

  const attribute = el('select', {}, el('option', { value: '' }, '(no condition)'));
  for (const attr of Object.keys(schema).sort()) {
    const option = el('option', { value: attr }, attr);
    if (entry.condition?.attribute === attr) option.selected = true;
    attribute.append(option);
  }
  const operator = el('select', {});
  for (const op of OPERATORS) {
    const option = el('option', { value: op }, op);
    if (entry.condition?.operator === op) option.selected = true;
    operator.append(option);
  }
  const value = el('input', {
    value: entry.condition ? JSON.stringify(entry.condition.value) : '',
    placeholder: 'value (JSON)',
  });

  const sync = () => {
    if (!attribute.value) {
      entry.condition = null;
      return;
    }
    let parsed: unknown = value.value;
    try {
      parsed = JSON.parse(value.value);
    } catch {
      // keep the raw text as a string literal
    }
    entry.condition = {
      attribute: attribute.value,
      operator: operator.value as Operator,
      value: parsed as never,
    };
  };
  attribute.addEventListener('change', sync);
  operator.addEventListener('change', sync);
  value.addEventListener('change', sync);

  const remove = el('button', {}, 'x');
  remove.addEventListener('click', onRemove);
  return el('div', { class: 'item-row' }, entity, attribute, operator, value, remove);
}

function renderSummaries(): HTMLElement {
  const section = el('section', { class: 'card' }, el('h2', {}, '3. Enrichment result'));
  const table = el('table', {},
    el('tr', {}, el('th', {}, 'scope'), el('th', {}, 'events'), el('th', {}, 'objects')));
  for (const summary of store.summaries ?? []) {
    table.append(el('tr', {},
      el('td', {}, summary.name),
      el('td', {}, String(summary.events)),
      el('td', {}, String(summary.objects))));
  }
  const pocelBtn = el('button', {}, 'Download enriched log');
  pocelBtn.addEventListener('click', () => {
    if (store.log) void store.api.pocel(store.log.log_id).then((b) => download('enriched.jsonocel', b));
  });
  section.append(table, el('div', { class: 'row' }, pocelBtn));
  return section;
}

function renderGraph(): HTMLElement {
  const section = el('section', { class: 'card' }, el('h2', {}, '4. Execution graph'));

  const controls = el('div', { class: 'row' });
  const selects: Array<[keyof GraphViewSettings, string[]]> = [
    ['node_size', ['object_count', 'type_diversity']],
    ['edge_label', ['object_types', 'shared_objects', 'avg_flow_time']],
    ['node_color', ['in', 'out', 'total']],
  ];
  for (const [key, options] of selects) {
    const select = el('select', {});
    for (const option of options) select.append(el('option', { value: option }, `${key}: ${option}`));
    select.value = store.settings[key];
    // restyling is local: no request leaves the page here
    select.addEventListener('change', () => {
      store.settings = { ...store.settings, [key]: select.value as never };
      render();
    });
    controls.append(select);
  }

  const canvas = el('canvas', { width: String(CANVAS_W), height: String(CANVAS_H) });
  const pngBtn = el('button', {}, 'Export PNG');
  pngBtn.addEventListener('click', () => exportPng(canvas));
  const vosBtn = el('button', {}, 'Download VOSviewer JSON');
  vosBtn.addEventListener('click', () => {
    if (store.log) void store.api.graphVos(store.log.log_id).then((b) => download('graph.vos.json', b));
  });

  const legend = el('p', { class: 'hint' },
    store.graph
      ? `${store.graph.nodes.length} processes, ${store.graph.edges.length} handover edges; ` +
        `edge labels show ${store.settings.edge_label.replace('_', ' ')}`
      : '');

  section.append(controls, canvas, legend, el('div', { class: 'row' }, pngBtn, vosBtn));
  queueMicrotask(() => drawGraph(canvas));
  return section;
}

export function edgeLabelsFor(graph: GraphJson, metric: GraphViewSettings['edge_label']): string[] {
  return graph.edges.map((edge) => edgeLabel(edge, metric));
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  render();
}
