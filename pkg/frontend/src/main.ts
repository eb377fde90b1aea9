/** Workbench entry point: DOM wiring over the tested core modules. */

import { ApiClient } from './api.js';
import { KIND_COLORS } from './colors.js';
import {
  checkDraft,
  draftLegalForTab,
  draftToOp,
  snapPolygon,
  type Draft,
} from './drafts.js';
import { renderConnectivity, renderDiscourse, renderGrouping } from './graphview.js';
import { buildScene, hitTest, renderScene } from './overlay.js';
import { Store, type LayerTab } from './state.js';
import type { RegistryObj } from './types.js';

const api = new ApiClient('');
const store = new Store();

let image: HTMLImageElement | null = null;
let registry: RegistryObj | null = null;
let pendingVertices: number[][] = [];

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

async function loadDiagram(id: string): Promise<void> {
  try {
    const payload = await api.getDiagram(id);
    const validation = await api.getValidation(id);
    image = null;
    const img = new Image();
    img.onload = () => {
      image = img;
      render();
    };
    img.onerror = () => {
      image = null;
      render();
    };
    img.src = api.imageUrl(id);
    store.acceptServer(payload, validation.report);
  } catch (err) {
    store.setBanner(`cannot load ${id}: ${String(err)}`);
  }
}

async function submitDraft(): Promise<void> {
  const state = store.get();
  if (!state.draft || !state.document || state.version === null || !state.diagramId) {
    return;
  }
  if (!draftLegalForTab(state.draft, state.activeTab)) {
    store.setBanner('draft does not belong to the active layer tab');
    return;
  }
  const problem = checkDraft(state.draft);
  if (problem) {
    store.applyEditResult({ status: 'invalid', error: 'IncompleteDraft', message: problem.message });
    return;
  }
  const op = draftToOp(state.draft, state.document);
  const result = await api.postEdit(state.diagramId, state.version, op);
  store.applyEditResult(result);
  if (result.status === 'conflict') {
    await loadDiagram(state.diagramId); // draft already preserved by the store
  }
}

function draftForm(tab: LayerTab): HTMLElement {
  const state = store.get();
  const form = document.createElement('div');
  form.className = 'draft-form';

  const selection = state.selection;
  const mk = (label: string, draft: Draft) => {
    const button = document.createElement('button');
    button.textContent = label;
    button.addEventListener('click', () => {
      store.setDraft(draft);
      void submitDraft();
    });
    form.appendChild(button);
  };

  if (tab === 'grouping') {
    if (selection.length >= 2) {
      mk(`group ${selection.length} selected`, { kind: 'group', members: [...selection] });
    }
    if (selection.length === 1) {
      const tag = el<HTMLInputElement>('tag-input').value || null;
      mk(`tag ${selection[0]}`, { kind: 'tag', node: selection[0]!, tag });
      if (pendingVertices.length >= 3) {
        mk(`split ${selection[0]} (2 parts from sketch)`, {
          kind: 'split',
          element: selection[0]!,
          parts: splitSketch(pendingVertices),
        });
      }
    }
    const tagInput = document.createElement('input');
    tagInput.id = 'tag-input';
    tagInput.placeholder = 'macro-group tag';
    form.appendChild(tagInput);
  }

  if (tab === 'connectivity' && selection.length >= 1) {
    const arrows = (state.document?.inventory.elements ?? []).filter(
      (e) => e.kind === 'arrow',
    );
    if (arrows.length > 0) {
      const connector = arrows[0]!.id;
      if (selection.length >= 2) {
        mk(`connect ${selection[0]} -> ${selection[1]} via ${connector}`, {
          kind: 'connect',
          source: selection[0]!,
          target: selection[1]!,
          connector,
          directed: true,
          openEnded: false,
        });
      } else {
        mk(`open edge from ${selection[0]} via ${connector}`, {
          kind: 'connect',
          source: selection[0]!,
          target: null,
          connector,
          directed: true,
          openEnded: true,
        });
      }
    }
  }

  if (tab === 'discourse' && registry && selection.length >= 1) {
    for (const relation of registry.rst) {
      const roles: ('n' | 's')[] =
        relation.nuclearity === 'mononuclear'
          ? selection.map((_, i) => (i === 0 ? 'n' : 's'))
          : selection.map(() => 'n');
      mk(`${relation.name} over ${selection.length} selected`, {
        kind: 'relation',
        type: relation.name,
        children: selection.map((ref, i) => ({ ref, role: roles[i]! })),
      });
    }
  }

  return form;
}

/** Two crude parts from one sketched polygon: left/right halves. */
function splitSketch(vertices: number[][]): { shape: { polygon: number[][] } }[] {
  const snapped = snapPolygon(vertices);
  const xs = snapped.map(([x]) => x!);
  const ys = snapped.map(([, y]) => y!);
  const [minX, maxX] = [Math.min(...xs), Math.max(...xs)];
  const [minY, maxY] = [Math.min(...ys), Math.max(...ys)];
  const midX = Math.round((minX + maxX) / 2);
  return [
    { shape: { polygon: [[minX, minY], [midX, minY], [midX, maxY], [minX, maxY]] } },
    { shape: { polygon: [[midX, minY], [maxX, minY], [maxX, maxY], [midX, maxY]] } },
  ];
}

function render(): void {
  const state = store.get();

  el('banner').textContent = state.banner ?? '';
  el('banner').className = state.banner ? 'banner visible' : 'banner';

  const canvas = el<HTMLCanvasElement>('overlay');
  const ctx = canvas.getContext('2d');
  if (ctx && state.document) {
    const scene = buildScene(
      state.document.inventory.elements,
      state.selection,
      image !== null,
    );
    renderScene(ctx, scene, image, canvas.width, canvas.height);
  }

  el('version').textContent =
    state.version === null ? '' : `${state.diagramId} @ v${state.version}`;

  for (const tab of ['grouping', 'connectivity', 'discourse'] as LayerTab[]) {
    el(`tab-${tab}`).className = state.activeTab === tab ? 'tab active' : 'tab';
  }

  const panel = el('layer-panel');
  panel.replaceChildren();
  if (state.document) {
    const onClick = (ref: string) => {
      store.toggleSelect(ref);
      render();
    };
    const view =
      state.activeTab === 'grouping'
        ? renderGrouping(state.document, state.selection, onClick)
        : state.activeTab === 'connectivity'
          ? renderConnectivity(state.document, state.selection, onClick)
          : renderDiscourse(state.document, state.selection, onClick);
    panel.appendChild(view);
    panel.appendChild(draftForm(state.activeTab));
  }

  const inline = el('inline-error');
  inline.textContent = state.inlineError ?? '';
  inline.className = state.inlineError ? 'inline-error visible' : 'inline-error';

  const findings = el('findings');
  findings.replaceChildren();
  for (const finding of state.report?.findings ?? []) {
    const row = document.createElement('li');
    row.className = finding.severity;
    row.textContent = `${finding.code} [${finding.refs.join(', ')}] ${finding.message}`;
    findings.appendChild(row);
  }
  el('findings-status').textContent = state.report
    ? state.report.passed
      ? 'all checks pass'
      : 'schema errors present'
    : '';
}

async function boot(): Promise<void> {
  const legend = el('legend');
  for (const [kind, color] of Object.entries(KIND_COLORS)) {
    const chip = document.createElement('span');
    chip.className = 'chip';
    chip.style.borderColor = color;
    chip.textContent = kind;
    legend.appendChild(chip);
  }

  registry = await api.getRegistry().catch(() => null);

  const select = el<HTMLSelectElement>('diagram-select');
  const diagrams = await api.listDiagrams().catch(() => []);
  for (const entry of diagrams) {
    const option = document.createElement('option');
    option.value = entry.id;
    option.textContent = `${entry.id} (v${entry.version})`;
    select.appendChild(option);
  }
  select.addEventListener('change', () => void loadDiagram(select.value));

  for (const tab of ['grouping', 'connectivity', 'discourse'] as LayerTab[]) {
    el(`tab-${tab}`).addEventListener('click', () => {
      store.setTab(tab);
      render();
    });
  }

  el('clear-selection').addEventListener('click', () => {
    store.clearSelection();
    pendingVertices = [];
    render();
  });

  el('save').addEventListener('click', () => {
    const id = store.get().diagramId;
    if (id) {
      void api
        .postSave(id)
        .then((r) => store.setBanner(`saved to ${r.path}`))
        .catch((err) => store.setBanner(`save failed: ${String(err)}`));
    }
  });

  const canvas = el<HTMLCanvasElement>('overlay');
  canvas.addEventListener('click', (event) => {
    const rect = canvas.getBoundingClientRect();
    const x = event.offsetX * (canvas.width / rect.width);
    const y = event.offsetY * (canvas.height / rect.height);
    const state = store.get();
    if (event.shiftKey) {
      // freehand vertex placement for split sketches, snapped to pixels
      pendingVertices.push([Math.round(x), Math.round(y)]);
    } else if (state.document) {
      const hit = hitTest(state.document.inventory.elements, x, y);
      if (hit) store.toggleSelect(hit);
    }
    render();
  });

  store.subscribe(() => render());
  if (diagrams.length > 0) {
    await loadDiagram(diagrams[0]!.id);
  }
  render();
}

void boot();
