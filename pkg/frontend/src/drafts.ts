/**
 * Edit drafts: what the annotator is composing before submission.
 *
 * Each layer tab owns its draft kinds, so an op submitted from a tab can
 * only be one that edits that layer (grouping additionally hosts element
 * splits, which originate from the segmentation overlay). Identifier
 * proposals follow the server's convention: next free number under the
 * conventional prefix.
 */

import type { LayerTab } from './state.js';
import type { DocumentObj, EditOpObj } from './types.js';

export type Draft =
  | { kind: 'group'; members: string[]; tag?: string }
  | { kind: 'tag'; node: string; tag: string | null }
  | { kind: 'move'; node: string; parent: string | null }
  | {
      kind: 'split';
      element: string;
      parts: { shape: { polygon: number[][] }; text?: string }[];
    }
  | {
      kind: 'connect';
      source: string;
      target: string | null;
      connector: string;
      directed: boolean;
      openEnded: boolean;
    }
  | { kind: 'relation'; type: string; children: { ref: string; role: 'n' | 's' }[] }
  | { kind: 'attach'; relation: string; ref: string; role: 'n' | 's' };

export const TAB_DRAFT_KINDS: Record<LayerTab, Draft['kind'][]> = {
  grouping: ['group', 'tag', 'move', 'split'],
  connectivity: ['connect'],
  discourse: ['relation', 'attach'],
};

export function draftLegalForTab(draft: Draft, tab: LayerTab): boolean {
  return TAB_DRAFT_KINDS[tab].includes(draft.kind);
}

/** Ids already taken anywhere in the document. */
export function usedIds(doc: DocumentObj): Set<string> {
  const used = new Set<string>();
  for (const e of doc.inventory.elements) used.add(e.id);
  for (const e of doc.inventory.retired) used.add(e.id);
  for (const n of doc.grouping.nodes) used.add(n.id);
  for (const e of doc.connectivity.edges) used.add(e.id);
  for (const r of doc.discourse.relations) used.add(r.id);
  for (const o of doc.discourse.occurrences) used.add(o.id);
  for (const op of doc.editLog) used.add(op.opId);
  return used;
}

export function nextId(prefix: string, used: Set<string>): string {
  let top = 0;
  const pattern = new RegExp(`^${prefix}(\\d+)$`);
  for (const id of used) {
    const match = pattern.exec(id);
    if (match) top = Math.max(top, Number(match[1]));
  }
  const fresh = `${prefix}${top + 1}`;
  used.add(fresh);
  return fresh;
}

/** Snap freehand polygon vertices to integer pixels. */
export function snapPolygon(vertices: number[][]): number[][] {
  return vertices.map(([x, y]) => [Math.round(x ?? 0), Math.round(y ?? 0)]);
}

export interface DraftProblem {
  message: string;
}

export function checkDraft(draft: Draft): DraftProblem | null {
  switch (draft.kind) {
    case 'group':
      return draft.members.length >= 2
        ? null
        : { message: 'a group needs at least two members' };
    case 'split':
      return draft.parts.length >= 2
        ? null
        : { message: 'a split needs at least two parts' };
    case 'connect':
      if (!draft.connector) return { message: 'pick the connector arrow' };
      if (draft.target === null && !draft.openEnded)
        return { message: 'either pick a target or flag the edge open-ended' };
      return null;
    case 'relation':
      return draft.children.length > 0
        ? null
        : { message: 'pick at least one child and its role' };
    case 'tag':
    case 'move':
    case 'attach':
      return null;
  }
}

/** Compile a draft into the edit op the service accepts. */
export function draftToOp(draft: Draft, doc: DocumentObj): EditOpObj {
  const used = usedIds(doc);
  const opId = nextId('ui', used);
  switch (draft.kind) {
    case 'group': {
      const parent = commonParent(draft.members, doc);
      const op: EditOpObj = {
        opId,
        kind: 'addGroup',
        timestamp: '',
        params: {
          parent,
          members: draft.members,
          group: nextId('G', used),
        },
      };
      return op;
    }
    case 'tag':
      return {
        opId,
        kind: 'tagMacroGroup',
        timestamp: '',
        params: { node: draft.node, tag: draft.tag },
      };
    case 'move':
      return {
        opId,
        kind: 'moveNode',
        timestamp: '',
        params: { node: draft.node, parent: draft.parent },
      };
    case 'split': {
      const element = doc.inventory.elements.find((e) => e.id === draft.element);
      const prefix = element?.kind === 'text' ? 'T' : 'B';
      return {
        opId,
        kind: 'splitElement',
        timestamp: '',
        params: {
          element: draft.element,
          parts: draft.parts.map((part) => ({
            shape: { polygon: snapPolygon(part.shape.polygon) },
            ...(element?.kind === 'text' ? { text: part.text ?? '' } : {}),
          })),
          children: draft.parts.map(() => nextId(prefix, used)),
          group: nextId('G', used),
        },
      };
    }
    case 'connect':
      return {
        opId,
        kind: 'addConnectivityEdge',
        timestamp: '',
        params: {
          edge: nextId('C', used),
          source: draft.source,
          target: draft.target,
          connector: draft.connector,
          directed: draft.directed,
          openEnded: draft.openEnded,
        },
      };
    case 'relation': {
      const relationIds = new Set(doc.discourse.relations.map((r) => r.id));
      return {
        opId,
        kind: 'addRelation',
        timestamp: '',
        params: {
          relation: nextId('R', used),
          type: draft.type,
          children: draft.children.map((child) => ({
            ref: child.ref,
            role: child.role,
            occurrence: relationIds.has(child.ref) ? null : nextId('O', used),
          })),
        },
      };
    }
    case 'attach': {
      const relationIds = new Set(doc.discourse.relations.map((r) => r.id));
      return {
        opId,
        kind: 'attachChild',
        timestamp: '',
        params: {
          relation: draft.relation,
          child: {
            ref: draft.ref,
            role: draft.role,
            occurrence: relationIds.has(draft.ref) ? null : nextId('O', used),
          },
        },
      };
    }
  }
}

/** Parent under which a new group is created: the members' shared parent. */
function commonParent(members: string[], doc: DocumentObj): string | null {
  const parents = new Set<string | null>();
  for (const member of members) {
    const edge = doc.grouping.edges.find(([, child]) => child === member);
    parents.add(edge ? edge[0] : null);
  }
  if (parents.size === 1) {
    return parents.values().next().value ?? null;
  }
  return null;
}
