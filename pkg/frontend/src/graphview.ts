/** DOM renderers for the three layer graphs (lists and nested trees). */

import type { DocumentObj } from './types.js';

export type RefClickHandler = (ref: string) => void;

function refButton(ref: string, label: string, selected: boolean, onClick: RefClickHandler) {
  const button = document.createElement('button');
  button.className = selected ? 'ref selected' : 'ref';
  button.textContent = label;
  button.addEventListener('click', () => onClick(ref));
  return button;
}

export function renderGrouping(
  doc: DocumentObj,
  selection: string[],
  onClick: RefClickHandler,
): HTMLElement {
  const container = document.createElement('div');
  const childrenOf = new Map<string, string[]>();
  const hasParent = new Set<string>();
  for (const [parent, child] of doc.grouping.edges) {
    childrenOf.set(parent, [...(childrenOf.get(parent) ?? []), child]);
    hasParent.add(child);
  }
  const nodeById = new Map(doc.grouping.nodes.map((n) => [n.id, n]));

  const renderNode = (id: string): HTMLElement => {
    const node = nodeById.get(id);
    const item = document.createElement('li');
    if (!node) {
      item.textContent = `${id} (missing)`;
      return item;
    }
    const label =
      node.kind === 'leaf'
        ? node.element ?? id
        : node.macroGroup
          ? `${id} [${node.macroGroup}]`
          : id;
    item.appendChild(refButton(id, label, selection.includes(id), onClick));
    const kids = childrenOf.get(id) ?? [];
    if (kids.length > 0) {
      const list = document.createElement('ul');
      for (const kid of kids) list.appendChild(renderNode(kid));
      item.appendChild(list);
    }
    return item;
  };

  const roots = doc.grouping.nodes.filter((n) => !hasParent.has(n.id));
  const list = document.createElement('ul');
  list.className = 'tree';
  for (const root of roots) list.appendChild(renderNode(root.id));
  container.appendChild(list);
  return container;
}

export function renderConnectivity(
  doc: DocumentObj,
  selection: string[],
  onClick: RefClickHandler,
): HTMLElement {
  const container = document.createElement('div');
  const list = document.createElement('ul');
  list.className = 'edges';
  for (const edge of doc.connectivity.edges) {
    const item = document.createElement('li');
    item.appendChild(refButton(edge.source, edge.source, selection.includes(edge.source), onClick));
    const arrow = document.createElement('span');
    arrow.textContent = edge.target === null
      ? ` —${edge.connector}→ (open)`
      : edge.directed
        ? ` —${edge.connector}→ `
        : ` —${edge.connector}— `;
    item.appendChild(arrow);
    if (edge.target !== null) {
      item.appendChild(refButton(edge.target, edge.target, selection.includes(edge.target), onClick));
    }
    list.appendChild(item);
  }
  if (doc.connectivity.edges.length === 0) {
    const empty = document.createElement('p');
    empty.textContent = 'no explicit connections annotated';
    container.appendChild(empty);
  }
  container.appendChild(list);
  return container;
}

export function renderDiscourse(
  doc: DocumentObj,
  selection: string[],
  onClick: RefClickHandler,
): HTMLElement {
  const container = document.createElement('div');
  const childrenOf = new Map<string, { child: string; role: string }[]>();
  const hasParent = new Set<string>();
  for (const edge of doc.discourse.edges) {
    childrenOf.set(edge.parent, [
      ...(childrenOf.get(edge.parent) ?? []),
      { child: edge.child, role: edge.role },
    ]);
    hasParent.add(edge.child);
  }
  const relations = new Map(doc.discourse.relations.map((r) => [r.id, r]));
  const occurrences = new Map(doc.discourse.occurrences.map((o) => [o.id, o]));

  const renderNode = (id: string, role: string | null): HTMLElement => {
    const item = document.createElement('li');
    if (role !== null) {
      const roleTag = document.createElement('span');
      roleTag.className = `role role-${role}`;
      roleTag.textContent = role;
      item.appendChild(roleTag);
    }
    const relation = relations.get(id);
    if (relation) {
      item.appendChild(
        refButton(id, `${id} ${relation.type}`, selection.includes(id), onClick),
      );
      const kids = childrenOf.get(id) ?? [];
      if (kids.length > 0) {
        const list = document.createElement('ul');
        for (const kid of kids) list.appendChild(renderNode(kid.child, kid.role));
        item.appendChild(list);
      }
    } else {
      const occ = occurrences.get(id);
      const target = occ?.target ?? id;
      item.appendChild(refButton(target, target, selection.includes(target), onClick));
    }
    return item;
  };

  const list = document.createElement('ul');
  list.className = 'tree';
  for (const id of [...relations.keys(), ...occurrences.keys()]) {
    if (!hasParent.has(id)) list.appendChild(renderNode(id, null));
  }
  container.appendChild(list);
  return container;
}
