/** Pure document-model operations: CPT layout, structural edits, clipboard
 * merging. Everything here manipulates the document; probabilities are only
 * moved around or reset to editable placeholders, never derived. */

import type { NetworkDocument, NodeRecord } from "./types.js";

export const ROW_SUM_TOL = 1e-9;

export function nodeById(doc: NetworkDocument, id: string): NodeRecord {
  const node = doc.nodes.find((n) => n.id === id);
  if (!node) throw new Error(`no node ${id}`);
  return node;
}

export function cardinality(doc: NetworkDocument, id: string): number {
  return nodeById(doc, id).values.length;
}

/** Number of parent configurations = CPT rows. */
export function rowCount(doc: NetworkDocument, node: NodeRecord): number {
  return node.parents.reduce((n, p) => n * cardinality(doc, p), 1);
}

/** CPT layout: parents in declared order (first parent most significant),
 * child index varying fastest within a row. */
export function cptIndex(doc: NetworkDocument, node: NodeRecord, parentValues: number[], childValue: number): number {
  let row = 0;
  node.parents.forEach((p, i) => {
    row = row * cardinality(doc, p) + parentValues[i];
  });
  return row * node.values.length + childValue;
}

/** Parent value labels for each CPT row, in row order. */
export function parentConfigs(doc: NetworkDocument, node: NodeRecord): string[][] {
  const configs: string[][] = [];
  const cards = node.parents.map((p) => cardinality(doc, p));
  const total = cards.reduce((a, b) => a * b, 1);
  for (let row = 0; row < total; row++) {
    const labels: string[] = [];
    let rest = row;
    for (let i = cards.length - 1; i >= 0; i--) {
      const v = rest % cards[i];
      rest = Math.floor(rest / cards[i]);
      labels.unshift(nodeById(doc, node.parents[i]).values[v]);
    }
    configs.push(labels);
  }
  return configs;
}

export function cptRow(node: NodeRecord, row: number): number[] {
  const k = node.values.length;
  return node.cpt.slice(row * k, (row + 1) * k);
}

/** Indices of rows whose entries do not sum to 1 within tolerance. */
export function badRows(doc: NetworkDocument, node: NodeRecord): number[] {
  const bad: number[] = [];
  for (let r = 0; r < rowCount(doc, node); r++) {
    const sum = cptRow(node, r).reduce((a, b) => a + b, 0);
    if (Math.abs(sum - 1) > ROW_SUM_TOL) bad.push(r);
  }
  return bad;
}

export function wouldCreateCycle(doc: NetworkDocument, parent: string, child: string): boolean {
  if (parent === child) return true;
  // a new arc parent->child closes a cycle iff parent is reachable from child
  const childrenOf = new Map<string, string[]>(doc.nodes.map((n) => [n.id, []]));
  for (const n of doc.nodes) for (const p of n.parents) childrenOf.get(p)?.push(n.id);
  const seen = new Set<string>([child]);
  const stack = [child];
  while (stack.length) {
    const cur = stack.pop()!;
    if (cur === parent) return true;
    for (const nxt of childrenOf.get(cur) ?? []) {
      if (!seen.has(nxt)) {
        seen.add(nxt);
        stack.push(nxt);
      }
    }
  }
  return false;
}

export function uniformCpt(doc: NetworkDocument, values: number, parents: string[]): number[] {
  const rows = parents.reduce((n, p) => n * cardinality(doc, p), 1);
  return Array(rows * values).fill(1 / values);
}

// ---------------------------------------------------------------------------
// structural edits
// ---------------------------------------------------------------------------

export interface DeleteResult {
  doc: NetworkDocument;
  /** Children that lost a parent: their tables were reset to uniform
   * placeholders and must be re-entered by the user (never renormalized
   * silently). Deletion is only applied after explicit confirmation. */
  needsReentry: string[];
}

export function deleteNodes(doc: NetworkDocument, ids: string[]): DeleteResult {
  const gone = new Set(ids);
  const needsReentry: string[] = [];
  const nodes: NodeRecord[] = [];
  for (const n of doc.nodes) {
    if (gone.has(n.id)) continue;
    if (n.parents.some((p) => gone.has(p))) {
      const parents = n.parents.filter((p) => !gone.has(p));
      needsReentry.push(n.id);
      nodes.push({ ...n, parents, cpt: [] });
    } else {
      nodes.push(n);
    }
  }
  const out: NetworkDocument = { ...doc, nodes };
  for (const n of out.nodes) {
    if (needsReentry.includes(n.id)) {
      n.cpt = uniformCpt(out, n.values.length, n.parents);
    }
  }
  if (doc.layout) {
    out.layout = Object.fromEntries(Object.entries(doc.layout).filter(([k]) => !gone.has(k)));
  }
  return { doc: out, needsReentry };
}

export interface Clipboard {
  nodes: NodeRecord[];
  /** Copied nodes whose parents fell outside the selection; their tables were
   * reset and need re-entry after pasting. */
  needsReentry: string[];
}

/** Copy a subgraph: arcs internal to the selection are kept; boundary parents
 * are dropped, resetting the affected tables (flagged for re-entry). */
export function copySubgraph(doc: NetworkDocument, ids: string[]): Clipboard {
  const picked = new Set(ids);
  const nodes: NodeRecord[] = [];
  const needsReentry: string[] = [];
  for (const n of doc.nodes) {
    if (!picked.has(n.id)) continue;
    if (n.parents.every((p) => picked.has(p))) {
      nodes.push({ ...n, parents: [...n.parents], values: [...n.values], cpt: [...n.cpt] });
    } else {
      const parents = n.parents.filter((p) => picked.has(p));
      needsReentry.push(n.id);
      nodes.push({ ...n, parents, values: [...n.values], cpt: [] });
    }
  }
  const clip: Clipboard = { nodes, needsReentry };
  const asDoc: NetworkDocument = { name: "clipboard", nodes: clip.nodes };
  for (const n of clip.nodes) {
    if (needsReentry.includes(n.id)) n.cpt = uniformCpt(asDoc, n.values.length, n.parents);
  }
  return clip;
}

export interface PasteResult {
  doc: NetworkDocument;
  renames: Record<string, string>;
  pastedIds: string[];
}

/** Merge the clipboard into the document. Colliding ids get a numeric suffix
 * (_2, _3, ...) and clipboard-internal parent references are rewritten —
 * the same rule the engine's network merge applies. */
export function pasteMerge(doc: NetworkDocument, clip: Clipboard): PasteResult {
  const taken = new Set<string>([...doc.nodes.map((n) => n.id), ...clip.nodes.map((n) => n.id)]);
  const existing = new Set(doc.nodes.map((n) => n.id));
  const renames: Record<string, string> = {};
  for (const n of clip.nodes) {
    if (existing.has(n.id)) {
      let k = 2;
      while (taken.has(`${n.id}_${k}`)) k++;
      renames[n.id] = `${n.id}_${k}`;
      taken.add(`${n.id}_${k}`);
    }
  }
  const pasted = clip.nodes.map((n) => ({
    ...n,
    id: renames[n.id] ?? n.id,
    parents: n.parents.map((p) => renames[p] ?? p),
    values: [...n.values],
    cpt: [...n.cpt],
  }));
  return {
    doc: { ...doc, nodes: [...doc.nodes, ...pasted] },
    renames,
    pastedIds: pasted.map((n) => n.id),
  };
}

export function addNode(doc: NetworkDocument, id: string, values: string[]): NetworkDocument {
  if (doc.nodes.some((n) => n.id === id)) throw new Error(`id ${id} already used`);
  if (values.length < 2) throw new Error("a variable needs at least 2 values");
  const node: NodeRecord = { id, label: id, values, parents: [], cpt: values.map(() => 1 / values.length) };
  return { ...doc, nodes: [...doc.nodes, node] };
}

/** Add an arc; the child's table resets to a uniform placeholder over the new
 * parent set and is flagged for re-entry. Cycles are rejected here before any
 * server call (the server re-validates anyway). */
export function addArc(doc: NetworkDocument, parent: string, child: string): { doc: NetworkDocument; needsReentry: string[] } {
  nodeById(doc, parent);
  const childNode = nodeById(doc, child);
  if (childNode.parents.includes(parent)) return { doc, needsReentry: [] };
  if (wouldCreateCycle(doc, parent, child)) {
    throw new Error(`arc ${parent} -> ${child} would create a cycle`);
  }
  const parents = [...childNode.parents, parent];
  const nodes = doc.nodes.map((n) =>
    n.id === child ? { ...n, parents, cpt: [] } : n,
  );
  const out: NetworkDocument = { ...doc, nodes };
  const updated = nodeById(out, child);
  updated.cpt = uniformCpt(out, updated.values.length, updated.parents);
  return { doc: out, needsReentry: [child] };
}
