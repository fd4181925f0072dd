/** Canvas state for the graph editor: node positions (presentation only —
 * stored in the document's layout sidecar, never used for inference),
 * selection, clipboard, and the dirty flag. All transitions are pure. */

import {
  Clipboard,
  DeleteResult,
  addArc,
  addNode,
  copySubgraph,
  deleteNodes,
  pasteMerge,
} from "./model.js";
import type { LayoutPoint, NetworkDocument, PropagationMode } from "./types.js";

export interface CanvasState {
  doc: NetworkDocument;
  positions: Record<string, LayoutPoint>;
  selection: string[];
  clipboard: Clipboard | null;
  dirty: boolean;
  mode: PropagationMode;
}

export function initialCanvas(doc: NetworkDocument): CanvasState {
  const positions: Record<string, LayoutPoint> = { ...(doc.layout ?? {}) };
  // anything without a stored position gets a deterministic grid slot
  doc.nodes.forEach((n, i) => {
    if (!positions[n.id]) {
      positions[n.id] = { x: 80 + (i % 5) * 150, y: 60 + Math.floor(i / 5) * 110 };
    }
  });
  return { doc, positions, selection: [], clipboard: null, dirty: false, mode: "automatic" };
}

/** Document to persist: the inference content plus the layout sidecar. */
export function documentWithLayout(state: CanvasState): NetworkDocument {
  return { ...state.doc, layout: { ...state.positions } };
}

export function createNode(state: CanvasState, id: string, values: string[], at: LayoutPoint): CanvasState {
  const doc = addNode(state.doc, id, values);
  return {
    ...state,
    doc,
    positions: { ...state.positions, [id]: at },
    selection: [id],
    dirty: true,
  };
}

/** Client-side cycle rejection happens inside addArc (no server call). */
export function createArc(state: CanvasState, parent: string, child: string): { state: CanvasState; needsReentry: string[] } {
  const { doc, needsReentry } = addArc(state.doc, parent, child);
  return { state: { ...state, doc, dirty: true }, needsReentry };
}

export function moveNode(state: CanvasState, id: string, to: LayoutPoint): CanvasState {
  return { ...state, positions: { ...state.positions, [id]: to }, dirty: true };
}

export function select(state: CanvasState, ids: string[]): CanvasState {
  return { ...state, selection: ids };
}

export function copySelection(state: CanvasState): CanvasState {
  if (!state.selection.length) return state;
  return { ...state, clipboard: copySubgraph(state.doc, state.selection) };
}

export interface PasteOutcome {
  state: CanvasState;
  renames: Record<string, string>;
  needsReentry: string[];
}

export function paste(state: CanvasState, offset: LayoutPoint = { x: 40, y: 40 }): PasteOutcome {
  if (!state.clipboard) return { state, renames: {}, needsReentry: [] };
  const result = pasteMerge(state.doc, state.clipboard);
  const positions = { ...state.positions };
  state.clipboard.nodes.forEach((n, i) => {
    const newId = result.renames[n.id] ?? n.id;
    const base = state.positions[n.id] ?? { x: 80 + i * 30, y: 80 + i * 30 };
    positions[newId] = { x: base.x + offset.x, y: base.y + offset.y };
  });
  const needsReentry = state.clipboard.needsReentry.map((id) => result.renames[id] ?? id);
  return {
    state: { ...state, doc: result.doc, positions, selection: result.pastedIds, dirty: true },
    renames: result.renames,
    needsReentry,
  };
}

/** Deleting is destructive for children's tables, so the caller must get
 * explicit confirmation first when this returns re-entry work. */
export function previewDelete(state: CanvasState): DeleteResult {
  return deleteNodes(state.doc, state.selection);
}

export function applyDelete(state: CanvasState, result: DeleteResult): CanvasState {
  const gone = new Set(state.selection);
  const positions = Object.fromEntries(
    Object.entries(state.positions).filter(([id]) => !gone.has(id)),
  );
  return { ...state, doc: result.doc, positions, selection: [], dirty: true };
}

export function setPropagationMode(state: CanvasState, mode: PropagationMode): CanvasState {
  return { ...state, mode };
}
