/** Tabular CPT editor model: one row per parent configuration, columns are
 * the child's values. Supports pasting tab-separated blocks (spreadsheet
 * style); rows that do not sum to 1 are highlighted and block saving. */

import { badRows, cptRow, nodeById, parentConfigs, rowCount } from "./model.js";
import type { NetworkDocument } from "./types.js";

export interface CptGrid {
  nodeId: string;
  parentIds: string[];
  /** parent value labels per row, row-major in CPT order */
  configs: string[][];
  columns: string[];
  cells: number[][];
}

export function buildGrid(doc: NetworkDocument, nodeId: string): CptGrid {
  const node = nodeById(doc, nodeId);
  const rows = rowCount(doc, node);
  const cells: number[][] = [];
  for (let r = 0; r < rows; r++) cells.push(cptRow(node, r));
  return {
    nodeId,
    parentIds: [...node.parents],
    configs: parentConfigs(doc, node),
    columns: [...node.values],
    cells,
  };
}

export class TsvError extends Error {}

/** Parse a pasted tab-separated numeric block. */
export function parseTsv(text: string): number[][] {
  const rows = text
    .replace(/\r\n?/g, "\n")
    .split("\n")
    .filter((line) => line.trim() !== "");
  if (!rows.length) throw new TsvError("nothing to paste");
  return rows.map((line, i) =>
    line.split("\t").map((cellText) => {
      const v = Number(cellText.trim());
      if (cellText.trim() === "" || Number.isNaN(v)) {
        throw new TsvError(`row ${i + 1}: ${JSON.stringify(cellText)} is not a number`);
      }
      return v;
    }),
  );
}

/** Paste a block with its top-left corner at (row, col); out-of-range cells
 * are ignored, matching spreadsheet behavior. Returns a new grid. */
export function applyPaste(grid: CptGrid, text: string, row = 0, col = 0): CptGrid {
  const block = parseTsv(text);
  const cells = grid.cells.map((r) => [...r]);
  block.forEach((blockRow, dr) => {
    blockRow.forEach((value, dc) => {
      const r = row + dr;
      const c = col + dc;
      if (r < cells.length && c < grid.columns.length) cells[r][c] = value;
    });
  });
  return { ...grid, cells };
}

export function setCell(grid: CptGrid, row: number, col: number, value: number): CptGrid {
  const cells = grid.cells.map((r) => [...r]);
  cells[row][col] = value;
  return { ...grid, cells };
}

/** Row indices failing the sum-to-1 check (these block saving). */
export function invalidRows(grid: CptGrid): number[] {
  const bad: number[] = [];
  grid.cells.forEach((rowCells, r) => {
    const sum = rowCells.reduce((a, b) => a + b, 0);
    if (Math.abs(sum - 1) > 1e-9 || rowCells.some((x) => x < 0 || x > 1)) bad.push(r);
  });
  return bad;
}

export function canSave(grid: CptGrid): boolean {
  return invalidRows(grid).length === 0;
}

/** Write the grid back into a new document (only when every row is valid). */
export function saveGrid(doc: NetworkDocument, grid: CptGrid): NetworkDocument {
  if (!canSave(grid)) {
    throw new Error(`rows ${invalidRows(grid).join(", ")} do not sum to 1`);
  }
  const nodes = doc.nodes.map((n) => (n.id === grid.nodeId ? { ...n, cpt: grid.cells.flat() } : n));
  const out = { ...doc, nodes };
  const violations = badRows(out, nodeById(out, grid.nodeId));
  if (violations.length) throw new Error(`rows ${violations.join(", ")} do not sum to 1`);
  return out;
}
