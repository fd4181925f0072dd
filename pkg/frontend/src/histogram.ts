/** Posterior histograms. Pure rendering: every displayed number is a report
 * value passed through display formatting, nothing is recomputed. */

import type { NetworkDocument, PosteriorReport } from "./types.js";

export const DISPLAY_DIGITS = 4;

export function formatProb(p: number, digits = DISPLAY_DIGITS): string {
  return p.toFixed(digits);
}

export interface HistogramBar {
  valueLabel: string;
  /** raw report value (used for hover/click numeric display) */
  value: number;
  /** formatted to display precision */
  display: string;
  /** bar length in percent of the widest possible bar */
  widthPct: number;
  observed: boolean;
}

export interface NodeHistogram {
  nodeId: string;
  label: string;
  observed: string | null;
  bars: HistogramBar[];
}

export function histogramFor(
  doc: NetworkDocument,
  report: PosteriorReport,
  nodeId: string,
): NodeHistogram {
  const node = doc.nodes.find((n) => n.id === nodeId);
  if (!node) throw new Error(`no node ${nodeId}`);
  const dist = report.posteriors[nodeId];
  if (!dist) throw new Error(`report has no posterior for ${nodeId}`);
  const observed = report.evidence[nodeId] ?? null;
  return {
    nodeId,
    label: node.label,
    observed,
    bars: node.values.map((valueLabel, i) => ({
      valueLabel,
      value: dist[i],
      display: formatProb(dist[i]),
      widthPct: Math.round(dist[i] * 100),
      observed: observed === valueLabel,
    })),
  };
}

export function allHistograms(doc: NetworkDocument, report: PosteriorReport): NodeHistogram[] {
  return doc.nodes.map((n) => histogramFor(doc, report, n.id));
}

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

/** HTML for one node's histogram; bar heights/widths and the numeric text are
 * a direct rendering of report values. */
export function renderHistogramHtml(h: NodeHistogram): string {
  const rows = h.bars
    .map(
      (b) => `
    <div class="hist-row${b.observed ? " observed" : ""}" data-node="${escapeHtml(h.nodeId)}" data-value="${escapeHtml(b.valueLabel)}">
      <span class="hist-label">${escapeHtml(b.valueLabel)}</span>
      <span class="hist-bar"><span class="hist-fill" style="width:${b.widthPct}%"></span></span>
      <span class="hist-num" title="${b.value}">${b.display}</span>
    </div>`,
    )
    .join("");
  const badge = h.observed ? `<span class="evidence-badge">= ${escapeHtml(h.observed)}</span>` : "";
  return `<div class="histogram" data-node="${escapeHtml(h.nodeId)}">
  <div class="hist-title">${escapeHtml(h.label)}${badge}</div>${rows}
</div>`;
}
