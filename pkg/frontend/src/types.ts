/** Wire types mirroring the service's JSON formats. */

export interface NodeRecord {
  id: string;
  label: string;
  values: string[];
  parents: string[];
  cpt: number[];
}

export interface LayoutPoint {
  x: number;
  y: number;
}

export interface NetworkDocument {
  name: string;
  nodes: NodeRecord[];
  /** Presentation sidecar: stored by the server, never read for inference. */
  layout?: Record<string, LayoutPoint>;
}

export interface ForestStats {
  cliques: number;
  trees: number;
  max_clique_vars: number;
  clique_cells: number;
  separator_cells: number;
}

export interface PosteriorReport {
  evidence: Record<string, string>;
  p_evidence: number;
  posteriors: Record<string, number[]>;
  counters: { checks: number; cells_sent: number };
  elapsed_us: number;
}

export interface ServiceErrorBody {
  error: string;
  detail?: string;
  violations?: string[];
}

export type PropagationMode = "automatic" | "on-request";
