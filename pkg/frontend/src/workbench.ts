/** Session orchestration: instantiate values from node menus, propagate
 * automatically or on request, surface impossible/contradictory evidence,
 * retract. Holds the latest report; rendering reads it verbatim. */

import { ApiClient, ApiError } from "./api.js";
import type { NetworkDocument, PosteriorReport, PropagationMode } from "./types.js";

export type ModalState =
  | { kind: "none" }
  | { kind: "impossible-evidence" }
  | { kind: "contradiction"; detail: string }
  | { kind: "network-changed" };

export class Workbench {
  networkId: string | null = null;
  sessionId: string | null = null;
  doc: NetworkDocument | null = null;
  mode: PropagationMode = "automatic";
  /** selections made but not yet propagated (on-request mode) */
  pending: Record<string, string> = {};
  lastReport: PosteriorReport | null = null;
  modal: ModalState = { kind: "none" };

  constructor(private readonly api: ApiClient) {}

  async loadDocument(doc: NetworkDocument): Promise<void> {
    const { id } = await this.api.createNetwork(doc);
    this.networkId = id;
    this.doc = await this.api.getNetwork(id);
    await this.openSession();
  }

  async openSession(): Promise<void> {
    if (!this.networkId) throw new Error("no network loaded");
    const { session_id } = await this.api.openSession(this.networkId);
    this.sessionId = session_id;
    this.pending = {};
    this.lastReport = await this.api.propagate(session_id); // prior marginals
  }

  /** Push the edited document to the server; sessions become stale, so reopen. */
  async saveDocument(doc: NetworkDocument): Promise<void> {
    if (!this.networkId) throw new Error("no network loaded");
    await this.api.replaceNetwork(this.networkId, doc);
    this.doc = await this.api.getNetwork(this.networkId);
    await this.openSession();
  }

  get evidence(): Record<string, string> {
    return { ...(this.lastReport?.evidence ?? {}), ...this.pending };
  }

  /** Instantiate a node to one of its values (from its pop-up menu). */
  async instantiate(nodeId: string, valueLabel: string): Promise<void> {
    if (!this.sessionId) throw new Error("no open session");
    try {
      if (this.mode === "automatic") {
        const report = await this.api.postEvidence(this.sessionId, { [nodeId]: valueLabel }, true);
        this.lastReport = report as PosteriorReport;
      } else {
        await this.api.postEvidence(this.sessionId, { [nodeId]: valueLabel }, false);
        this.pending[nodeId] = valueLabel;
      }
    } catch (e) {
      this.handleServiceError(e);
    }
  }

  /** On-request mode: propagate everything batched so far. */
  async propagateNow(): Promise<void> {
    if (!this.sessionId) throw new Error("no open session");
    try {
      this.lastReport = await this.api.propagate(this.sessionId);
      this.pending = {};
    } catch (e) {
      this.handleServiceError(e);
    }
  }

  /** Clear all evidence; the report returns to prior marginals. */
  async clearEvidence(): Promise<void> {
    if (!this.sessionId) throw new Error("no open session");
    this.lastReport = await this.api.retractAll(this.sessionId);
    this.pending = {};
    this.modal = { kind: "none" };
  }

  setMode(mode: PropagationMode): void {
    this.mode = mode;
  }

  dismissModal(): void {
    this.modal = { kind: "none" };
  }

  private handleServiceError(e: unknown): void {
    if (e instanceof ApiError) {
      if (e.body.error === "impossible_evidence") {
        this.modal = { kind: "impossible-evidence" };
        return;
      }
      if (e.body.error === "contradictory_evidence") {
        this.modal = { kind: "contradiction", detail: e.body.detail ?? "" };
        return;
      }
      if (e.body.error === "network_changed") {
        this.modal = { kind: "network-changed" };
        return;
      }
    }
    throw e;
  }
}
