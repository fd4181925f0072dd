/** Typed client for the inference service. All numbers displayed anywhere in
 * the workbench come from these responses; the UI never computes its own. */

import type { ForestStats, NetworkDocument, PosteriorReport, ServiceErrorBody } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ServiceErrorBody,
  ) {
    super(`${body.error ?? "error"} (HTTP ${status})`);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      let parsed: ServiceErrorBody;
      try {
        parsed = (await resp.json()) as ServiceErrorBody;
      } catch {
        parsed = { error: `http_${resp.status}` };
      }
      throw new ApiError(resp.status, parsed);
    }
    return (await resp.json()) as T;
  }

  createNetwork(doc: NetworkDocument, compile = false): Promise<{ id: string; stats?: ForestStats }> {
    return this.request("POST", `/networks${compile ? "?compile=true" : ""}`, doc);
  }

  getNetwork(id: string): Promise<NetworkDocument> {
    return this.request("GET", `/networks/${id}`);
  }

  replaceNetwork(id: string, doc: NetworkDocument): Promise<{ id: string }> {
    return this.request("PUT", `/networks/${id}`, doc);
  }

  compile(id: string): Promise<ForestStats> {
    return this.request("POST", `/networks/${id}/compile`);
  }

  openSession(networkId: string): Promise<{ session_id: string }> {
    return this.request("POST", `/networks/${networkId}/sessions`);
  }

  /** propagate=true returns the full report; false batches and returns an ack. */
  postEvidence(
    sessionId: string,
    set: Record<string, string>,
    propagate: boolean,
  ): Promise<PosteriorReport | { status: string }> {
    return this.request("POST", `/sessions/${sessionId}/evidence`, { set, propagate });
  }

  propagate(sessionId: string): Promise<PosteriorReport> {
    return this.request("POST", `/sessions/${sessionId}/propagate`);
  }

  retractAll(sessionId: string): Promise<PosteriorReport> {
    return this.request("DELETE", `/sessions/${sessionId}/evidence`);
  }

  async getDot(id: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.base}/networks/${id}/dot`, { method: "GET" });
    if (!resp.ok) throw new ApiError(resp.status, { error: `http_${resp.status}` });
    return resp.text();
  }
}
