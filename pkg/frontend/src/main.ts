/** Browser entry point: wires the tested modules (canvas, CPT grid,
 * histograms, workbench/session flow) to the DOM. */

import { ApiClient, ApiError } from "./api.js";
import {
  CanvasState,
  applyDelete,
  copySelection,
  createArc,
  createNode,
  documentWithLayout,
  initialCanvas,
  moveNode,
  paste,
  previewDelete,
  select,
} from "./canvas.js";
import { CptGrid, applyPaste, buildGrid, canSave, invalidRows, saveGrid, setCell } from "./cpt-grid.js";
import { allHistograms, renderHistogramHtml } from "./histogram.js";
import { nodeById } from "./model.js";
import type { NetworkDocument } from "./types.js";
import { Workbench } from "./workbench.js";

const SERVICE_URL = (window as unknown as { BELIEFNET_URL?: string }).BELIEFNET_URL ?? "http://127.0.0.1:8231";

const EMPTY_DOC: NetworkDocument = { name: "untitled", nodes: [] };

class App {
  api = new ApiClient(SERVICE_URL);
  bench = new Workbench(this.api);
  canvas: CanvasState = initialCanvas(EMPTY_DOC);
  grid: CptGrid | null = null;
  arcSource: string | null = null;
  statusEl = document.getElementById("status")!;
  graphEl = document.getElementById("graph")! as unknown as SVGSVGElement;
  histEl = document.getElementById("histograms")!;
  editorEl = document.getElementById("cpt-editor")!;
  modalEl = document.getElementById("modal")!;

  async start(): Promise<void> {
    this.bindToolbar();
    this.renderAll();
    this.setStatus(`ready — service at ${SERVICE_URL}`);
  }

  setStatus(text: string): void {
    this.statusEl.textContent = text;
  }

  bindToolbar(): void {
    const byId = (id: string) => document.getElementById(id)!;
    byId("btn-new-node").onclick = () => {
      const id = prompt("node id (no whitespace)?");
      if (!id) return;
      const values = (prompt("value labels, comma separated?", "True,False") ?? "")
        .split(",").map((s) => s.trim()).filter(Boolean);
      try {
        this.canvas = createNode(this.canvas, id, values, { x: 120, y: 120 });
        this.renderAll();
      } catch (e) {
        this.setStatus(String(e));
      }
    };
    byId("btn-arc").onclick = () => {
      this.arcSource = this.canvas.selection[0] ?? null;
      this.setStatus(this.arcSource ? `arc from ${this.arcSource}: click the child node` : "select a parent node first");
    };
    byId("btn-copy").onclick = () => {
      this.canvas = copySelection(this.canvas);
      this.setStatus(`copied ${this.canvas.clipboard?.nodes.length ?? 0} node(s)`);
    };
    byId("btn-paste").onclick = () => {
      const outcome = paste(this.canvas);
      this.canvas = outcome.state;
      const renames = Object.entries(outcome.renames).map(([a, b]) => `${a} -> ${b}`).join(", ");
      this.setStatus(renames ? `pasted with renames: ${renames}` : "pasted");
      if (outcome.needsReentry.length) {
        this.setStatus(`pasted; re-enter probabilities for: ${outcome.needsReentry.join(", ")}`);
      }
      this.renderAll();
    };
    byId("btn-delete").onclick = () => {
      if (!this.canvas.selection.length) return;
      const preview = previewDelete(this.canvas);
      if (preview.needsReentry.length) {
        const ok = confirm(
          `Deleting will reset the tables of: ${preview.needsReentry.join(", ")}. ` +
          "Their probabilities must be re-entered. Continue?");
        if (!ok) return;
      }
      this.canvas = applyDelete(this.canvas, preview);
      this.renderAll();
    };
    byId("btn-save").onclick = () => void this.save();
    byId("btn-propagate").onclick = () => void this.propagateNow();
    byId("btn-clear").onclick = () => void this.clear();
    (byId("mode-select") as HTMLSelectElement).onchange = (e) => {
      const mode = (e.target as HTMLSelectElement).value as "automatic" | "on-request";
      this.bench.setMode(mode);
      byId("btn-propagate").toggleAttribute("disabled", mode === "automatic");
    };
    byId("btn-load").onclick = () => void this.loadFromTextarea();
    byId("btn-export").onclick = () => {
      const area = byId("doc-text") as HTMLTextAreaElement;
      area.value = JSON.stringify(documentWithLayout(this.canvas), null, 2);
      this.setStatus("document exported to the text panel");
    };
  }

  async loadFromTextarea(): Promise<void> {
    const area = document.getElementById("doc-text") as HTMLTextAreaElement;
    try {
      const doc = JSON.parse(area.value) as NetworkDocument;
      await this.bench.loadDocument(doc);
      this.canvas = initialCanvas(this.bench.doc!);
      this.renderAll();
      this.setStatus(`loaded ${doc.name}: ${doc.nodes.length} nodes`);
    } catch (e) {
      this.setStatus(e instanceof ApiError ? `${e.body.error}: ${(e.body.violations ?? [e.body.detail]).join("; ")}` : String(e));
    }
  }

  async save(): Promise<void> {
    try {
      await this.bench.saveDocument(documentWithLayout(this.canvas));
      this.canvas = { ...this.canvas, dirty: false };
      this.renderAll();
      this.setStatus("saved; session reopened");
    } catch (e) {
      this.setStatus(e instanceof ApiError ? `${e.body.error}: ${(e.body.violations ?? [e.body.detail]).join("; ")}` : String(e));
    }
  }

  async instantiate(nodeId: string, value: string): Promise<void> {
    await this.bench.instantiate(nodeId, value);
    this.renderModal();
    this.renderHistograms();
    if (this.bench.mode === "on-request") {
      this.setStatus(`batched: ${Object.keys(this.bench.pending).join(", ") || "nothing"} (press Propagate)`);
    }
  }

  async propagateNow(): Promise<void> {
    await this.bench.propagateNow();
    this.renderModal();
    this.renderHistograms();
  }

  async clear(): Promise<void> {
    await this.bench.clearEvidence();
    this.renderModal();
    this.renderHistograms();
  }

  // -- rendering ------------------------------------------------------------

  renderAll(): void {
    this.renderGraph();
    this.renderHistograms();
    this.renderEditor();
    this.renderModal();
  }

  renderGraph(): void {
    const svgParts: string[] = [
      `<defs><marker id="arrow" markerWidth="10" markerHeight="8" refX="9" refY="4" orient="auto"><path d="M0,0 L10,4 L0,8 z"/></marker></defs>`,
    ];
    for (const n of this.canvas.doc.nodes) {
      const to = this.canvas.positions[n.id];
      for (const p of n.parents) {
        const from = this.canvas.positions[p];
        if (from && to) {
          svgParts.push(
            `<line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}" class="arc" marker-end="url(#arrow)"/>`);
        }
      }
    }
    for (const n of this.canvas.doc.nodes) {
      const pos = this.canvas.positions[n.id];
      const selected = this.canvas.selection.includes(n.id) ? " selected" : "";
      const observed = this.bench.evidence[n.id] ? " observed" : "";
      svgParts.push(
        `<g class="node${selected}${observed}" data-node="${n.id}" transform="translate(${pos.x},${pos.y})">` +
        `<ellipse rx="56" ry="24"/><text text-anchor="middle" dy="4">${n.id}</text></g>`);
    }
    this.graphEl.innerHTML = svgParts.join("");
    this.graphEl.querySelectorAll<SVGGElement>("g.node").forEach((g) => {
      const id = g.dataset.node!;
      g.addEventListener("click", (ev) => this.onNodeClick(id, ev));
      g.addEventListener("dblclick", () => this.openEditor(id));
      g.addEventListener("contextmenu", (ev) => {
        ev.preventDefault();
        this.openValueMenu(id, ev as MouseEvent);
      });
      g.addEventListener("mousedown", (ev) => this.beginDrag(id, ev as MouseEvent));
    });
  }

  beginDrag(id: string, down: MouseEvent): void {
    const start = this.canvas.positions[id];
    const origin = { x: down.clientX, y: down.clientY };
    let dragged = false;
    const onMove = (ev: MouseEvent) => {
      const dx = ev.clientX - origin.x;
      const dy = ev.clientY - origin.y;
      if (!dragged && Math.abs(dx) + Math.abs(dy) < 4) return;
      dragged = true;
      this.canvas = moveNode(this.canvas, id, { x: start.x + dx, y: start.y + dy });
      this.renderGraph();
    };
    const onUp = () => {
      window.removeEventListener("mousemove", onMove);
      window.removeEventListener("mouseup", onUp);
    };
    window.addEventListener("mousemove", onMove);
    window.addEventListener("mouseup", onUp);
  }

  onNodeClick(id: string, ev: Event): void {
    if (this.arcSource && this.arcSource !== id) {
      try {
        const { state, needsReentry } = createArc(this.canvas, this.arcSource, id);
        this.canvas = state;
        if (needsReentry.length) this.setStatus(`arc added; re-enter probabilities for ${needsReentry.join(", ")}`);
      } catch (e) {
        this.setStatus(String(e)); // cycle rejected, no server call
      }
      this.arcSource = null;
      this.renderAll();
      return;
    }
    const multi = (ev as MouseEvent).shiftKey;
    const selection = multi ? [...this.canvas.selection, id] : [id];
    this.canvas = select(this.canvas, selection);
    this.renderGraph();
  }

  /** Per-node pop-up menu listing the values (plus "clear all evidence"). */
  openValueMenu(id: string, ev: MouseEvent): void {
    const node = nodeById(this.canvas.doc, id);
    const menu = document.getElementById("value-menu")!;
    menu.innerHTML = node.values
      .map((v) => `<button data-value="${v}">${id} = ${v}</button>`)
      .join("") + `<button data-clear="1">clear all evidence</button>`;
    menu.style.display = "block";
    menu.style.left = `${ev.pageX}px`;
    menu.style.top = `${ev.pageY}px`;
    menu.querySelectorAll("button").forEach((b) =>
      b.addEventListener("click", () => {
        menu.style.display = "none";
        if ((b as HTMLButtonElement).dataset.clear) void this.clear();
        else void this.instantiate(id, (b as HTMLButtonElement).dataset.value!);
      }),
    );
  }

  openEditor(id: string): void {
    this.grid = buildGrid(this.canvas.doc, id);
    this.renderEditor();
  }

  renderEditor(): void {
    if (!this.grid) {
      this.editorEl.innerHTML = "<p>double-click a node to edit its table</p>";
      return;
    }
    const g = this.grid;
    const bad = new Set(invalidRows(g));
    const header = `<tr>${g.parentIds.map((p) => `<th>${p}</th>`).join("")}${g.columns
      .map((c) => `<th>${c}</th>`).join("")}</tr>`;
    const rows = g.cells
      .map((cells, r) => {
        const cfg = g.configs[r].map((v) => `<td class="cfg">${v}</td>`).join("");
        const nums = cells
          .map((x, c) =>
            `<td><input data-row="${r}" data-col="${c}" value="${x}" class="${bad.has(r) ? "bad" : ""}"/></td>`)
          .join("");
        return `<tr class="${bad.has(r) ? "bad-row" : ""}">${cfg}${nums}</tr>`;
      })
      .join("");
    this.editorEl.innerHTML = `
      <h3>P(${g.nodeId}${g.parentIds.length ? " | " + g.parentIds.join(", ") : ""})</h3>
      <table class="cpt">${header}${rows}</table>
      <div class="editor-actions">
        <button id="cpt-save" ${canSave(g) ? "" : "disabled"}>Save table</button>
        <button id="cpt-close">Close</button>
        <span class="hint">paste tab-separated rows anywhere in the grid</span>
      </div>`;
    this.editorEl.querySelectorAll<HTMLInputElement>("input").forEach((inp) => {
      inp.addEventListener("change", () => {
        this.grid = setCell(this.grid!, Number(inp.dataset.row), Number(inp.dataset.col), Number(inp.value));
        this.renderEditor();
      });
      inp.addEventListener("paste", (ev) => {
        const text = ev.clipboardData?.getData("text") ?? "";
        if (!text.includes("\t") && !text.includes("\n")) return;
        ev.preventDefault();
        try {
          this.grid = applyPaste(this.grid!, text, Number(inp.dataset.row), Number(inp.dataset.col));
          this.renderEditor();
        } catch (e) {
          this.setStatus(String(e));
        }
      });
    });
    const saveBtn = this.editorEl.querySelector<HTMLButtonElement>("#cpt-save");
    if (saveBtn) {
      saveBtn.onclick = () => {
        this.canvas = { ...this.canvas, doc: saveGrid(this.canvas.doc, this.grid!), dirty: true };
        this.grid = null;
        this.renderAll();
        this.setStatus("table updated (remember to Save document)");
      };
    }
    const closeBtn = this.editorEl.querySelector<HTMLButtonElement>("#cpt-close");
    if (closeBtn) closeBtn.onclick = () => {
      this.grid = null;
      this.renderEditor();
    };
  }

  renderHistograms(): void {
    if (!this.bench.lastReport || !this.bench.doc) {
      this.histEl.innerHTML = "<p>load a document to see posteriors</p>";
      return;
    }
    this.histEl.innerHTML =
      `<div class="pe">P(evidence) = ${this.bench.lastReport.p_evidence}</div>` +
      allHistograms(this.bench.doc, this.bench.lastReport).map(renderHistogramHtml).join("");
  }

  renderModal(): void {
    const m = this.bench.modal;
    if (m.kind === "none") {
      this.modalEl.style.display = "none";
      return;
    }
    const messages: Record<string, string> = {
      "impossible-evidence": "This combination of evidence has probability 0. Retract evidence?",
      contradiction: "That value contradicts evidence already entered.",
      "network-changed": "The network changed on the server; the session must be reopened.",
    };
    this.modalEl.style.display = "block";
    this.modalEl.innerHTML = `
      <div class="modal-box">
        <p>${messages[m.kind]}</p>
        ${m.kind === "impossible-evidence" ? '<button id="modal-retract">Retract all evidence</button>' : ""}
        ${m.kind === "network-changed" ? '<button id="modal-reopen">Reopen session</button>' : ""}
        <button id="modal-close">Close</button>
      </div>`;
    this.modalEl.querySelector<HTMLButtonElement>("#modal-retract")?.addEventListener("click", () => void this.clear());
    this.modalEl.querySelector<HTMLButtonElement>("#modal-reopen")?.addEventListener("click", () => {
      void this.bench.openSession().then(() => {
        this.bench.dismissModal();
        this.renderAll();
      });
    });
    this.modalEl.querySelector<HTMLButtonElement>("#modal-close")!.addEventListener("click", () => {
      this.bench.dismissModal();
      this.renderModal();
    });
  }
}

new App().start().catch((e) => {
  document.getElementById("status")!.textContent = String(e);
});
