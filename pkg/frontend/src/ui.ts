/** DOM layer: renders state, routes keystrokes, talks to the ApiClient.
 *
 * All tagging/validation logic lives in model.ts; this file only moves data
 * between that logic and the document.
 */

import { ApiClient, ApiError } from "./api.js";
import { agreementRows, formatKappa } from "./agreement.js";
import { DraftStore } from "./drafts.js";
import {
  fromDetail,
  isWellFormed,
  termForKey,
  toSubmission,
  tagSpan,
  validateRecord,
  type LocalRecord,
  type SchemaInfo,
  type SentenceDetail,
  type SentenceSummary,
} from "./model.js";

// same palette as the server-side plots, so tag colors match the figures
const PALETTE = [
  "#0072b2",
  "#d55e00",
  "#009e73",
  "#cc79a7",
  "#e69f00",
  "#56b4e9",
  "#b22222",
  "#7570b3",
];

interface Session {
  annotatorId: string;
  cursor: number;
  selStart: number;
  selEnd: number;
  record: LocalRecord | null;
  readOnly: boolean;
  drafts: DraftStore;
}

export class App {
  private schema!: SchemaInfo;
  private summaries: SentenceSummary[] = [];
  private session: Session;
  private colors = new Map<string, string>();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    storage: Storage,
    annotatorId: string,
  ) {
    this.session = {
      annotatorId,
      cursor: 0,
      selStart: 0,
      selEnd: 0,
      record: null,
      readOnly: false,
      drafts: new DraftStore(storage, annotatorId),
    };
  }

  async start(): Promise<void> {
    this.schema = await this.api.getSchema();
    this.schema.terms.forEach((t, i) => {
      this.colors.set(t.name, PALETTE[i % PALETTE.length] ?? "#999999");
    });
    this.summaries = await this.api.listSentences();
    this.renderShell();
    await this.open(0);
    document.addEventListener("keydown", (event) => this.onKey(event));
  }

  // -- navigation ----------------------------------------------------------

  async open(index: number): Promise<void> {
    if (index < 0 || index >= this.summaries.length) {
      return;
    }
    this.session.cursor = index;
    this.session.selStart = 0;
    this.session.selEnd = 0;
    const summary = this.summaries[index]!;
    let detail: SentenceDetail;
    try {
      detail = await this.api.getSentence(summary.id);
    } catch (err) {
      this.setStatus(`load failed: ${(err as Error).message}`, "error");
      return;
    }
    this.session.readOnly = !isWellFormed(detail);
    if (this.session.readOnly) {
      this.session.record = null;
      this.renderMalformed(detail);
      return;
    }
    const draft = this.session.drafts.load(detail.id);
    this.session.record =
      draft && draft.sentence === detail.sentence
        ? draft
        : fromDetail(detail, this.session.annotatorId);
    this.renderAll();
    this.setStatus(draft ? "restored local draft" : "", "info");
  }

  // -- editing -------------------------------------------------------------

  private applyTag(tag: string): void {
    const { record, selStart, selEnd } = this.session;
    if (!record || this.session.readOnly) {
      return;
    }
    const next = tagSpan(record, selStart, selEnd, tag);
    if (next === null) {
      this.setStatus("selection out of range", "error");
      return;
    }
    this.session.record = next;
    this.session.drafts.save(next);
    this.renderTokens();
    this.setStatus("draft saved", "info");
  }

  private toggleSynthesis(): void {
    const record = this.session.record;
    if (!record) {
      return;
    }
    this.session.record = { ...record, is_synthesis: !record.is_synthesis };
    this.session.drafts.save(this.session.record);
    this.renderTokens();
  }

  private moveSelection(delta: number, extend: boolean): void {
    const record = this.session.record;
    if (!record) {
      return;
    }
    const limit = record.tokens.length - 1;
    const end = Math.min(Math.max(this.session.selEnd + delta, 0), limit);
    this.session.selEnd = end;
    if (!extend) {
      this.session.selStart = end;
    }
    if (this.session.selStart > this.session.selEnd) {
      [this.session.selStart, this.session.selEnd] = [
        this.session.selEnd,
        this.session.selStart,
      ];
    }
    this.renderTokens();
  }

  async submitAndAdvance(): Promise<void> {
    const record = this.session.record;
    if (!record || this.session.readOnly) {
      return;
    }
    const problems = validateRecord(record, this.schema);
    if (problems.length > 0) {
      this.setStatus(`not submitted: ${problems.join("; ")}`, "error");
      return;
    }
    try {
      await this.api.submitAnnotation(toSubmission(record, this.session.annotatorId));
    } catch (err) {
      const reason = err instanceof ApiError ? err.message : String(err);
      this.setStatus(`submit failed, edits kept locally: ${reason}`, "error");
      return;
    }
    this.session.drafts.clear(record.id);
    this.setStatus("submitted", "ok");
    try {
      this.summaries = await this.api.listSentences();
    } catch {
      /* list refresh is cosmetic; stale annotator badges are acceptable */
    }
    this.renderSentenceList();
    await this.open(this.session.cursor + 1);
  }

  private onKey(event: KeyboardEvent): void {
    if (event.target instanceof HTMLInputElement) {
      return;
    }
    const term = termForKey(this.schema, event.key);
    if (term !== null) {
      event.preventDefault();
      this.applyTag(term);
      return;
    }
    switch (event.key) {
      case "Backspace":
        event.preventDefault();
        this.applyTag(this.schema.not_action);
        break;
      case "ArrowLeft":
        event.preventDefault();
        this.moveSelection(-1, event.shiftKey);
        break;
      case "ArrowRight":
        event.preventDefault();
        this.moveSelection(1, event.shiftKey);
        break;
      case "s":
      case "S":
        this.toggleSynthesis();
        break;
      case "Enter":
        event.preventDefault();
        void this.submitAndAdvance();
        break;
      case "ArrowUp":
        event.preventDefault();
        void this.open(this.session.cursor - 1);
        break;
      case "ArrowDown":
        event.preventDefault();
        void this.open(this.session.cursor + 1);
        break;
    }
  }

  // -- agreement view ------------------------------------------------------

  async showAgreement(idsText: string): Promise<void> {
    const target = this.el("agreement-table");
    const ids = idsText
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s.length > 0);
    if (ids.length < 2) {
      target.innerHTML = `<p class="error">enter at least two annotator ids, comma-separated</p>`;
      return;
    }
    let report;
    try {
      report = await this.api.getAgreement(ids);
    } catch (err) {
      target.innerHTML = `<p class="error">${escapeHtml((err as Error).message)}</p>`;
      return;
    }
    if (report.n_sentences === 0) {
      target.innerHTML = `<p class="error">${escapeHtml(
        report.note ?? "no sentences shared by all selected annotators",
      )}</p>`;
      return;
    }
    const rows = agreementRows(report, this.schema)
      .map(
        (row) =>
          `<tr><td>${escapeHtml(row.label)}</td><td class="num">${row.display}</td></tr>`,
      )
      .join("");
    target.innerHTML =
      `<p>${report.n_sentences} sentences, ${report.n_tokens} tokens, ` +
      `panel: ${escapeHtml(report.annotators.join(", "))}</p>` +
      `<table><thead><tr><th>Scope</th><th>κ</th></tr></thead><tbody>${rows}</tbody></table>`;
  }

  // -- rendering -----------------------------------------------------------

  private el(id: string): HTMLElement {
    const found = this.root.querySelector<HTMLElement>(`#${id}`);
    if (!found) {
      throw new Error(`missing element #${id}`);
    }
    return found;
  }

  private renderShell(): void {
    const legend = this.schema.terms
      .map(
        (t) =>
          `<span class="legend-item"><span class="swatch" style="background:${this.colors.get(
            t.name,
          )}"></span>${t.key}&nbsp;${escapeHtml(t.name)}<span class="tip">${escapeHtml(
            t.definition,
          )}</span></span>`,
      )
      .join("");
    this.root.innerHTML = `
      <header>
        <h1>Synthesis-action annotator</h1>
        <div class="legend">${legend}<span class="legend-item">0 clear</span></div>
        <div class="help">1–8 tag · 0/⌫ clear · ⇧←→ extend span · S synthesis · ⏎ submit</div>
      </header>
      <main>
        <aside id="sentence-list"></aside>
        <section>
          <div id="sentence-view"></div>
          <div id="status"></div>
          <div class="controls">
            <button id="submit-btn">Submit &amp; next (⏎)</button>
            <a id="export-link" href="${this.api.exportUrl()}" download="dataset.json">Export dataset</a>
          </div>
          <details id="agreement">
            <summary>Agreement</summary>
            <div class="agreement-controls">
              <input id="agreement-ids" type="text" placeholder="annotator ids, e.g. alice,bob" />
              <button id="agreement-btn">Compute</button>
            </div>
            <div id="agreement-table"></div>
          </details>
        </section>
      </main>`;
    this.el("submit-btn").addEventListener("click", () => void this.submitAndAdvance());
    this.el("agreement-btn").addEventListener("click", () => {
      const input = this.el("agreement-ids") as HTMLInputElement;
      void this.showAgreement(input.value);
    });
    this.renderSentenceList();
  }

  private renderSentenceList(): void {
    const list = this.el("sentence-list");
    list.innerHTML = this.summaries
      .map((s, i) => {
        const active = i === this.session.cursor ? " active" : "";
        const mine = s.annotators.includes(this.session.annotatorId) ? " done" : "";
        const badge = s.is_synthesis ? "S" : "·";
        return `<div class="row${active}${mine}" data-index="${i}">
          <span class="badge">${badge}</span>
          <span class="snippet">${escapeHtml(s.sentence.slice(0, 60))}</span>
          <span class="count">${s.annotators.length}</span>
        </div>`;
      })
      .join("");
    list.querySelectorAll<HTMLElement>(".row").forEach((row) => {
      row.addEventListener("click", () => void this.open(Number(row.dataset.index)));
    });
  }

  private renderAll(): void {
    this.renderSentenceList();
    this.renderTokens();
  }

  private renderTokens(): void {
    const record = this.session.record;
    const view = this.el("sentence-view");
    if (!record) {
      view.innerHTML = "";
      return;
    }
    const { selStart, selEnd } = this.session;
    const chips = record.tokens
      .map((token, i) => {
        const tag = record.tags[i] ?? "";
        const color = this.colors.get(tag);
        const classes = ["token"];
        if (i >= selStart && i <= selEnd) {
          classes.push("selected");
        }
        const style = color ? ` style="background:${color}"` : "";
        const label = color ? `<span class="tag-name">${escapeHtml(tag)}</span>` : "";
        return `<span class="${classes.join(" ")}" data-index="${i}"${style}>${escapeHtml(
          token,
        )}${label}</span>`;
      })
      .join(" ");
    const synthesis = record.is_synthesis
      ? `<span class="synth yes">synthesis</span>`
      : `<span class="synth no">not synthesis</span>`;
    view.innerHTML = `<div class="tokens">${chips}</div><div class="flags">${synthesis} (S toggles)</div>`;
    view.querySelectorAll<HTMLElement>(".token").forEach((chip) => {
      chip.addEventListener("click", (event) => {
        const index = Number(chip.dataset.index);
        if ((event as MouseEvent).shiftKey) {
          this.session.selEnd = index;
          if (this.session.selStart > index) {
            [this.session.selStart, this.session.selEnd] = [index, this.session.selStart];
          }
        } else {
          this.session.selStart = index;
          this.session.selEnd = index;
        }
        this.renderTokens();
      });
    });
  }

  private renderMalformed(detail: SentenceDetail): void {
    const view = this.el("sentence-view");
    view.innerHTML =
      `<p class="error">record ${detail.id} is malformed (tokens do not match the ` +
      `sentence); shown read-only</p><pre>${escapeHtml(
        JSON.stringify(detail, null, 2),
      )}</pre>`;
    this.setStatus("read-only record", "error");
  }

  private setStatus(text: string, kind: "info" | "ok" | "error"): void {
    const status = this.el("status");
    status.textContent = text;
    status.className = kind;
  }
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export { formatKappa };
