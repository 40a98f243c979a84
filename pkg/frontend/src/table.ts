import { applyCellText, cellText } from "./cells";
import { EDITABLE_COLUMNS, EditorState } from "./state";
import type { SentenceData, VocabularyData } from "./types";

export interface TableCallbacks {
  /** Called after an edit is applied locally; the owner saves it. */
  onCommit: (sentence: SentenceData) => void;
  vocabulary: () => VocabularyData | null;
}

/** The annotation grid: one row per token, MWT range rows read-only,
 * fully keyboard-operable (arrows/tab to move, Enter to edit, Escape to
 * cancel, autocomplete popup driven by arrow keys). */
export class AnnotationTable {
  private editor: HTMLInputElement | null = null;
  private popup: HTMLUListElement | null = null;

  constructor(
    private container: HTMLElement,
    private state: EditorState,
    private callbacks: TableCallbacks,
  ) {
    this.container.addEventListener("keydown", (ev) => this.onKeyDown(ev));
    this.container.addEventListener("click", (ev) => this.onClick(ev));
  }

  render(): void {
    const state = this.state;
    const cols = state.columns();
    const table = document.createElement("table");
    table.className = "anno-table";
    const thead = document.createElement("thead");
    const headRow = document.createElement("tr");
    for (const col of cols) {
      const th = document.createElement("th");
      th.dataset.col = col;
      th.textContent = col.startsWith("feat:") ? col.slice(5) : col.toUpperCase();
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);
    table.appendChild(thead);

    const tbody = document.createElement("tbody");
    const byFirst = new Map(state.sentence.mwts.map((m) => [m.first_id, m]));
    for (const tok of state.sentence.tokens) {
      const mwt = byFirst.get(tok.id);
      if (mwt) {
        const row = document.createElement("tr");
        row.className = "mwt-row";
        row.dataset.mwt = `${mwt.first_id}-${mwt.last_id}`;
        for (const col of cols) {
          const td = document.createElement("td");
          if (col === "id") td.textContent = `${mwt.first_id}-${mwt.last_id}`;
          else if (col === "form") td.textContent = mwt.form;
          else td.textContent = "";
          row.appendChild(td);
        }
        tbody.appendChild(row);
      }
      const row = document.createElement("tr");
      row.dataset.tokenId = String(tok.id);
      for (const col of cols) {
        const td = document.createElement("td");
        td.dataset.col = col;
        td.dataset.tokenId = String(tok.id);
        td.tabIndex = -1;
        td.textContent = cellText(tok, col);
        row.appendChild(td);
      }
      tbody.appendChild(row);
    }
    table.appendChild(tbody);
    this.container.replaceChildren(table);
    this.updateFocusClass();
  }

  cell(tokenId: number, column: string): HTMLTableCellElement | null {
    return this.container.querySelector(
      `td[data-token-id="${tokenId}"][data-col="${column}"]`,
    );
  }

  focusCell(tokenId: number, column: string): void {
    this.state.focus = { tokenId, column };
    this.state.clampFocus();
    this.updateFocusClass();
  }

  private updateFocusClass(): void {
    for (const td of this.container.querySelectorAll("td.focused")) {
      td.classList.remove("focused");
    }
    const { tokenId, column } = this.state.focus;
    const td = this.cell(tokenId, column);
    if (td) {
      td.classList.add("focused");
      td.tabIndex = 0;
      td.focus();
    }
  }

  get isEditing(): boolean {
    return this.editor !== null;
  }

  private onClick(ev: MouseEvent): void {
    const td = (ev.target as HTMLElement).closest?.("td[data-col]");
    if (td instanceof HTMLTableCellElement && td.dataset.tokenId) {
      this.focusCell(parseInt(td.dataset.tokenId, 10), td.dataset.col!);
    }
  }

  private onKeyDown(ev: KeyboardEvent): void {
    if (this.editor) {
      this.onEditorKey(ev);
      return;
    }
    const moves: Record<string, [number, number]> = {
      ArrowUp: [-1, 0],
      ArrowDown: [1, 0],
      ArrowLeft: [0, -1],
      ArrowRight: [0, 1],
    };
    if (ev.key in moves && !ev.ctrlKey && !ev.altKey) {
      const [dr, dc] = moves[ev.key];
      this.state.moveFocus(dr, dc);
      this.updateFocusClass();
      ev.preventDefault();
    } else if (ev.key === "Tab") {
      this.state.moveFocus(0, ev.shiftKey ? -1 : 1);
      this.updateFocusClass();
      ev.preventDefault();
    } else if (ev.key === "Enter" || ev.key === "F2") {
      this.beginEdit();
      ev.preventDefault();
    }
  }

  beginEdit(initial?: string): void {
    const { tokenId, column } = this.state.focus;
    if (!EDITABLE_COLUMNS.has(column) && !column.startsWith("feat:")) return;
    const td = this.cell(tokenId, column);
    if (!td) return;
    const token = this.state.sentence.tokens[tokenId - 1];
    const input = document.createElement("input");
    input.className = "cell-editor";
    input.value = initial !== undefined ? initial : cellText(token, column);
    td.replaceChildren(input);
    this.editor = input;
    this.state.editing = true;
    input.addEventListener("input", () => this.refreshPopup());
    input.focus();
    this.refreshPopup();
  }

  private candidatesFor(column: string): string[] {
    const vocab = this.callbacks.vocabulary();
    if (!vocab) return [];
    if (column === "upos") return vocab.upos;
    if (column === "deprel") return vocab.deprel;
    if (column.startsWith("feat:")) return vocab.feats[column.slice(5)] ?? [];
    return [];
  }

  private refreshPopup(): void {
    if (!this.editor) return;
    const { column } = this.state.focus;
    const all = this.candidatesFor(column);
    if (all.length === 0) {
      this.closePopup();
      return;
    }
    const prefix = this.editor.value.toLowerCase();
    const candidates = all.filter((c) => c.toLowerCase().startsWith(prefix));
    if (candidates.length === 0) {
      this.closePopup();
      return;
    }
    const prior = this.state.autocomplete;
    const highlighted = prior
      ? Math.min(prior.highlighted, candidates.length - 1)
      : -1;
    this.state.autocomplete = { candidates, highlighted };
    let popup = this.popup;
    if (!popup) {
      popup = document.createElement("ul");
      popup.className = "autocomplete";
      this.editor.parentElement!.appendChild(popup);
      this.popup = popup;
    }
    popup.replaceChildren(
      ...candidates.map((cand, i) => {
        const li = document.createElement("li");
        li.textContent = cand;
        if (i === highlighted) li.classList.add("highlighted");
        return li;
      }),
    );
  }

  private closePopup(): void {
    this.popup?.remove();
    this.popup = null;
    this.state.autocomplete = null;
  }

  private moveHighlight(delta: number): void {
    const ac = this.state.autocomplete;
    if (!ac) return;
    const n = ac.candidates.length;
    ac.highlighted = (ac.highlighted + delta + n) % n;
    const items = this.popup?.querySelectorAll("li") ?? [];
    items.forEach((li, i) => li.classList.toggle("highlighted", i === ac.highlighted));
  }

  private onEditorKey(ev: KeyboardEvent): void {
    if (ev.key === "ArrowDown" && this.state.autocomplete) {
      this.moveHighlight(1);
      ev.preventDefault();
      ev.stopPropagation();
    } else if (ev.key === "ArrowUp" && this.state.autocomplete) {
      this.moveHighlight(-1);
      ev.preventDefault();
      ev.stopPropagation();
    } else if (ev.key === "Enter") {
      const ac = this.state.autocomplete;
      const value =
        ac && ac.highlighted >= 0 ? ac.candidates[ac.highlighted] : this.editor!.value;
      this.commitEdit(value);
      ev.preventDefault();
      ev.stopPropagation();
    } else if (ev.key === "Escape") {
      if (this.state.autocomplete) this.closePopup();
      else this.cancelEdit();
      ev.preventDefault();
      ev.stopPropagation();
    }
  }

  commitEdit(value: string): void {
    const { tokenId, column } = this.state.focus;
    const token = this.state.sentence.tokens[tokenId - 1];
    const updated = applyCellText(token, column, value);
    if (updated === null) {
      this.editor?.classList.add("invalid");
      return; // stay in the editor; the value does not parse
    }
    this.closePopup();
    this.editor = null;
    this.state.editing = false;
    const sentence: SentenceData = JSON.parse(JSON.stringify(this.state.sentence));
    sentence.tokens[tokenId - 1] = updated;
    this.callbacks.onCommit(sentence);
  }

  cancelEdit(): void {
    this.closePopup();
    this.editor = null;
    this.state.editing = false;
    this.render();
  }
}
