import type { GraphMode, RecordData, SentenceData } from "./types";
import { GRAPH_MODES } from "./types";

// Base grid columns in CoNLL-U order. FEATS can additionally be expanded
// into one column per observed attribute ("feat:Case", ...).
export const BASE_COLUMNS = [
  "id", "form", "lemma", "upos", "xpos", "feats", "head", "deprel", "deps", "misc",
] as const;
export type Column = string;

export const EDITABLE_COLUMNS = new Set([
  "lemma", "upos", "xpos", "feats", "head", "deprel", "deps", "misc",
]);

export interface Focus {
  tokenId: number;
  column: Column;
}

export interface AutocompleteState {
  candidates: string[];
  highlighted: number;
}

/** Per-sentence editor state; the invariant that the focused cell exists is
 * re-established by any operation that changes tokens or columns. */
export class EditorState {
  record: RecordData;
  dirty = false;
  focus: Focus;
  graphMode: GraphMode;
  visibleColumns: Column[];
  autocomplete: AutocompleteState | null = null;
  editing = false;
  featColumns: string[] = [];

  constructor(record: RecordData, opts: { graphMode?: GraphMode; visibleColumns?: Column[] } = {}) {
    this.record = record;
    this.graphMode = opts.graphMode ?? "compact_horizontal";
    this.visibleColumns = opts.visibleColumns ?? [...BASE_COLUMNS];
    this.focus = { tokenId: 1, column: this.firstNavigableColumn() };
    this.clampFocus();
  }

  get sentence(): SentenceData {
    return this.record.sentence;
  }

  get expectedRevision(): number {
    return this.record.revision;
  }

  private firstNavigableColumn(): Column {
    return this.visibleColumns[0] ?? "form";
  }

  columns(): Column[] {
    const out: Column[] = [];
    for (const col of this.visibleColumns) {
      out.push(col);
      if (col === "feats") out.push(...this.featColumns.map((a) => `feat:${a}`));
    }
    return out;
  }

  clampFocus(): void {
    const n = this.sentence.tokens.length;
    if (n === 0) return;
    if (this.focus.tokenId < 1) this.focus.tokenId = 1;
    if (this.focus.tokenId > n) this.focus.tokenId = n;
    const cols = this.columns();
    if (!cols.includes(this.focus.column)) {
      this.focus = { tokenId: this.focus.tokenId, column: this.firstNavigableColumn() };
    }
  }

  moveFocus(dRow: number, dCol: number): void {
    const cols = this.columns();
    const n = this.sentence.tokens.length;
    let row = this.focus.tokenId + dRow;
    let col = cols.indexOf(this.focus.column) + dCol;
    if (col < 0) {
      if (row > 1) {
        row -= 1;
        col = cols.length - 1;
      } else {
        col = 0;
      }
    } else if (col >= cols.length) {
      if (row < n) {
        row += 1;
        col = 0;
      } else {
        col = cols.length - 1;
      }
    }
    this.focus = {
      tokenId: Math.min(Math.max(row, 1), n),
      column: cols[col],
    };
  }

  setRecord(record: RecordData): void {
    this.record = record;
    this.dirty = false;
    this.refreshFeatColumns();
    this.clampFocus();
  }

  markEdited(record: RecordData): void {
    this.record = record;
    this.dirty = true;
  }

  refreshFeatColumns(): void {
    if (this.featColumns.length === 0) return;
    const seen = new Set<string>();
    for (const tok of this.sentence.tokens) {
      for (const attr of Object.keys(tok.feats)) seen.add(attr);
    }
    for (const attr of seen) {
      if (!this.featColumns.includes(attr)) this.featColumns.push(attr);
    }
    this.featColumns.sort((a, b) => a.toLowerCase().localeCompare(b.toLowerCase()));
  }

  toggleFeatExpansion(): void {
    if (this.featColumns.length > 0) {
      this.featColumns = [];
    } else {
      const seen = new Set<string>();
      for (const tok of this.sentence.tokens) {
        for (const attr of Object.keys(tok.feats)) seen.add(attr);
      }
      this.featColumns = [...seen].sort((a, b) =>
        a.toLowerCase().localeCompare(b.toLowerCase()),
      );
    }
    this.clampFocus();
  }

  toggleColumn(column: Column): void {
    if (this.visibleColumns.includes(column)) {
      this.visibleColumns = this.visibleColumns.filter((c) => c !== column);
    } else {
      const order = [...BASE_COLUMNS] as string[];
      this.visibleColumns = order.filter(
        (c) => this.visibleColumns.includes(c) || c === column,
      );
    }
    this.clampFocus();
  }

  cycleGraphMode(): GraphMode {
    const i = GRAPH_MODES.indexOf(this.graphMode);
    this.graphMode = GRAPH_MODES[(i + 1) % GRAPH_MODES.length];
    return this.graphMode;
  }
}

// Column and graph-mode preferences persist per annotator in browser storage.
const PREF_KEY = "depanno-prefs";

export interface Preferences {
  graphMode: GraphMode;
  visibleColumns: Column[];
}

export function loadPreferences(annotator: string): Preferences | null {
  try {
    const raw = localStorage.getItem(`${PREF_KEY}:${annotator}`);
    return raw ? (JSON.parse(raw) as Preferences) : null;
  } catch {
    return null;
  }
}

export function savePreferences(annotator: string, prefs: Preferences): void {
  try {
    localStorage.setItem(`${PREF_KEY}:${annotator}`, JSON.stringify(prefs));
  } catch {
    // storage may be unavailable; preferences are best-effort
  }
}
