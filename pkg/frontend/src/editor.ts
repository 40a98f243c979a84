import { ApiClient, ApiError } from "./api";
import { ErrorPanel, issueColumn } from "./errors";
import { renderDiagram } from "./graph";
import { EditorState, savePreferences } from "./state";
import { StatusControls } from "./status";
import { AnnotationTable } from "./table";
import type { IssueData, RecordData, SentenceData, VocabularyData } from "./types";

// Keyboard map (also listed in the on-screen help):
//   arrows / Tab     move between cells
//   Enter / F2       edit the focused cell (Enter commits, Escape cancels)
//   Ctrl+S           save as Draft
//   Ctrl+Shift+C     save with status Complete
//   Ctrl+Shift+D     save with status Draft
//   Ctrl+B           split the focused token (prompt for the parts)
//   Ctrl+J           join a token range (prompt, prefilled from the focus)
//   Ctrl+M           cycle the graph mode
//   Ctrl+E           jump to the error panel (Enter focuses the bad cell)
//   Ctrl+U           toggle expanded per-attribute FEATS columns
//   Ctrl+O           column chooser (arrows + Space, Escape closes)

export class EditorView {
  state!: EditorState;
  table!: AnnotationTable;
  errorPanel!: ErrorPanel;
  statusControls!: StatusControls;
  vocab: VocabularyData | null = null;

  private graphBox!: HTMLElement;
  private tableBox!: HTMLElement;
  private messageBox!: HTMLElement;
  private promptBox!: HTMLElement;
  private noteField!: HTMLTextAreaElement;
  private columnMenu: HTMLElement | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
    private treebank: string,
    private sentId: string,
    private onExit?: () => void,
  ) {}

  /** Await in tests: resolves when queued loads/saves are done. */
  idle(): Promise<void> {
    return this.pending;
  }

  private enqueue(work: () => Promise<void>): Promise<void> {
    this.pending = this.pending.then(work, work);
    return this.pending;
  }

  open(focusTokenId?: number): Promise<void> {
    return this.enqueue(async () => {
      const record = await this.client.getSentence(this.treebank, this.sentId);
      this.vocab = await this.client.vocabulary(this.treebank);
      this.state = new EditorState(record);
      this.buildSkeleton();
      if (focusTokenId) this.state.focus = { tokenId: focusTokenId, column: "form" };
      this.state.clampFocus();
      this.renderAll();
      await this.refreshGraph();
    });
  }

  private buildSkeleton(): void {
    this.root.replaceChildren();
    this.root.className = "editor";

    const toolbar = document.createElement("div");
    toolbar.className = "toolbar pinned";
    const title = document.createElement("span");
    title.className = "sent-title";
    title.textContent = `${this.treebank} / ${this.sentId}`;
    const statusBox = document.createElement("span");
    this.messageBox = document.createElement("span");
    this.messageBox.className = "message";
    toolbar.append(title, statusBox, this.messageBox);

    // the sentence under annotation stays pinned while the page scrolls
    const textLine = document.createElement("div");
    textLine.className = "sentence-text pinned";
    textLine.textContent = this.state.sentence.text;

    this.graphBox = document.createElement("div");
    this.graphBox.className = "graph-panel pinned";

    this.promptBox = document.createElement("div");
    this.promptBox.className = "prompt";

    this.tableBox = document.createElement("div");
    this.tableBox.className = "table-panel";

    const errorBox = document.createElement("div");
    errorBox.className = "error-panel";

    const noteLabel = document.createElement("label");
    noteLabel.textContent = "note";
    this.noteField = document.createElement("textarea");
    this.noteField.className = "note-field";
    this.noteField.value = this.state.record.note;
    this.noteField.addEventListener("input", () => {
      this.state.dirty = true;
    });
    noteLabel.appendChild(this.noteField);

    this.root.append(toolbar, textLine, this.graphBox, this.promptBox,
                     this.tableBox, errorBox, noteLabel);

    this.statusControls = new StatusControls(statusBox, (status) => {
      void this.save(status);
    });
    this.table = new AnnotationTable(this.tableBox, this.state, {
      onCommit: (sentence) => this.commitLocalEdit(sentence),
      vocabulary: () => this.vocab,
    });
    this.errorPanel = new ErrorPanel(errorBox, (issue) => this.focusIssue(issue));
    this.root.addEventListener("keydown", (ev) => this.onKeyDown(ev));
  }

  private renderAll(): void {
    this.table.render();
    this.statusControls.render(this.state.record.status);
    this.errorPanel.render(this.state.record.issues);
    const textLine = this.root.querySelector(".sentence-text");
    if (textLine) textLine.textContent = this.state.sentence.text;
  }

  private async refreshGraph(): Promise<void> {
    const diagram = await this.client.layout(
      this.treebank, this.sentId, this.state.graphMode,
    );
    renderDiagram(this.graphBox, diagram);
  }

  private message(text: string): void {
    this.messageBox.textContent = text;
  }

  private focusIssue(issue: IssueData): void {
    if (issue.token_id !== null) {
      this.table.focusCell(issue.token_id, issueColumn(issue));
    }
  }

  private commitLocalEdit(sentence: SentenceData): void {
    this.state.markEdited({ ...this.state.record, sentence });
    this.table.render();
    // content edits always save as Draft; Complete is an explicit decision
    void this.save("Draft");
  }

  save(status: "Draft" | "Complete"): Promise<void> {
    return this.enqueue(async () => {
      try {
        const record = await this.client.putSentence(this.treebank, this.sentId, {
          sentence: this.state.sentence,
          status,
          note: this.noteField.value,
          expected_revision: this.state.expectedRevision,
        });
        this.state.setRecord(record);
        this.renderAll();
        this.message(`saved revision ${record.revision} (${record.status})`);
        await this.refreshGraph();
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          const current = err.details["current_revision"];
          this.message(
            `conflict: sentence changed elsewhere (stored revision ${current}); reloaded`,
          );
          const record = await this.client.getSentence(this.treebank, this.sentId);
          this.state.setRecord(record);
          this.renderAll();
          await this.refreshGraph();
        } else if (err instanceof ApiError && err.status === 422) {
          const issues = (err.details["issues"] as IssueData[] | undefined) ?? [];
          this.errorPanel.render(issues);
          this.message(err.message);
        } else {
          throw err;
        }
      }
    });
  }

  private prompt(label: string, initial: string, onSubmit: (value: string) => void): void {
    const labelEl = document.createElement("label");
    labelEl.textContent = label;
    const input = document.createElement("input");
    input.className = "prompt-input";
    input.value = initial;
    labelEl.appendChild(input);
    this.promptBox.replaceChildren(labelEl);
    input.focus();
    input.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") {
        const value = input.value;
        this.promptBox.replaceChildren();
        onSubmit(value);
        ev.preventDefault();
        ev.stopPropagation();
      } else if (ev.key === "Escape") {
        this.promptBox.replaceChildren();
        ev.preventDefault();
        ev.stopPropagation();
      }
    });
  }

  promptSplit(): void {
    const tokenId = this.state.focus.tokenId;
    const token = this.state.sentence.tokens[tokenId - 1];
    this.prompt(`split ${token.form} into (space-separated):`, "", (value) => {
      const parts = value.split(/\s+/).filter((p) => p.length > 0);
      void this.enqueue(async () => {
        try {
          const record = await this.client.split(
            this.treebank, this.sentId, tokenId, parts, this.state.expectedRevision,
          );
          this.state.setRecord(record);
          this.renderAll();
          this.message(`split token ${tokenId} into ${parts.length} parts`);
          await this.refreshGraph();
        } catch (err) {
          if (err instanceof ApiError) this.message(`${err.code}: ${err.message}`);
          else throw err;
        }
      });
    });
  }

  promptJoin(): void {
    const tokenId = this.state.focus.tokenId;
    const mwt = this.state.sentence.mwts.find(
      (m) => m.first_id <= tokenId && tokenId <= m.last_id,
    );
    const initial = mwt
      ? `${mwt.first_id} ${mwt.last_id}`
      : `${tokenId} ${Math.min(tokenId + 1, this.state.sentence.tokens.length)}`;
    this.prompt("join token range:", initial, (value) => {
      const m = value.trim().match(/^([0-9]+)[\s,-]+([0-9]+)$/);
      if (!m) {
        this.message("join needs two token ids");
        return;
      }
      void this.enqueue(async () => {
        try {
          const record = await this.client.join(
            this.treebank, this.sentId,
            parseInt(m[1], 10), parseInt(m[2], 10),
            undefined, this.state.expectedRevision,
          );
          this.state.setRecord(record);
          this.renderAll();
          this.message(`joined ${m[1]}..${m[2]}`);
          await this.refreshGraph();
        } catch (err) {
          if (err instanceof ApiError) this.message(`${err.code}: ${err.message}`);
          else throw err;
        }
      });
    });
  }

  cycleMode(): void {
    const mode = this.state.cycleGraphMode();
    if (this.client.annotatorId) {
      savePreferences(this.client.annotatorId, {
        graphMode: mode,
        visibleColumns: this.state.visibleColumns,
      });
    }
    void this.enqueue(() => this.refreshGraph());
  }

  private toggleColumnMenu(): void {
    if (this.columnMenu) {
      this.columnMenu.remove();
      this.columnMenu = null;
      return;
    }
    const menu = document.createElement("ul");
    menu.className = "column-menu";
    menu.tabIndex = 0;
    const all = ["id", "form", "lemma", "upos", "xpos", "feats", "head", "deprel", "deps", "misc"];
    let selected = 0;
    const draw = () => {
      menu.replaceChildren(
        ...all.map((col, i) => {
          const li = document.createElement("li");
          li.dataset.col = col;
          const on = this.state.visibleColumns.includes(col);
          li.textContent = `${on ? "[x]" : "[ ]"} ${col}`;
          if (i === selected) li.classList.add("selected");
          return li;
        }),
      );
    };
    menu.addEventListener("keydown", (ev) => {
      if (ev.key === "ArrowDown") selected = Math.min(selected + 1, all.length - 1);
      else if (ev.key === "ArrowUp") selected = Math.max(selected - 1, 0);
      else if (ev.key === " ") {
        this.state.toggleColumn(all[selected]);
        this.table.render();
        if (this.client.annotatorId) {
          savePreferences(this.client.annotatorId, {
            graphMode: this.state.graphMode,
            visibleColumns: this.state.visibleColumns,
          });
        }
      } else if (ev.key === "Escape") {
        this.toggleColumnMenu();
        return void ev.preventDefault();
      } else {
        return;
      }
      ev.preventDefault();
      ev.stopPropagation();
      draw();
    });
    draw();
    this.promptBox.appendChild(menu);
    this.columnMenu = menu;
    menu.focus();
  }

  private onKeyDown(ev: KeyboardEvent): void {
    if (!ev.ctrlKey && ev.key === "Escape" && !this.table.isEditing && this.onExit) {
      this.onExit();
      ev.preventDefault();
      return;
    }
    if (!ev.ctrlKey) return;
    const key = ev.key.toLowerCase();
    if (key === "s") {
      void this.save("Draft");
    } else if (key === "c" && ev.shiftKey) {
      void this.save("Complete");
    } else if (key === "d" && ev.shiftKey) {
      void this.save("Draft");
    } else if (key === "b") {
      this.promptSplit();
    } else if (key === "j") {
      this.promptJoin();
    } else if (key === "m") {
      this.cycleMode();
    } else if (key === "e") {
      this.errorPanel.focus();
    } else if (key === "u") {
      this.state.toggleFeatExpansion();
      this.table.render();
    } else if (key === "o") {
      this.toggleColumnMenu();
    } else {
      return;
    }
    ev.preventDefault();
  }
}
