import type { IssueData } from "./types";

// Which grid column an issue code points at, for focus-on-select.
const ISSUE_COLUMN: Record<string, string> = {
  HEAD_OUT_OF_RANGE: "head",
  SELF_HEAD: "head",
  ROOT_LABEL: "deprel",
  UPOS_UNKNOWN: "upos",
  DEPREL_UNKNOWN: "deprel",
  DEPREL_SUBTYPE: "deprel",
  FEATS_ORDER: "feats",
  FEATS_FORMAT: "feats",
  UNSET_FIELD: "upos",
};

export function issueColumn(issue: IssueData): string {
  if (issue.code === "UNSET_FIELD") {
    for (const field of ["upos", "head", "deprel"]) {
      if (issue.message.includes(field)) return field;
    }
  }
  return ISSUE_COLUMN[issue.code] ?? "form";
}

/** Validation issue list with severity badges; selecting an entry (Enter or
 * click) focuses the offending cell. */
export class ErrorPanel {
  private issues: IssueData[] = [];
  private selected = 0;

  constructor(
    private container: HTMLElement,
    private onSelect: (issue: IssueData) => void,
  ) {
    this.container.addEventListener("keydown", (ev) => this.onKeyDown(ev));
    this.container.addEventListener("click", (ev) => this.onClick(ev));
  }

  render(issues: IssueData[]): void {
    this.issues = issues;
    this.selected = Math.min(this.selected, Math.max(issues.length - 1, 0));
    const list = document.createElement("ul");
    list.className = "issues";
    list.tabIndex = 0;
    issues.forEach((issue, i) => {
      const li = document.createElement("li");
      li.dataset.code = issue.code;
      li.dataset.index = String(i);
      if (issue.token_id !== null) li.dataset.tokenId = String(issue.token_id);
      if (i === this.selected) li.classList.add("selected");
      const badge = document.createElement("span");
      badge.className = `badge ${issue.severity}`;
      badge.textContent = issue.severity;
      const text = document.createElement("span");
      text.textContent =
        (issue.token_id !== null ? `#${issue.token_id} ` : "") +
        `${issue.code}: ${issue.message}`;
      li.append(badge, text);
      list.appendChild(li);
    });
    if (issues.length === 0) {
      const li = document.createElement("li");
      li.className = "no-issues";
      li.textContent = "no issues";
      list.appendChild(li);
    }
    this.container.replaceChildren(list);
  }

  focus(): void {
    (this.container.querySelector("ul.issues") as HTMLElement | null)?.focus();
  }

  private onKeyDown(ev: KeyboardEvent): void {
    if (this.issues.length === 0) return;
    if (ev.key === "ArrowDown") {
      this.selected = Math.min(this.selected + 1, this.issues.length - 1);
      this.updateSelection();
      ev.preventDefault();
    } else if (ev.key === "ArrowUp") {
      this.selected = Math.max(this.selected - 1, 0);
      this.updateSelection();
      ev.preventDefault();
    } else if (ev.key === "Enter") {
      this.onSelect(this.issues[this.selected]);
      ev.preventDefault();
      ev.stopPropagation();
    }
  }

  private onClick(ev: MouseEvent): void {
    const li = (ev.target as HTMLElement).closest?.("li[data-index]");
    if (li instanceof HTMLElement) {
      this.selected = parseInt(li.dataset.index!, 10);
      this.updateSelection();
      this.onSelect(this.issues[this.selected]);
    }
  }

  private updateSelection(): void {
    this.container.querySelectorAll("li[data-index]").forEach((li, i) => {
      li.classList.toggle("selected", i === this.selected);
    });
  }
}
