import { ApiClient, ApiError } from "./api";
import type { SearchHit } from "./types";

const BUILDER_FIELDS = [
  "form", "lemma", "upos", "xpos", "deprel", "head_deprel", "text", "feats.",
];

/** Search page: free-form query in the mini-language plus a small builder
 * form; result rows deep-link into the editor. */
export class SearchView {
  private queryInput!: HTMLInputElement;
  private resultList!: HTMLUListElement;
  private messageBox!: HTMLElement;
  private hits: SearchHit[] = [];
  private selected = 0;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
    private treebank: string,
    private onOpen: (sentId: string, tokenId: number | null) => void,
  ) {
    this.build();
  }

  idle(): Promise<void> {
    return this.pending;
  }

  private build(): void {
    this.root.replaceChildren();
    this.root.className = "search-view";

    const queryLabel = document.createElement("label");
    queryLabel.textContent = "query";
    this.queryInput = document.createElement("input");
    this.queryInput.className = "search-query";
    queryLabel.appendChild(this.queryInput);
    this.queryInput.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") {
        void this.run();
        ev.preventDefault();
      } else if (ev.key === "ArrowDown" && this.hits.length > 0) {
        this.resultList.focus();
        ev.preventDefault();
      }
    });

    // builder: field + matcher + value appends one term to the query
    const builder = document.createElement("form");
    builder.className = "builder";
    const field = document.createElement("select");
    field.className = "builder-field";
    for (const f of BUILDER_FIELDS) {
      const option = document.createElement("option");
      option.value = f;
      option.textContent = f;
      field.appendChild(option);
    }
    const attr = document.createElement("input");
    attr.className = "builder-attr";
    attr.placeholder = "attribute";
    const matcher = document.createElement("select");
    matcher.className = "builder-matcher";
    for (const m of ["=", "~"]) {
      const option = document.createElement("option");
      option.value = m;
      option.textContent = m === "=" ? "= exact" : "~ regex";
      matcher.appendChild(option);
    }
    const value = document.createElement("input");
    value.className = "builder-value";
    value.placeholder = "value";
    const add = document.createElement("button");
    add.type = "submit";
    add.textContent = "add term";
    builder.append(field, attr, matcher, value, add);
    builder.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const name = field.value === "feats." ? `feats.${attr.value}` : field.value;
      const term =
        matcher.value === "="
          ? `${name}=${/\s/.test(value.value) ? `"${value.value}"` : value.value}`
          : `${name}~/${value.value}/`;
      this.queryInput.value = (this.queryInput.value + " " + term).trim();
      value.value = "";
      this.queryInput.focus();
    });

    this.messageBox = document.createElement("div");
    this.messageBox.className = "message";
    this.resultList = document.createElement("ul");
    this.resultList.className = "search-results";
    this.resultList.tabIndex = 0;
    this.resultList.addEventListener("keydown", (ev) => this.onListKey(ev));
    this.resultList.addEventListener("click", (ev) => {
      const li = (ev.target as HTMLElement).closest?.("li[data-index]");
      if (li instanceof HTMLElement) {
        this.openHit(parseInt(li.dataset.index!, 10));
      }
    });

    this.root.append(queryLabel, builder, this.messageBox, this.resultList);
    this.queryInput.focus();
  }

  run(): Promise<void> {
    const q = this.queryInput.value;
    this.pending = this.pending.then(async () => {
      try {
        const page = await this.client.search(this.treebank, q);
        this.hits = page.items;
        this.selected = 0;
        this.messageBox.textContent = `${page.total} match(es)`;
        this.renderResults();
      } catch (err) {
        if (err instanceof ApiError) {
          this.hits = [];
          this.renderResults();
          this.messageBox.textContent = `${err.code}: ${err.message}`;
        } else {
          throw err;
        }
      }
    });
    return this.pending;
  }

  private renderResults(): void {
    this.resultList.replaceChildren(
      ...this.hits.map((hit, i) => {
        const li = document.createElement("li");
        li.dataset.index = String(i);
        li.dataset.sentId = hit.sent_id;
        if (i === this.selected) li.classList.add("selected");
        const where = hit.token_id === null ? "" : ` #${hit.token_id}`;
        li.textContent = `${hit.sent_id}${where}: ${hit.snippet}`;
        return li;
      }),
    );
  }

  private onListKey(ev: KeyboardEvent): void {
    if (this.hits.length === 0) return;
    if (ev.key === "ArrowDown") {
      this.selected = Math.min(this.selected + 1, this.hits.length - 1);
      this.renderResults();
      ev.preventDefault();
    } else if (ev.key === "ArrowUp") {
      this.selected = Math.max(this.selected - 1, 0);
      this.renderResults();
      ev.preventDefault();
    } else if (ev.key === "Enter") {
      this.openHit(this.selected);
      ev.preventDefault();
    }
  }

  private openHit(index: number): void {
    const hit = this.hits[index];
    if (hit) this.onOpen(hit.sent_id, hit.token_id);
  }
}
