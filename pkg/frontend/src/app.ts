import { AgreementView } from "./agreement";
import { ApiClient, ApiError } from "./api";
import { EditorView } from "./editor";
import { SearchView } from "./search";
import { loadPreferences } from "./state";
import type { SentenceListItem, TreebankInfo } from "./types";

// App-level navigation (documented in the footer):
//   Alt+1  sentence list   Alt+2  search   Alt+3  agreement
//   Escape (in the editor) back to the sentence list

export class App {
  client: ApiClient;
  treebank: string | null = null;
  editor: EditorView | null = null;
  search: SearchView | null = null;
  agreement: AgreementView | null = null;
  private main!: HTMLElement;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private root: HTMLElement,
    baseUrl = "",
    fetchImpl?: (url: string, init?: RequestInit) => Promise<Response>,
  ) {
    this.client = new ApiClient(baseUrl, fetchImpl);
    this.root.addEventListener("keydown", (ev) => this.onGlobalKey(ev));
  }

  idle(): Promise<void> {
    const chain = async (): Promise<void> => {
      await this.pending;
      await this.editor?.idle();
      await this.search?.idle();
      await this.agreement?.idle();
    };
    return chain();
  }

  private enqueue(work: () => Promise<void>): Promise<void> {
    this.pending = this.pending.then(work, work);
    return this.pending;
  }

  boot(): Promise<void> {
    return this.enqueue(async () => this.renderLogin());
  }

  private onGlobalKey(ev: KeyboardEvent): void {
    if (!ev.altKey || !this.client.token || !this.treebank) return;
    if (ev.key === "1") {
      void this.openSentenceList();
    } else if (ev.key === "2") {
      this.openSearch();
    } else if (ev.key === "3") {
      void this.openAgreement();
    } else {
      return;
    }
    ev.preventDefault();
  }

  private fresh(className: string): HTMLElement {
    this.editor = null;
    this.search = null;
    this.agreement = null;
    const main = document.createElement("div");
    main.className = className;
    this.root.replaceChildren(main);
    this.main = main;
    return main;
  }

  private renderLogin(message = ""): void {
    const main = this.fresh("login-view");
    const form = document.createElement("form");
    const user = document.createElement("input");
    user.className = "login-user";
    user.placeholder = "annotator id";
    const password = document.createElement("input");
    password.className = "login-password";
    password.type = "password";
    password.placeholder = "password";
    const button = document.createElement("button");
    button.type = "submit";
    button.textContent = "log in";
    const note = document.createElement("div");
    note.className = "message";
    note.textContent = message;
    form.append(user, password, button, note);
    const doLogin = () =>
      this.enqueue(async () => {
        try {
          await this.client.login(user.value, password.value);
          await this.chooseTreebank();
        } catch (err) {
          if (err instanceof ApiError) this.renderLogin(err.message);
          else throw err;
        }
      });
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void doLogin();
    });
    for (const input of [user, password]) {
      input.addEventListener("keydown", (ev) => {
        if (ev.key === "Enter") {
          ev.preventDefault();
          void doLogin();
        }
      });
    }
    main.appendChild(form);
    user.focus();
  }

  private async chooseTreebank(): Promise<void> {
    const { items } = await this.client.listTreebanks();
    if (items.length === 1) {
      this.treebank = items[0].id;
      await this.renderSentenceList();
      return;
    }
    this.renderTreebankList(items);
  }

  private renderTreebankList(items: TreebankInfo[]): void {
    const main = this.fresh("treebank-list");
    const list = document.createElement("ul");
    list.tabIndex = 0;
    let selected = 0;
    const draw = () => {
      list.replaceChildren(
        ...items.map((tb, i) => {
          const li = document.createElement("li");
          li.dataset.id = tb.id;
          li.textContent = `${tb.id} (${tb.language || "?"}, ${tb.n_sentences} sentences)`;
          if (i === selected) li.classList.add("selected");
          return li;
        }),
      );
    };
    list.addEventListener("keydown", (ev) => {
      if (ev.key === "ArrowDown") selected = Math.min(selected + 1, items.length - 1);
      else if (ev.key === "ArrowUp") selected = Math.max(selected - 1, 0);
      else if (ev.key === "Enter") {
        this.treebank = items[selected].id;
        void this.enqueue(() => this.renderSentenceList());
        ev.preventDefault();
        return;
      } else return;
      ev.preventDefault();
      draw();
    });
    draw();
    main.appendChild(list);
    list.focus();
  }

  openSentenceList(): Promise<void> {
    return this.enqueue(() => this.renderSentenceList());
  }

  private async renderSentenceList(statusFilter = ""): Promise<void> {
    const page = await this.client.listSentences(this.treebank!, {
      status: statusFilter || undefined,
      page_size: 200,
    });
    const main = this.fresh("sentence-list");

    const filter = document.createElement("select");
    filter.className = "status-filter";
    for (const status of ["", "New", "Draft", "Complete"]) {
      const option = document.createElement("option");
      option.value = status;
      option.textContent = status || "all statuses";
      filter.appendChild(option);
    }
    filter.value = statusFilter;
    filter.addEventListener("change", () => {
      void this.enqueue(() => this.renderSentenceList(filter.value));
    });

    const list = document.createElement("ul");
    list.className = "sentences";
    list.tabIndex = 0;
    let selected = 0;
    const items: SentenceListItem[] = page.items;
    const draw = () => {
      list.replaceChildren(
        ...items.map((item, i) => {
          const li = document.createElement("li");
          li.dataset.sentId = item.sent_id;
          li.dataset.status = item.status;
          li.textContent = `[${item.status}] ${item.sent_id}: ${item.text}`;
          if (i === selected) li.classList.add("selected");
          return li;
        }),
      );
    };
    list.addEventListener("keydown", (ev) => {
      if (ev.key === "ArrowDown") selected = Math.min(selected + 1, items.length - 1);
      else if (ev.key === "ArrowUp") selected = Math.max(selected - 1, 0);
      else if (ev.key === "Enter") {
        if (items[selected]) void this.openSentence(items[selected].sent_id);
        ev.preventDefault();
        return;
      } else return;
      ev.preventDefault();
      draw();
    });
    list.addEventListener("click", (ev) => {
      const li = (ev.target as HTMLElement).closest?.("li[data-sent-id]");
      if (li instanceof HTMLElement) void this.openSentence(li.dataset.sentId!);
    });
    draw();
    main.append(filter, list);
    list.focus();
  }

  openSentence(sentId: string, tokenId?: number | null): Promise<void> {
    const main = this.fresh("editor-host");
    const editor = new EditorView(main, this.client, this.treebank!, sentId, () => {
      void this.openSentenceList();
    });
    this.editor = editor;
    const prefs = this.client.annotatorId
      ? loadPreferences(this.client.annotatorId)
      : null;
    const opened = editor.open(tokenId ?? undefined).then(() => {
      if (prefs && this.editor === editor) {
        editor.state.graphMode = prefs.graphMode;
        editor.state.visibleColumns = prefs.visibleColumns;
        editor.state.clampFocus();
      }
    });
    return opened;
  }

  openSearch(): void {
    const main = this.fresh("search-host");
    this.search = new SearchView(main, this.client, this.treebank!, (sentId, tokenId) => {
      void this.openSentence(sentId, tokenId);
    });
  }

  openAgreement(): Promise<void> {
    const main = this.fresh("agreement-host");
    this.agreement = new AgreementView(main, this.client, this.treebank!);
    return this.agreement.open();
  }
}
