import { ApiClient } from "./api";
import type { AgreementReportData, MatrixPair } from "./types";

function heat(value: number): string {
  // 0 -> pale red, 1 -> saturated green
  const hue = Math.round(value * 120);
  return `hsl(${hue}, 70%, 75%)`;
}

/** Pairwise agreement matrix as a heat-map table, with the per-field report
 * of the selected pair underneath. */
export class AgreementView {
  private pairs: MatrixPair[] = [];
  private annotators: string[] = [];
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
    private treebank: string,
  ) {}

  idle(): Promise<void> {
    return this.pending;
  }

  open(): Promise<void> {
    this.pending = this.pending.then(async () => {
      const { pairs } = await this.client.agreementMatrix(this.treebank);
      this.pairs = pairs;
      const names = new Set<string>();
      for (const p of pairs) {
        names.add(p.a);
        names.add(p.b);
      }
      this.annotators = [...names].sort();
      this.render();
    });
    return this.pending;
  }

  private reportFor(a: string, b: string): AgreementReportData | null {
    for (const p of this.pairs) {
      if ((p.a === a && p.b === b) || (p.a === b && p.b === a)) return p.report;
    }
    return null;
  }

  private render(): void {
    this.root.replaceChildren();
    this.root.className = "agreement-view";
    const caption = document.createElement("div");
    caption.className = "caption";
    caption.textContent = `inter-annotator agreement (LAS) for ${this.treebank}`;

    const table = document.createElement("table");
    table.className = "agreement-matrix";
    const head = document.createElement("tr");
    head.appendChild(document.createElement("th"));
    for (const name of this.annotators) {
      const th = document.createElement("th");
      th.textContent = name;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const a of this.annotators) {
      const row = document.createElement("tr");
      const th = document.createElement("th");
      th.textContent = a;
      row.appendChild(th);
      for (const b of this.annotators) {
        const td = document.createElement("td");
        if (a === b) {
          td.textContent = "—";
        } else {
          const report = this.reportFor(a, b);
          if (report) {
            td.textContent = report.las.toFixed(2);
            td.dataset.pair = `${a}|${b}`;
            td.dataset.las = String(report.las);
            td.style.backgroundColor = heat(report.las);
            td.tabIndex = 0;
            td.addEventListener("keydown", (ev) => {
              if (ev.key === "Enter") {
                this.renderDetail(report);
                ev.preventDefault();
              }
            });
            td.addEventListener("click", () => this.renderDetail(report));
          } else {
            td.textContent = "·";
          }
        }
        row.appendChild(td);
      }
      table.appendChild(row);
    }

    const detail = document.createElement("div");
    detail.className = "pair-detail";
    this.root.append(caption, table, detail);
    if (this.pairs.length > 0) this.renderDetail(this.pairs[0].report);
  }

  private renderDetail(report: AgreementReportData): void {
    const box = this.root.querySelector(".pair-detail");
    if (!box) return;
    const table = document.createElement("table");
    table.className = "pair-report";
    const add = (label: string, value: string) => {
      const tr = document.createElement("tr");
      const th = document.createElement("th");
      th.textContent = label;
      const td = document.createElement("td");
      td.textContent = value;
      tr.append(th, td);
      table.appendChild(tr);
    };
    add("pair", `${report.annotator_a} vs ${report.annotator_b}`);
    add("sentences compared", String(report.n_sentences_compared));
    add("skipped (tokenization)", String(report.n_sentences_skipped_tokenization));
    add("tokens", String(report.n_tokens));
    for (const [field, fa] of Object.entries(report.per_field)) {
      const kappa = fa.kappa === null ? "undef" : fa.kappa.toFixed(4);
      add(field, `raw ${fa.raw_agreement.toFixed(4)}, kappa ${kappa}`);
    }
    add("UAS", report.uas.toFixed(4));
    add("LAS", report.las.toFixed(4));
    box.replaceChildren(table);
  }
}
