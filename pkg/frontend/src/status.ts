// Status workflow controls. The dropdown enforces the store's state machine
// client-side: New is where sentences start, never a target; Draft and
// Complete are always offered (Complete -> Draft reversion is legal).

const TARGETS = ["Draft", "Complete"] as const;
export type StatusTarget = (typeof TARGETS)[number];

export class StatusControls {
  private select: HTMLSelectElement;
  private badge: HTMLSpanElement;

  constructor(
    private container: HTMLElement,
    private onChange: (status: StatusTarget) => void,
  ) {
    this.badge = document.createElement("span");
    this.badge.className = "status-badge";
    this.select = document.createElement("select");
    this.select.className = "status-select";
    this.select.setAttribute("aria-label", "sentence status");
    for (const target of TARGETS) {
      const option = document.createElement("option");
      option.value = target;
      option.textContent = `set ${target}`;
      this.select.appendChild(option);
    }
    this.select.addEventListener("change", () => {
      this.onChange(this.select.value as StatusTarget);
    });
    const label = document.createElement("span");
    label.className = "status-label";
    label.textContent = "status:";
    this.container.replaceChildren(label, this.badge, this.select);
  }

  render(status: string): void {
    this.badge.textContent = status;
    this.badge.dataset.status = status;
    // the select shows the next sensible target, never "New"
    this.select.value = status === "Complete" ? "Draft" : "Complete";
  }
}
