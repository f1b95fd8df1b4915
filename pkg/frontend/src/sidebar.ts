// Collapsible SDG target reference panel. Loaded once, filtered locally;
// fully independent of the session state.

import { SdgTargetsDoc } from "./api.js";

export interface SidebarRow {
  goal: number;
  goalLabel: string;
  code: string;
  description: string;
  indicators: string[];
}

export function flattenTargets(doc: SdgTargetsDoc): SidebarRow[] {
  const rows: SidebarRow[] = [];
  for (const goal of doc.goals) {
    for (const target of goal.targets) {
      rows.push({
        goal: goal.goal,
        goalLabel: `SDG ${goal.goal}: ${goal.short_name}`,
        code: target.code,
        description: target.description,
        indicators: target.indicators,
      });
    }
  }
  return rows;
}

export function filterTargets(rows: SidebarRow[], query: string): SidebarRow[] {
  const needle = query.trim().toLowerCase();
  if (!needle) return rows;
  return rows.filter(
    (row) =>
      row.description.toLowerCase().includes(needle) ||
      row.code.toLowerCase().includes(needle) ||
      row.goalLabel.toLowerCase().includes(needle),
  );
}

export class Sidebar {
  private rows: SidebarRow[] = [];
  open = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly list: HTMLElement,
    private readonly search: HTMLInputElement,
    private readonly toggle: HTMLButtonElement,
  ) {
    this.toggle.addEventListener("click", () => this.setOpen(!this.open));
    this.search.addEventListener("input", () => this.render());
  }

  load(doc: SdgTargetsDoc): void {
    this.rows = flattenTargets(doc);
    this.render();
  }

  setOpen(open: boolean): void {
    this.open = open;
    this.root.classList.toggle("open", open);
    this.toggle.textContent = open ? "Hide SDG targets" : "Show SDG targets";
  }

  render(): void {
    const rows = filterTargets(this.rows, this.search.value);
    this.list.textContent = "";
    let currentGoal = -1;
    for (const row of rows) {
      if (row.goal !== currentGoal) {
        currentGoal = row.goal;
        const heading = document.createElement("h3");
        heading.textContent = row.goalLabel;
        this.list.appendChild(heading);
      }
      const item = document.createElement("div");
      item.className = "target";
      const code = document.createElement("strong");
      code.textContent = row.code;
      const text = document.createElement("span");
      text.textContent = ` ${row.description} `;
      const indicators = document.createElement("em");
      indicators.textContent = `(indicators: ${row.indicators.join(", ")})`;
      item.append(code, text, indicators);
      this.list.appendChild(item);
    }
    const count = document.createElement("p");
    count.id = "sidebar-count";
    count.textContent = `${rows.length} targets`;
    this.list.appendChild(count);
  }
}
