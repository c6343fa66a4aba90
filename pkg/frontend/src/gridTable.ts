import { formatMetric } from "./deltas";
import type { ConfigInfo } from "./types";

export interface GridTableCallbacks {
  onPick?: (config: ConfigInfo) => void;
}

const COLUMNS: { key: keyof ConfigInfo; label: string }[] = [
  { key: "representation", label: "Repr" },
  { key: "metric", label: "Metric" },
  { key: "algorithm", label: "Algorithm" },
  { key: "K", label: "K" },
  { key: "silhouette", label: "Silhouette" },
  { key: "pop_cv", label: "Pop CV" },
  { key: "disconnected", label: "Disc." },
  { key: "cost_total", label: "Cost" },
];

/** Sortable table of precomputed grid results; clicking a row loads that
 * partition onto the map. */
export function renderGridTable(
  el: HTMLElement,
  configs: ConfigInfo[],
  sortKey: keyof ConfigInfo | null,
  callbacks: GridTableCallbacks = {},
): void {
  const rows = [...configs];
  if (sortKey) {
    rows.sort((a, b) => {
      const av = a[sortKey];
      const bv = b[sortKey];
      if (typeof av === "number" && typeof bv === "number") return bv - av;
      return String(av).localeCompare(String(bv));
    });
  }
  if (!rows.length) {
    el.innerHTML =
      '<p class="empty-note">No precomputed results. Run the grid command against this data directory.</p>';
    return;
  }
  const head = COLUMNS.map(
    (c) => `<th data-sort="${String(c.key)}" class="sortable">${c.label}</th>`,
  ).join("");
  const body = rows
    .map((row, i) => {
      const cells = COLUMNS.map((c) => {
        const value = row[c.key];
        if (typeof value === "number" && c.key !== "K" && c.key !== "disconnected") {
          return `<td>${formatMetric(value)}</td>`;
        }
        return `<td>${value ?? "n/a"}</td>`;
      }).join("");
      return `<tr data-row="${i}" class="grid-row">${cells}</tr>`;
    })
    .join("");
  el.innerHTML = `<table class="grid-table"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
  el.querySelectorAll<HTMLTableRowElement>("tr.grid-row").forEach((tr) => {
    tr.addEventListener("click", () => {
      const picked = rows[Number(tr.dataset.row)];
      callbacks.onPick?.(picked);
    });
  });
}

export function sortKeyFromClick(target: EventTarget | null): keyof ConfigInfo | null {
  if (target instanceof HTMLElement && target.dataset.sort) {
    return target.dataset.sort as keyof ConfigInfo;
  }
  return null;
}
