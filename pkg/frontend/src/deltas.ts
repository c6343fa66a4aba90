import type { Report } from "./types";

export interface ReportDeltas {
  silhouette: number | null;
  pop_cv: number;
  cost_total: number;
  compactness: number;
}

/** Differences (current minus previous) for the metrics the analyst steers
 * by. Silhouette delta is null when either report left it undefined. */
export function reportDeltas(current: Report, previous: Report | null): ReportDeltas | null {
  if (!previous) return null;
  return {
    silhouette:
      current.silhouette === null || previous.silhouette === null
        ? null
        : current.silhouette - previous.silhouette,
    pop_cv: current.pop_cv - previous.pop_cv,
    cost_total: current.cost.total - previous.cost.total,
    compactness: current.cost.compactness - previous.cost.compactness,
  };
}

export function formatDelta(value: number | null, digits = 3): string {
  if (value === null) return "n/a";
  const sign = value > 0 ? "+" : "";
  return `${sign}${value.toFixed(digits)}`;
}

export function formatMetric(value: number | null | undefined, digits = 3): string {
  if (value === null || value === undefined) return "n/a";
  return value.toFixed(digits);
}
