import { agreementColor } from "./colors";
import type { StabilityReportPayload } from "./types";

export type AgreementKind = "ari" | "nmi";

export interface HeatmapCell {
  row: number;
  col: number;
  value: number;
  color: string;
}

export interface HeatmapModel {
  electionIds: number[];
  cells: HeatmapCell[];
  mean: number;
  std: number;
  uniform: boolean;
}

/** Pure view model for the 5x5 agreement matrix; switching between ARI and
 * NMI re-reads the already-fetched report, no network round trip. */
export function buildHeatmapModel(report: StabilityReportPayload, kind: AgreementKind): HeatmapModel {
  const matrix = kind === "ari" ? report.pairwise_ari : report.pairwise_nmi;
  const cells: HeatmapCell[] = [];
  for (let row = 0; row < matrix.length; row++) {
    for (let col = 0; col < matrix[row].length; col++) {
      const value = row === col ? 1.0 : matrix[row][col];
      cells.push({ row, col, value, color: agreementColor(value) });
    }
  }
  return {
    electionIds: report.election_ids,
    cells,
    mean: kind === "ari" ? report.mean_ari : report.mean_nmi,
    std: kind === "ari" ? report.std_ari : report.std_nmi,
    uniform: cells.every((c) => Math.abs(c.value - 1.0) < 1e-9),
  };
}

export function renderHeatmap(el: HTMLElement, model: HeatmapModel): void {
  const n = model.electionIds.length;
  const size = 44;
  const margin = 34;
  const total = margin + n * size;
  const svgCells = model.cells
    .map(
      (c) => `
      <g transform="translate(${margin + c.col * size}, ${margin + c.row * size})">
        <rect width="${size - 2}" height="${size - 2}" fill="${c.color}" rx="3"></rect>
        <text x="${(size - 2) / 2}" y="${(size - 2) / 2 + 4}" text-anchor="middle"
              font-size="11" fill="${c.value > 0.55 ? "#fff" : "#222"}">${c.value.toFixed(2)}</text>
      </g>`,
    )
    .join("");
  const labels = model.electionIds
    .map(
      (id, i) => `
      <text x="${margin + i * size + size / 2 - 1}" y="${margin - 8}" text-anchor="middle" font-size="11">E${id}</text>
      <text x="${margin - 8}" y="${margin + i * size + size / 2 + 3}" text-anchor="end" font-size="11">E${id}</text>`,
    )
    .join("");
  el.innerHTML = `
    <svg width="${total}" height="${total}" role="img" aria-label="pairwise agreement matrix">
      ${labels}${svgCells}
    </svg>
    <div class="heatmap-summary">mean ${model.mean.toFixed(3)} &middot; std ${model.std.toFixed(3)}</div>`;
}
