import { ApiClient, ApiError } from "./api";
import { Controls } from "./controls";
import { formatDelta, formatMetric, reportDeltas } from "./deltas";
import { renderGridTable, sortKeyFromClick } from "./gridTable";
import { buildHeatmapModel, renderHeatmap, type AgreementKind } from "./heatmap";
import { renderMap } from "./map";
import { partitionPayloadError } from "./payload";
import { renderProfiles } from "./profiles";
import { DEFAULT_STATE, stateFromQuery, stateToQuery, type PanelName, type ViewState } from "./state";
import type { ConfigInfo, Feature, PartitionPayload, Report, StabilityPayload } from "./types";

const api = new ApiClient();

const els = {
  controls: document.getElementById("controls")!,
  map: document.getElementById("map")!,
  report: document.getElementById("report")!,
  profiles: document.getElementById("profiles")!,
  grid: document.getElementById("grid-table")!,
  heatmap: document.getElementById("heatmap")!,
  heatmapConfigs: document.getElementById("heatmap-configs")!,
  banner: document.getElementById("banner")!,
  tabs: Array.from(document.querySelectorAll<HTMLButtonElement>(".tab")),
  panels: {
    map: document.getElementById("panel-map")!,
    grid: document.getElementById("panel-grid")!,
    stability: document.getElementById("panel-stability")!,
  } as Record<PanelName, HTMLElement>,
};

let state: ViewState = stateFromQuery(location.search);
let lastReport: Report | null = null;
let pinned: Feature | null = null;
let currentPartition: PartitionPayload | null = null;
let stability: StabilityPayload | null = null;
let agreementKind: AgreementKind = "ari";
let stabilityIndex = 0;
let gridConfigs: ConfigInfo[] = [];
let gridSort: keyof ConfigInfo | null = null;

function showBanner(message: string, retriable = false): void {
  els.banner.textContent = retriable ? `${message} (retry in a moment)` : message;
  els.banner.style.display = "block";
}

function clearBanner(): void {
  els.banner.style.display = "none";
}

function syncUrl(): void {
  history.replaceState(null, "", `?${stateToQuery(state)}`);
}

function setPanel(panel: PanelName): void {
  state.panel = panel;
  for (const tab of els.tabs) {
    tab.classList.toggle("active", tab.dataset.panel === panel);
  }
  for (const [name, el] of Object.entries(els.panels)) {
    el.style.display = name === panel ? "" : "none";
  }
  syncUrl();
}

function renderReport(payload: PartitionPayload): void {
  const report = payload.report;
  const deltas = reportDeltas(report, lastReport);
  const deltaRow = deltas
    ? `<tr class="delta-row"><td>vs previous</td>
        <td>${formatDelta(deltas.silhouette)}</td>
        <td>${formatDelta(deltas.pop_cv)}</td>
        <td></td>
        <td>${formatDelta(deltas.compactness)}</td>
        <td>${formatDelta(deltas.cost_total)}</td></tr>`
    : "";
  els.report.innerHTML = `
    <table class="report-table">
      <thead><tr><th></th><th>Silhouette</th><th>Pop CV</th><th>Disc.</th><th>Compactness</th><th>Cost</th></tr></thead>
      <tbody>
        <tr><td>${payload.config.representation}/${payload.config.metric}/${payload.config.algorithm} K=${payload.achieved_K}</td>
          <td>${formatMetric(report.silhouette)}</td>
          <td>${formatMetric(report.pop_cv)}</td>
          <td>${report.disconnected}</td>
          <td>${formatMetric(report.cost.compactness)}</td>
          <td>${formatMetric(report.cost.total)}</td></tr>
        ${deltaRow}
      </tbody>
    </table>`;
  lastReport = report;
}

function showPartition(payload: PartitionPayload): void {
  const problem = partitionPayloadError(payload);
  if (problem) {
    showBanner(problem); // previous map stays up
    return;
  }
  currentPartition = payload;
  renderMap(els.map, payload.geojson, payload.achieved_K, {
    onSelect: (feature) => {
      pinned = feature;
      renderProfiles(els.profiles, payload.profiles, pinned);
    },
  });
  renderReport(payload);
  renderProfiles(els.profiles, payload.profiles, pinned);
}

async function submitWhatIf(controls: Controls): Promise<void> {
  clearBanner();
  controls.setBusy(true);
  try {
    const payload = await api.whatIf({
      representation: state.representation,
      metric: state.metric,
      algorithm: state.algorithm,
      k: state.k,
      alpha: state.alpha,
      beta: state.beta,
      gamma: state.gamma,
      seed: state.seed,
    });
    if (payload) showPartition(payload);
  } catch (error) {
    if (error instanceof ApiError) {
      showBanner(`what-if rejected: ${error.message}`, error.retriable);
    } else {
      showBanner(`what-if failed: ${error}`);
    }
  } finally {
    controls.setBusy(false);
  }
}

async function loadPrecomputed(config: ConfigInfo): Promise<void> {
  clearBanner();
  try {
    const payload = await api.partition(
      config.representation,
      config.metric,
      config.algorithm,
      config.K,
    );
    setPanel("map");
    showPartition(payload);
  } catch (error) {
    showBanner(`could not load partition: ${error instanceof ApiError ? error.message : error}`);
  }
}

function renderStability(): void {
  if (!stability) return;
  const rows = stability.reports;
  els.heatmapConfigs.innerHTML = rows
    .map(
      (row, i) => `
      <button class="stability-pick ${i === stabilityIndex ? "active" : ""}" data-index="${i}">
        ${row.config.representation}/${row.config.metric}/${row.config.algorithm}
      </button>`,
    )
    .join("");
  els.heatmapConfigs.querySelectorAll<HTMLButtonElement>(".stability-pick").forEach((btn) => {
    btn.addEventListener("click", () => {
      stabilityIndex = Number(btn.dataset.index);
      renderStability();
    });
  });
  const toggle = document.getElementById("agreement-toggle") as HTMLButtonElement;
  toggle.textContent = agreementKind === "ari" ? "showing ARI (switch to NMI)" : "showing NMI (switch to ARI)";
  renderHeatmap(els.heatmap as HTMLElement, buildHeatmapModel(rows[stabilityIndex].report, agreementKind));
}

async function boot(): Promise<void> {
  const controls = new Controls(els.controls, state, {
    onChange: (next) => {
      state = { ...state, ...next };
      syncUrl();
    },
    onSubmit: () => void submitWhatIf(controls),
  });

  for (const tab of els.tabs) {
    tab.addEventListener("click", () => setPanel(tab.dataset.panel as PanelName));
  }
  setPanel(state.panel);

  document.getElementById("agreement-toggle")!.addEventListener("click", () => {
    agreementKind = agreementKind === "ari" ? "nmi" : "ari";
    renderStability();
  });

  els.grid.addEventListener("click", (event) => {
    const key = sortKeyFromClick(event.target);
    if (key) {
      gridSort = key;
      renderGridTable(els.grid, gridConfigs, gridSort, { onPick: (c) => void loadPrecomputed(c) });
    }
  });

  try {
    const geo = await api.geo();
    renderMap(els.map, geo, currentPartition?.achieved_K ?? null, {
      onSelect: (feature) => {
        pinned = feature;
        if (currentPartition) renderProfiles(els.profiles, currentPartition.profiles, pinned);
      },
    });
  } catch (error) {
    showBanner(`failed to load base map: ${error instanceof ApiError ? error.message : error}`);
  }

  try {
    const listing = await api.configs();
    gridConfigs = listing.configs;
    renderGridTable(els.grid, gridConfigs, gridSort, { onPick: (c) => void loadPrecomputed(c) });
  } catch (error) {
    showBanner(`failed to list results: ${error instanceof ApiError ? error.message : error}`);
  }

  try {
    stability = await api.stability();
    renderStability();
  } catch {
    els.heatmap.innerHTML =
      '<p class="empty-note">No stability report available; run the stability command first.</p>';
  }

  window.addEventListener("popstate", () => {
    state = stateFromQuery(location.search);
    setPanel(state.panel);
  });
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", () => void boot());
} else {
  void boot();
}

export { DEFAULT_STATE };
