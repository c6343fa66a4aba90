import { isValidCombo, K_VALUES } from "./validity";

export type PanelName = "map" | "grid" | "stability";

export interface ViewState {
  representation: string;
  metric: string;
  algorithm: string;
  k: number;
  alpha: number;
  beta: number;
  gamma: number;
  seed: number;
  panel: PanelName;
}

export const DEFAULT_STATE: ViewState = {
  representation: "BlocShares",
  metric: "Euclidean",
  algorithm: "Louvain",
  k: 5,
  alpha: 0.4,
  beta: 0.4,
  gamma: 0.2,
  seed: 0,
  panel: "map",
};

const PANELS: PanelName[] = ["map", "grid", "stability"];

/** Serialize the selector state into a shareable URL query string. */
export function stateToQuery(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("repr", state.representation);
  params.set("metric", state.metric);
  params.set("algo", state.algorithm);
  params.set("k", String(state.k));
  params.set("alpha", String(state.alpha));
  params.set("beta", String(state.beta));
  params.set("gamma", String(state.gamma));
  params.set("seed", String(state.seed));
  params.set("panel", state.panel);
  return params.toString();
}

function number(params: URLSearchParams, key: string, fallback: number, min = 0): number {
  const raw = params.get(key);
  if (raw === null) return fallback;
  const value = Number(raw);
  return Number.isFinite(value) && value >= min ? value : fallback;
}

/** Parse a query string back into a ViewState, falling back to defaults for
 * missing or invalid fields (including invalid metric combinations). */
export function stateFromQuery(query: string): ViewState {
  const params = new URLSearchParams(query);
  const state: ViewState = { ...DEFAULT_STATE };
  const repr = params.get("repr");
  if (repr) state.representation = repr;
  const metric = params.get("metric");
  if (metric && isValidCombo(state.representation, metric)) state.metric = metric;
  const algo = params.get("algo");
  if (algo) state.algorithm = algo;
  const k = Math.round(number(params, "k", DEFAULT_STATE.k, 1));
  state.k = K_VALUES.includes(k as (typeof K_VALUES)[number]) ? k : DEFAULT_STATE.k;
  state.alpha = number(params, "alpha", DEFAULT_STATE.alpha);
  state.beta = number(params, "beta", DEFAULT_STATE.beta);
  state.gamma = number(params, "gamma", DEFAULT_STATE.gamma);
  state.seed = Math.round(number(params, "seed", DEFAULT_STATE.seed));
  const panel = params.get("panel") as PanelName | null;
  if (panel && PANELS.includes(panel)) state.panel = panel;
  return state;
}
