import type { ViewState } from "./state";
import {
  ALGORITHMS,
  K_VALUES,
  METRICS,
  REPRESENTATIONS,
  disabledMetrics,
  isValidCombo,
} from "./validity";

export interface ControlsCallbacks {
  onChange: (state: ViewState) => void;
  onSubmit: () => void;
}

function option(value: string | number, selected: boolean, disabled = false): string {
  return `<option value="${value}" ${selected ? "selected" : ""} ${disabled ? "disabled" : ""}>${value}</option>`;
}

/** Selector panel: representation, metric (invalid combos disabled), k,
 * algorithm, cost-weight sliders, seed, and the submit button. */
export class Controls {
  private el: HTMLElement;
  private state: ViewState;
  private callbacks: ControlsCallbacks;
  private busy = false;

  constructor(el: HTMLElement, initial: ViewState, callbacks: ControlsCallbacks) {
    this.el = el;
    this.state = { ...initial };
    this.callbacks = callbacks;
    this.render();
  }

  current(): ViewState {
    return { ...this.state };
  }

  setBusy(busy: boolean): void {
    this.busy = busy;
    const button = this.el.querySelector<HTMLButtonElement>("#whatif-submit");
    if (button) {
      button.disabled = busy;
      button.textContent = busy ? "computing..." : "Run what-if";
    }
  }

  private slider(id: string, label: string, value: number): string {
    return `
      <label class="slider-row">
        <span>${label}</span>
        <input type="range" id="${id}" min="0" max="1" step="0.05" value="${value}">
        <output for="${id}">${value.toFixed(2)}</output>
      </label>`;
  }

  private render(): void {
    const s = this.state;
    const disabled = new Set(disabledMetrics(s.representation));
    this.el.innerHTML = `
      <label>Representation
        <select id="sel-repr">${REPRESENTATIONS.map((r) => option(r, r === s.representation)).join("")}</select>
      </label>
      <label>Metric
        <select id="sel-metric">${METRICS.map((m) =>
          option(m, m === s.metric, disabled.has(m)),
        ).join("")}</select>
      </label>
      <label>Algorithm
        <select id="sel-algo">${ALGORITHMS.map((a) => option(a, a === s.algorithm)).join("")}</select>
      </label>
      <label>Cantons (K)
        <select id="sel-k">${K_VALUES.map((k) => option(k, k === s.k)).join("")}</select>
      </label>
      <fieldset class="weights">
        <legend>Cost weights</legend>
        ${this.slider("w-alpha", "homogeneity α", s.alpha)}
        ${this.slider("w-beta", "balance β", s.beta)}
        ${this.slider("w-gamma", "compactness γ", s.gamma)}
      </fieldset>
      <label>Seed <input type="number" id="inp-seed" value="${s.seed}" min="0" step="1"></label>
      <button id="whatif-submit" ${this.busy ? "disabled" : ""}>Run what-if</button>`;
    this.bind();
  }

  private bind(): void {
    const sel = <T extends HTMLElement>(id: string) => this.el.querySelector<T>(`#${id}`)!;
    sel<HTMLSelectElement>("sel-repr").addEventListener("change", (e) => {
      this.state.representation = (e.target as HTMLSelectElement).value;
      if (!isValidCombo(this.state.representation, this.state.metric)) {
        this.state.metric = METRICS.find((m) => isValidCombo(this.state.representation, m))!;
      }
      this.render();
      this.callbacks.onChange(this.current());
    });
    sel<HTMLSelectElement>("sel-metric").addEventListener("change", (e) => {
      this.state.metric = (e.target as HTMLSelectElement).value;
      this.callbacks.onChange(this.current());
    });
    sel<HTMLSelectElement>("sel-algo").addEventListener("change", (e) => {
      this.state.algorithm = (e.target as HTMLSelectElement).value;
      this.callbacks.onChange(this.current());
    });
    sel<HTMLSelectElement>("sel-k").addEventListener("change", (e) => {
      this.state.k = Number((e.target as HTMLSelectElement).value);
      this.callbacks.onChange(this.current());
    });
    for (const [id, key] of [
      ["w-alpha", "alpha"],
      ["w-beta", "beta"],
      ["w-gamma", "gamma"],
    ] as const) {
      const input = sel<HTMLInputElement>(id);
      input.addEventListener("input", () => {
        this.state[key] = Number(input.value);
        const output = input.parentElement?.querySelector("output");
        if (output) output.textContent = Number(input.value).toFixed(2);
        this.callbacks.onChange(this.current());
      });
    }
    sel<HTMLInputElement>("inp-seed").addEventListener("change", (e) => {
      this.state.seed = Math.max(0, Math.round(Number((e.target as HTMLInputElement).value) || 0));
      this.callbacks.onChange(this.current());
    });
    sel<HTMLButtonElement>("whatif-submit").addEventListener("click", () => {
      if (!this.busy) this.callbacks.onSubmit();
    });
  }
}
