import { describe, expect, it } from "vitest";

import {
  ALGORITHMS,
  disabledCombos,
  disabledMetrics,
  isValidCombo,
  K_VALUES,
  METRICS,
  REPRESENTATIONS,
  selectableCombos,
} from "../src/validity";

describe("combination rules", () => {
  it("only PCA_5 with JensenShannon is invalid", () => {
    for (const r of REPRESENTATIONS) {
      for (const m of METRICS) {
        const expected = !(r === "PCA_5" && m === "JensenShannon");
        expect(isValidCombo(r, m)).toBe(expected);
      }
    }
  });

  it("selector disables JensenShannon for PCA_5 only", () => {
    expect(disabledMetrics("PCA_5")).toEqual(["JensenShannon"]);
    expect(disabledMetrics("BlocShares")).toEqual([]);
    expect(disabledMetrics("NMF_5")).toEqual([]);
  });

  it("selectable combos cover the grid cross-section", () => {
    expect(selectableCombos()).toHaveLength(44);
    expect(disabledCombos()).toHaveLength(4);
    expect(selectableCombos().length * K_VALUES.length).toBe(264);
  });

  it("dimension lists match the experiment grid", () => {
    expect(REPRESENTATIONS).toHaveLength(4);
    expect(METRICS).toHaveLength(3);
    expect(ALGORITHMS).toHaveLength(4);
    expect(K_VALUES).toEqual([3, 5, 7, 10, 15, 20]);
  });
});
