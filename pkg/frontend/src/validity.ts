// Selectable experiment dimensions and the combination rule. This must match
// the server's 400 behavior exactly; the contract test drives both.

export const REPRESENTATIONS = ["BlocShares", "RawParty", "PCA_5", "NMF_5"] as const;
export const METRICS = ["Euclidean", "Cosine", "JensenShannon"] as const;
export const ALGORITHMS = ["SA", "Agglomerative", "Louvain", "KMeans"] as const;
export const K_VALUES = [3, 5, 7, 10, 15, 20] as const;

export type Representation = (typeof REPRESENTATIONS)[number];
export type MetricName = (typeof METRICS)[number];
export type Algorithm = (typeof ALGORITHMS)[number];

/** PCA projections go negative; Jensen-Shannon needs non-negative inputs. */
export function isValidCombo(representation: string, metric: string): boolean {
  return !(representation === "PCA_5" && metric === "JensenShannon");
}

/** Metrics to disable in the selector for a given representation. */
export function disabledMetrics(representation: string): MetricName[] {
  return METRICS.filter((m) => !isValidCombo(representation, m));
}

/** Every combination the selector offers (the valid grid cells at one K). */
export function selectableCombos(): { representation: Representation; metric: MetricName; algorithm: Algorithm }[] {
  const out = [];
  for (const representation of REPRESENTATIONS) {
    for (const metric of METRICS) {
      if (!isValidCombo(representation, metric)) continue;
      for (const algorithm of ALGORITHMS) {
        out.push({ representation, metric, algorithm });
      }
    }
  }
  return out;
}

/** Combinations the selector refuses to submit. */
export function disabledCombos(): { representation: Representation; metric: MetricName; algorithm: Algorithm }[] {
  const out = [];
  for (const representation of REPRESENTATIONS) {
    for (const metric of METRICS) {
      if (isValidCombo(representation, metric)) continue;
      for (const algorithm of ALGORITHMS) {
        out.push({ representation, metric, algorithm });
      }
    }
  }
  return out;
}
