// Payload shapes of the canton API. Every number shown in the UI comes from
// these payloads; the client never derives its own metric values.

export const BLOCS = ["Right", "Haredi", "Center", "Left", "Arab"] as const;
export type Bloc = (typeof BLOCS)[number];

export interface MunicipalityProperties {
  name: string;
  municipality_id: string;
  bloc_means: Record<Bloc, number>;
  canton?: number;
}

export interface Feature {
  type: "Feature";
  properties: MunicipalityProperties;
  geometry: { type: "Polygon"; coordinates: number[][][] };
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: Feature[];
}

export interface CostBreakdown {
  homogeneity: number;
  balance: number;
  compactness: number;
  total: number;
}

export interface Report {
  silhouette: number | null;
  wcss: number;
  pop_cv: number;
  disconnected: number;
  cost: CostBreakdown;
}

export interface CantonProfile {
  canton: number;
  munis: number;
  Right: number;
  Haredi: number;
  Center: number;
  Left: number;
  Arab: number;
}

export interface ConfigInfo {
  representation: string;
  metric: string;
  algorithm: string;
  K: number;
  seed?: number;
  status?: string;
  silhouette?: number | null;
  pop_cv?: number;
  disconnected?: number;
  cost_total?: number;
}

export interface PartitionPayload {
  config: ConfigInfo & { weights?: { alpha: number; beta: number; gamma: number } };
  achieved_K: number;
  report: Report;
  profiles: CantonProfile[];
  geojson: FeatureCollection;
  elapsed_s?: number;
}

export interface StabilityReportPayload {
  election_ids: number[];
  pairwise_ari: number[][];
  pairwise_nmi: number[][];
  mean_ari: number;
  std_ari: number;
  mean_nmi: number;
  std_nmi: number;
}

export interface StabilityPayload {
  preset: string;
  reports: { config: ConfigInfo; report: StabilityReportPayload }[];
}

export interface WhatIfBody {
  representation: string;
  metric: string;
  algorithm: string;
  k: number;
  alpha: number;
  beta: number;
  gamma: number;
  sa_iterations?: number;
  seed?: number;
}
