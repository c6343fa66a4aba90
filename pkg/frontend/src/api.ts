import type {
  ConfigInfo,
  FeatureCollection,
  PartitionPayload,
  StabilityPayload,
  WhatIfBody,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }

  get retriable(): boolean {
    return this.status === 503;
  }
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    const detail = await errorDetail(response);
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    return typeof body.detail === "string" ? body.detail : JSON.stringify(body);
  } catch {
    return `${response.status} ${response.statusText}`;
  }
}

export class ApiClient {
  private whatIfSeq = 0;

  constructor(private base: string = "") {}

  geo(): Promise<FeatureCollection> {
    return getJson(`${this.base}/api/geo`);
  }

  configs(): Promise<{ configs: ConfigInfo[]; grid_size: number }> {
    return getJson(`${this.base}/api/configs`);
  }

  partition(repr: string, metric: string, algo: string, k: number): Promise<PartitionPayload> {
    const params = new URLSearchParams({ repr, metric, algo, k: String(k) });
    return getJson(`${this.base}/api/partition?${params}`);
  }

  stability(preset = "representative"): Promise<StabilityPayload> {
    return getJson(`${this.base}/api/stability?preset=${encodeURIComponent(preset)}`);
  }

  /** Submit a what-if run. Responses superseded by a newer submission
   * resolve to null so stale results are never rendered. */
  async whatIf(body: WhatIfBody): Promise<PartitionPayload | null> {
    const seq = ++this.whatIfSeq;
    const response = await fetch(`${this.base}/api/whatif`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await errorDetail(response);
      throw new ApiError(response.status, detail);
    }
    const payload = (await response.json()) as PartitionPayload;
    return seq === this.whatIfSeq ? payload : null;
  }
}
