import type { PartitionPayload } from "./types";

/** Sanity-check a partition payload before rendering. Returns an error
 * message for the banner, or null when the payload is renderable; a bad
 * payload must leave the previous map untouched. */
export function partitionPayloadError(payload: PartitionPayload): string | null {
  if (!payload.geojson || payload.geojson.type !== "FeatureCollection") {
    return "malformed partition payload: missing FeatureCollection";
  }
  if (!payload.geojson.features.length) {
    return "malformed partition payload: empty FeatureCollection";
  }
  const missing = payload.geojson.features.filter(
    (f) => typeof f.properties?.canton !== "number",
  );
  if (missing.length) {
    const name = missing[0].properties?.name ?? "unnamed feature";
    return `malformed partition payload: ${missing.length} features without a canton (first: ${name})`;
  }
  if (!payload.report || !payload.report.cost) {
    return "malformed partition payload: missing report";
  }
  return null;
}
