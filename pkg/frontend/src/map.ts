import { geoMercator, geoPath } from "d3-geo";
import { select } from "d3-selection";

import { cantonColor, legendEntries } from "./colors";
import { BLOCS, type Feature, type FeatureCollection } from "./types";

export interface MapCallbacks {
  onSelect?: (feature: Feature) => void;
}

function blocTooltip(feature: Feature): string {
  const shares = BLOCS.map(
    (b) => `${b}: ${(feature.properties.bloc_means[b] * 100).toFixed(1)}%`,
  ).join(" &middot; ");
  const canton =
    feature.properties.canton === undefined ? "" : ` &mdash; canton ${feature.properties.canton}`;
  return `<strong>${feature.properties.name}</strong>${canton}<br>${shares}`;
}

/** Choropleth of the municipality polygons, colored by canton when the
 * payload carries assignments. Client-side projection only. */
export function renderMap(
  container: HTMLElement,
  geojson: FeatureCollection,
  achievedK: number | null,
  callbacks: MapCallbacks = {},
): void {
  const width = container.clientWidth || 640;
  const height = container.clientHeight || 560;
  container.innerHTML = "";

  const projection = geoMercator().fitExtent(
    [
      [8, 8],
      [width - 8, height - 8],
    ],
    geojson as never,
  );
  const path = geoPath(projection);

  const svg = select(container)
    .append("svg")
    .attr("width", width)
    .attr("height", height)
    .attr("role", "img")
    .attr("aria-label", "canton map");

  const tooltip = select(container)
    .append("div")
    .attr("class", "map-tooltip")
    .style("display", "none");

  svg
    .selectAll("path")
    .data(geojson.features)
    .join("path")
    .attr("d", (f) => path(f as never))
    .attr("class", "municipality")
    .attr("fill", (f) =>
      f.properties.canton === undefined ? "#d7d7d7" : cantonColor(f.properties.canton),
    )
    .on("mousemove", function (event: MouseEvent, f) {
      const bounds = container.getBoundingClientRect();
      tooltip
        .style("display", "block")
        .style("left", `${event.clientX - bounds.left + 12}px`)
        .style("top", `${event.clientY - bounds.top + 12}px`)
        .html(blocTooltip(f));
      select(this).attr("stroke-width", 1.6);
    })
    .on("mouseleave", function () {
      tooltip.style("display", "none");
      select(this).attr("stroke-width", null);
    })
    .on("click", (_event, f) => callbacks.onSelect?.(f));

  if (achievedK !== null) {
    const legend = select(container).append("div").attr("class", "map-legend");
    for (const entry of legendEntries(achievedK)) {
      legend
        .append("span")
        .attr("class", "legend-entry")
        .html(
          `<span class="legend-swatch" style="background:${entry.color}"></span>canton ${entry.label}`,
        );
    }
  }
}
