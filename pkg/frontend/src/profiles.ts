import { cantonColor } from "./colors";
import { BLOCS, type CantonProfile, type Feature } from "./types";

/** Canton profile table: municipality counts and mean bloc shares in
 * percent, straight from the API payload. */
export function renderProfiles(
  el: HTMLElement,
  profiles: CantonProfile[],
  pinned: Feature | null,
): void {
  const header = ["Canton", "Munis", ...BLOCS.map((b) => `${b}%`)];
  const rows = profiles
    .map((p) => {
      const cells = BLOCS.map((b) => `<td>${p[b].toFixed(1)}</td>`).join("");
      return `<tr>
        <td><span class="legend-swatch" style="background:${cantonColor(p.canton)}"></span>${p.canton}</td>
        <td>${p.munis}</td>${cells}
      </tr>`;
    })
    .join("");
  const pinnedBlock = pinned
    ? `<div class="pinned-muni">
        <strong>${pinned.properties.name}</strong>
        ${pinned.properties.canton !== undefined ? ` (canton ${pinned.properties.canton})` : ""}<br>
        ${BLOCS.map((b) => `${b} ${(pinned.properties.bloc_means[b] * 100).toFixed(1)}%`).join(" &middot; ")}
      </div>`
    : "";
  el.innerHTML = `
    ${pinnedBlock}
    <table class="profile-table">
      <thead><tr>${header.map((h) => `<th>${h}</th>`).join("")}</tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}
