// Okabe-Ito palette (colorblind-safe) extended with darkened variants for
// K up to 20. Canton labels are arbitrary, so color identity is stable only
// within a session.

const OKABE_ITO = [
  "#E69F00", "#56B4E9", "#009E73", "#F0E442",
  "#0072B2", "#D55E00", "#CC79A7", "#999999",
];

function darken(hex: string, factor: number): string {
  const n = parseInt(hex.slice(1), 16);
  const channel = (shift: number) =>
    Math.round(((n >> shift) & 0xff) * factor)
      .toString(16)
      .padStart(2, "0");
  return `#${channel(16)}${channel(8)}${channel(0)}`;
}

export function cantonColor(label: number): string {
  const base = OKABE_ITO[label % OKABE_ITO.length];
  const round = Math.floor(label / OKABE_ITO.length);
  return round === 0 ? base : darken(base, Math.max(0.35, 1 - 0.3 * round));
}

export function legendEntries(achievedK: number): { label: number; color: string }[] {
  return Array.from({ length: achievedK }, (_, label) => ({ label, color: cantonColor(label) }));
}

/** Sequential scale for agreement values in [0, 1] (stability heatmap). */
export function agreementColor(value: number): string {
  const clamped = Math.max(0, Math.min(1, value));
  const light = 95 - clamped * 55;
  return `hsl(210, 65%, ${light}%)`;
}
