/** Fixed series colors (colorblind-safe), indexed by series order. */
export const SERIES = [
  "#0072b2",
  "#d55e00",
  "#009e73",
  "#cc79a7",
  "#e69f00",
  "#56b4e9",
] as const;

export function seriesColor(i: number): string {
  return SERIES[i % SERIES.length]!;
}

export const REF_COLOR = "#222222";
export const MISSING_COLOR = "#bbbbbb";
