/** The four-color vocabulary: blue incoming, red outgoing, purple
 * bidirectional, green quartile intensities for measurements. Bins come
 * from the server untouched; the UI never re-bins. */

import type { Relation } from "../types";

export const RELATION_COLORS: Record<Relation, string> = {
  incoming: "#2166ac",
  outgoing: "#b2182b",
  bidirectional: "#762a83",
  directed: "#636363",
};

export const GREEN_QUARTILES = ["#e5f5e0", "#a1d99b", "#41ab5d", "#006d2c"];
export const BLUE_QUARTILES = ["#eff3ff", "#bdd7e7", "#6baed6", "#2171b5"];
export const RED_QUARTILES = ["#fee5d9", "#fcae91", "#fb6a4a", "#cb181d"];

export const CONTEXT_COLORS = {
  selected: "#2ca02c",
  usMean: "#000000",
  other: "#bbbbbb",
  firstYearBox: "#2166ac",
  laterBox: "#b2182b",
};

export function quartileFill(palette: string[], bin: number): string {
  return palette[Math.max(0, Math.min(palette.length - 1, bin))];
}
