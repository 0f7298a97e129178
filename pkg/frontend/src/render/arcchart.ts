/** Policy diffusion chart: the 50 state labels on one axis, measurement
 * glyphs in green quartiles, upper arcs (config-level patterns) above the
 * axis and lower arcs (topic networks or per-policy ties) below. Arcs are
 * drawn exclusively from the latest patterns payload, one path per edge. */

import type { MapPayload, PatternsPayload } from "../types";
import { GREEN_QUARTILES, RELATION_COLORS, quartileFill } from "./colors";
import { arcPath, clear, svgEl } from "./svg";

export interface ArcChartCallbacks {
  onStateHover: (state: string) => void;
  onStateLeave: () => void;
}

const STEP = 24;
const BASELINE = 150;
const HEIGHT = 300;

export function renderArcChart(
  container: HTMLElement,
  order: string[],
  mapPayload: MapPayload | null,
  patterns: PatternsPayload | null,
  callbacks: ArcChartCallbacks,
): void {
  clear(container);
  const width = STEP * (order.length + 1);
  const svg = svgEl("svg", {
    width, height: HEIGHT, viewBox: `0 0 ${width} ${HEIGHT}`,
    "data-view": "arc-chart",
  });
  const x = (state: string) => STEP * (order.indexOf(state) + 1);

  const arcs = svgEl("g", { class: "arcs" });
  if (patterns) {
    for (const e of patterns.upper) {
      arcs.appendChild(svgEl("path", {
        d: arcPath(x(e.source), x(e.target), BASELINE - 14, true),
        class: "arc upper",
        fill: "none",
        stroke: RELATION_COLORS[e.relation],
        "stroke-width": 1.6,
        "data-tier": "upper",
        "data-source": e.source,
        "data-target": e.target,
        "data-relation": e.relation,
      }));
    }
    for (const e of patterns.lower) {
      arcs.appendChild(svgEl("path", {
        d: arcPath(x(e.source), x(e.target), BASELINE + 14, false),
        class: "arc lower",
        fill: "none",
        stroke: RELATION_COLORS[e.relation],
        "stroke-width": 1.6,
        "data-tier": "lower",
        "data-source": e.source,
        "data-target": e.target,
        "data-relation": e.relation,
        ...(e.count !== undefined ? { "data-count": e.count } : {}),
      }));
    }
  }
  svg.appendChild(arcs);

  const axis = svgEl("g", { class: "axis" });
  for (const state of order) {
    const cx = x(state);
    const glyph = svgEl("rect", {
      x: cx - 7, y: BASELINE - 10, width: 14, height: 8,
      class: "glyph",
      "data-state": state,
      fill: mapPayload ? quartileFill(GREEN_QUARTILES, mapPayload.bins[state] ?? 0) : "#eee",
    });
    const label = svgEl("text", {
      x: cx, y: BASELINE + 8, "text-anchor": "middle",
      class: "state-label",
      "font-size": 9,
      "data-state": state,
    });
    label.textContent = state;
    for (const el of [glyph, label]) {
      el.addEventListener("mouseenter", () => callbacks.onStateHover(state));
      el.addEventListener("mouseleave", () => callbacks.onStateLeave());
    }
    axis.appendChild(glyph);
    axis.appendChild(label);
  }
  svg.appendChild(axis);
  container.appendChild(svg);
}
