/** Choropleth map in two styles: equal-size hex tiles (approximate
 * adjacency) or centroid-placed tiles (geographic). Fill is the green
 * measurement quartile; on hover, partner states from the patterns payload
 * get outline colors by relation. */

import { CENTROIDS, HEX_GRID, hexPoints } from "../assets/geometry";
import type { MapPayload, MapStyle, PatternsPayload } from "../types";
import { GREEN_QUARTILES, RELATION_COLORS, quartileFill } from "./colors";
import { clear, linearScale, svgEl } from "./svg";

export interface MapCallbacks {
  onStateHover: (state: string) => void;
  onStateLeave: () => void;
}

const WIDTH = 560;
const HEIGHT = 380;

function partnerOutlines(patterns: PatternsPayload | null): Map<string, string> {
  const outlines = new Map<string, string>();
  if (!patterns) return outlines;
  const focus = patterns.focus.state;
  for (const e of patterns.upper) {
    const partner = e.source === focus ? e.target : e.source;
    outlines.set(partner, RELATION_COLORS[e.relation]);
  }
  return outlines;
}

export function renderMap(
  container: HTMLElement,
  style: MapStyle,
  payload: MapPayload | null,
  patterns: PatternsPayload | null,
  callbacks: MapCallbacks,
): void {
  clear(container);
  if (!payload) return;
  const svg = svgEl("svg", {
    width: WIDTH, height: HEIGHT, viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    "data-view": "map", "data-style": style,
  });
  const outlines = partnerOutlines(patterns);
  const focusState = patterns?.focus.state ?? null;

  const place = (state: string): [number, number] => {
    if (style === "hexbin") {
      const [col, row] = HEX_GRID[state];
      const cx = 40 + col * 42 + (row % 2 ? 21 : 0);
      return [cx, 40 + row * 40];
    }
    const [lat, lon] = CENTROIDS[state];
    const sx = linearScale(-126, -67, 20, WIDTH - 20);
    const sy = linearScale(49.5, 25, 20, HEIGHT - 20);
    return [sx(lon), sy(lat)];
  };

  for (const state of Object.keys(HEX_GRID)) {
    const [cx, cy] = place(state);
    const fill = quartileFill(GREEN_QUARTILES, payload.bins[state] ?? 0);
    const outline = outlines.get(state) ?? (state === focusState ? "#333" : "none");
    const shape = style === "hexbin"
      ? svgEl("polygon", { points: hexPoints(cx, cy, 20), class: "map-tile" })
      : svgEl("rect", { x: cx - 16, y: cy - 13, width: 32, height: 26, rx: 4, class: "map-tile" });
    shape.setAttribute("fill", fill);
    shape.setAttribute("stroke", outline === "none" ? "#fff" : outline);
    shape.setAttribute("stroke-width", outline === "none" ? "1" : "3");
    shape.setAttribute("data-state", state);
    if (outlines.has(state)) {
      shape.setAttribute("data-outline", outlines.get(state)!);
    }
    shape.addEventListener("mouseenter", () => callbacks.onStateHover(state));
    shape.addEventListener("mouseleave", () => callbacks.onStateLeave());
    svg.appendChild(shape);

    const label = svgEl("text", {
      x: cx, y: cy + 3, "text-anchor": "middle", "font-size": 9,
      "pointer-events": "none",
    });
    label.textContent = state;
    svg.appendChild(label);
  }
  container.appendChild(svg);
}
