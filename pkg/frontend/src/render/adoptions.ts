/** Policy adoption view: mirror bar charts (By Year / By State), stacked
 * bars (By Topic), and the line-box chart (By Context). Blue = creations /
 * first introductions, red = existing-policy adoptions. The mirror charts
 * can share one y-domain or scale each half independently. */

import type {
  ContextPayload, StateEntry, TopicEntry, YearEntry,
} from "../types";
import { CONTEXT_COLORS } from "./colors";
import { clear, linearScale, svgEl } from "./svg";

const W = 640;
const H = 230;
const MID = 115;

function mirrorBars(
  container: HTMLElement,
  entries: { label: string; creations: number; adoptions: number }[],
  sharedY: boolean,
  tab: string,
): void {
  const svg = svgEl("svg", {
    width: W, height: H, viewBox: `0 0 ${W} ${H}`,
    "data-view": `adoptions-${tab}`,
  });
  const maxC = Math.max(1, ...entries.map((e) => e.creations));
  const maxA = Math.max(1, ...entries.map((e) => e.adoptions));
  const topMax = sharedY ? Math.max(maxC, maxA) : maxC;
  const botMax = sharedY ? Math.max(maxC, maxA) : maxA;
  const step = Math.min(22, (W - 40) / Math.max(1, entries.length));

  entries.forEach((e, i) => {
    const x = 30 + i * step;
    const hUp = (e.creations / topMax) * (MID - 24);
    const hDn = (e.adoptions / botMax) * (MID - 24);
    svg.appendChild(svgEl("rect", {
      x, y: MID - hUp, width: Math.max(2, step - 4), height: hUp,
      fill: "#2166ac", class: "bar creations", "data-label": e.label,
      "data-value": e.creations,
    }));
    svg.appendChild(svgEl("rect", {
      x, y: MID + 1, width: Math.max(2, step - 4), height: hDn,
      fill: "#b2182b", class: "bar adoptions", "data-label": e.label,
      "data-value": e.adoptions,
    }));
    if (entries.length <= 60) {
      const t = svgEl("text", {
        x: x + step / 2 - 2, y: H - 4, "text-anchor": "middle", "font-size": 8,
        class: "bar-label", "data-label": e.label,
      });
      t.textContent = e.label;
      svg.appendChild(t);
    }
  });
  svg.appendChild(svgEl("line", {
    x1: 20, x2: W - 10, y1: MID, y2: MID, stroke: "#999",
  }));
  container.appendChild(svg);
}

export function renderYearTab(container: HTMLElement, series: YearEntry[], sharedY: boolean): void {
  clear(container);
  mirrorBars(container, series.map((e) => ({
    label: String(e.year), creations: e.creations, adoptions: e.adoptions,
  })), sharedY, "year");
}

export function renderStateTab(container: HTMLElement, series: StateEntry[], sharedY: boolean): void {
  clear(container);
  mirrorBars(container, series.map((e) => ({
    label: e.state, creations: e.creations, adoptions: e.adoptions,
  })), sharedY, "state");
}

export function renderTopicTab(container: HTMLElement, series: TopicEntry[]): void {
  clear(container);
  const svg = svgEl("svg", {
    width: W, height: H, viewBox: `0 0 ${W} ${H}`, "data-view": "adoptions-topic",
  });
  const split = series.length > 0 && series[0].introduced !== undefined;
  const totals = series.map((e) => (split ? (e.introduced! + e.adopted!) : e.policies!));
  const maxV = Math.max(1, ...totals);
  const step = (W - 60) / Math.max(1, series.length);
  series.forEach((e, i) => {
    const x = 40 + i * step;
    const total = split ? e.introduced! + e.adopted! : e.policies!;
    const hTotal = (total / maxV) * (H - 60);
    if (split) {
      const hIntro = (e.introduced! / maxV) * (H - 60);
      svg.appendChild(svgEl("rect", {
        x, y: H - 30 - hTotal, width: step - 8, height: hTotal - hIntro,
        fill: "#b2182b", class: "stack adopted", "data-topic": e.topic,
        "data-value": e.adopted!,
      }));
      svg.appendChild(svgEl("rect", {
        x, y: H - 30 - hIntro, width: step - 8, height: hIntro,
        fill: "#2166ac", class: "stack introduced", "data-topic": e.topic,
        "data-value": e.introduced!,
      }));
    } else {
      svg.appendChild(svgEl("rect", {
        x, y: H - 30 - hTotal, width: step - 8, height: hTotal,
        fill: "#888", class: "stack total", "data-topic": e.topic,
        "data-value": total,
      }));
    }
    const t = svgEl("text", {
      x: x + (step - 8) / 2, y: H - 16, "text-anchor": "middle", "font-size": 8,
      class: "bar-label", "data-topic": e.topic,
    });
    t.textContent = e.topic.length > 14 ? e.topic.slice(0, 13) + "…" : e.topic;
    svg.appendChild(t);
  });
  container.appendChild(svg);
}

export function renderContextTab(container: HTMLElement, payload: ContextPayload | null): void {
  clear(container);
  if (!payload || payload.years.length === 0) return;
  const svg = svgEl("svg", {
    width: W, height: H, viewBox: `0 0 ${W} ${H}`, "data-view": "adoptions-context",
  });
  const allValues = payload.series.flatMap((s) => s.values).concat(payload.us_mean);
  const lo = Math.min(...allValues);
  const hi = Math.max(...allValues);
  const x = linearScale(payload.years[0], payload.years[payload.years.length - 1], 40, W - 20);
  const y = linearScale(lo, hi === lo ? lo + 1 : hi, H - 40, 20);

  const linePath = (values: number[]) =>
    values.map((v, i) => `${i ? "L" : "M"} ${x(payload.years[i]).toFixed(1)} ${y(v).toFixed(1)}`).join(" ");

  for (const s of payload.series) {
    const selected = s.state === payload.state;
    svg.appendChild(svgEl("path", {
      d: linePath(s.values), fill: "none",
      stroke: selected ? CONTEXT_COLORS.selected : CONTEXT_COLORS.other,
      "stroke-width": selected ? 2.2 : 1,
      class: selected ? "context-line selected" : "context-line",
      "data-state": s.state,
    }));
  }
  svg.appendChild(svgEl("path", {
    d: linePath(payload.us_mean), fill: "none",
    stroke: CONTEXT_COLORS.usMean, "stroke-width": 1.8,
    class: "context-line us-mean", "data-state": "US",
  }));

  // boxes stack from the bottom per year, already ordered ascending by value
  const stackIndex = new Map<number, number>();
  for (const box of payload.boxes) {
    const level = stackIndex.get(box.year) ?? 0;
    stackIndex.set(box.year, level + 1);
    const bx = x(box.year);
    const by = H - 34 - level * 14;
    svg.appendChild(svgEl("rect", {
      x: bx - 9, y: by - 11, width: 18, height: 12, rx: 2,
      fill: box.first_year ? CONTEXT_COLORS.firstYearBox : CONTEXT_COLORS.laterBox,
      class: "context-box",
      "data-state": box.state, "data-year": box.year,
      "data-first-year": String(box.first_year), "data-value": box.value,
    }));
    const t = svgEl("text", {
      x: bx, y: by - 2, "text-anchor": "middle", "font-size": 8, fill: "#fff",
      "pointer-events": "none",
    });
    t.textContent = box.state;
    svg.appendChild(t);
  }
  container.appendChild(svg);
}
