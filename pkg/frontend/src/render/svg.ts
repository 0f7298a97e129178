/** Tiny SVG construction helpers; every renderer builds plain elements with
 * data-* attributes so tests can assert structure directly. */

const SVG_NS = "http://www.w3.org/2000/svg";

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    el.setAttribute(k, String(v));
  }
  return el;
}

export function clear(el: Element): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

export function linearScale(d0: number, d1: number, r0: number, r1: number) {
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

/** Semicircular arc between two x positions at a shared baseline. */
export function arcPath(x1: number, x2: number, baseline: number, up: boolean): string {
  const r = Math.abs(x2 - x1) / 2;
  const sweep = (up ? x2 > x1 : x2 < x1) ? 1 : 0;
  return `M ${x1} ${baseline} A ${r} ${r} 0 0 ${sweep} ${x2} ${baseline}`;
}
