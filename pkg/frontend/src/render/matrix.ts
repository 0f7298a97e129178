/** Policy matrix heatmap: topic rows (ALL) or policy rows (topic set), one
 * blue/red intensity pair per state cell using the server's row-relative
 * bins. Policy rows add initiator (blue) / adopter (red) circles. Clicking
 * a policy label shortcuts the By Context menus. */

import type { MatrixPayload } from "../types";
import { BLUE_QUARTILES, RED_QUARTILES, quartileFill } from "./colors";
import { clear, svgEl } from "./svg";

export interface MatrixCallbacks {
  onCellHover: (state: string, rowKey: string, kind: "topics" | "policies") => void;
  onCellLeave: () => void;
  onPolicyLabelClick: (policyId: string) => void;
}

const STEP = 24;
const ROW_H = 20;
const LABEL_W = 180;

export function renderMatrix(
  container: HTMLElement,
  payload: MatrixPayload | null,
  callbacks: MatrixCallbacks,
): void {
  clear(container);
  if (!payload) return;
  const width = LABEL_W + STEP * (payload.states.length + 1);
  const height = ROW_H * (payload.rows.length + 1);
  const svg = svgEl("svg", {
    width, height, viewBox: `0 0 ${width} ${height}`,
    "data-view": "matrix",
    "data-kind": payload.kind,
  });

  const header = svgEl("g", { class: "matrix-header" });
  payload.states.forEach((state, i) => {
    const t = svgEl("text", {
      x: LABEL_W + STEP * (i + 1), y: 12, "text-anchor": "middle",
      "font-size": 9, "data-state": state, class: "matrix-col",
    });
    t.textContent = state;
    header.appendChild(t);
  });
  svg.appendChild(header);

  payload.rows.forEach((row, ri) => {
    const g = svgEl("g", {
      class: "matrix-row",
      "data-key": row.key,
      "data-kind": payload.kind,
      transform: `translate(0, ${ROW_H * (ri + 1)})`,
    });
    const label = svgEl("text", {
      x: LABEL_W - 6, y: 13, "text-anchor": "end", "font-size": 10,
      class: payload.kind === "policies" ? "row-label policy-label" : "row-label",
      "data-key": row.key,
    });
    label.textContent = row.label.length > 30 ? row.label.slice(0, 29) + "…" : row.label;
    if (payload.kind === "policies") {
      label.addEventListener("click", () => callbacks.onPolicyLabelClick(row.key));
    }
    g.appendChild(label);

    for (const cell of row.cells) {
      const cx = LABEL_W + STEP * (payload.states.indexOf(cell.state) + 1);
      const cellGroup = svgEl("g", {
        class: "matrix-cell", "data-state": cell.state, "data-key": row.key,
      });
      cellGroup.appendChild(svgEl("rect", {
        x: cx - 10, y: 3, width: 9, height: 13,
        fill: quartileFill(BLUE_QUARTILES, cell.creation_bin),
        "data-part": "creations", "data-bin": cell.creation_bin,
      }));
      cellGroup.appendChild(svgEl("rect", {
        x: cx + 1, y: 3, width: 9, height: 13,
        fill: quartileFill(RED_QUARTILES, cell.adoption_bin),
        "data-part": "adoptions", "data-bin": cell.adoption_bin,
      }));
      if (cell.circle) {
        cellGroup.appendChild(svgEl("circle", {
          cx, cy: 9.5, r: 3.2,
          fill: cell.circle === "initiator" ? "#2166ac" : "#b2182b",
          class: "policy-circle",
          "data-circle": cell.circle,
          "data-state": cell.state,
        }));
      }
      cellGroup.addEventListener("mouseenter",
        () => callbacks.onCellHover(cell.state, row.key, payload.kind));
      cellGroup.addEventListener("mouseleave", () => callbacks.onCellLeave());
      g.appendChild(cellGroup);
    }
    svg.appendChild(g);
  });
  container.appendChild(svg);
}
