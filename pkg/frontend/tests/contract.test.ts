/** UI contract tests against payloads captured from the real API:
 * hover highlighting mirrors the patterns payload exactly, the matrix
 * swaps row kinds with the topic menu, the basis-year selector is
 * conditional, and every state axis shares one ordering. */

import { beforeEach, describe, expect, it } from "vitest";

import { createApp, App } from "../src/app";
import { FakeSource, FIXTURES, flush } from "./helpers";

let app: App;
let root: HTMLElement;
let source: FakeSource;

beforeEach(async () => {
  document.body.innerHTML = "<div id='app'></div>";
  root = document.getElementById("app")!;
  source = new FakeSource();
  app = createApp(root, source);
  await app.whenReady();
  await flush();
});

describe("hover highlighting", () => {
  it("renders exactly the edges of the patterns payload, tier and relation included", async () => {
    const focus = FIXTURES.meta.focus_state;
    app.hoverState(focus);
    await flush();

    const arcs = [...root.querySelectorAll("#arc-chart path.arc")];
    const rendered = new Set(arcs.map((a) =>
      `${a.getAttribute("data-tier")}|${a.getAttribute("data-source")}|` +
      `${a.getAttribute("data-target")}|${a.getAttribute("data-relation")}`));
    const expected = new Set([
      ...FIXTURES.patternsState.upper.map((e: any) => `upper|${e.source}|${e.target}|${e.relation}`),
      ...FIXTURES.patternsState.lower.map((e: any) => `lower|${e.source}|${e.target}|${e.relation}`),
    ]);
    expect(rendered).toEqual(expected);
    expect(arcs.length).toBe(
      FIXTURES.patternsState.upper.length + FIXTURES.patternsState.lower.length);
  });

  it("outlines exactly the partner states on the map", async () => {
    const focus = FIXTURES.meta.focus_state;
    app.hoverState(focus);
    await flush();

    const outlined = new Set(
      [...root.querySelectorAll("#map [data-outline]")].map((el) => el.getAttribute("data-state")));
    const expected = new Set(FIXTURES.patternsState.upper.map((e: any) =>
      e.source === focus ? e.target : e.source));
    expect(outlined).toEqual(expected);
  });

  it("restores the unfocused view after un-hover", async () => {
    app.hoverState(FIXTURES.meta.focus_state);
    await flush();
    expect(root.querySelectorAll("#arc-chart path.arc").length).toBeGreaterThan(0);

    app.unhover();
    await flush();
    expect(root.querySelectorAll("#arc-chart path.arc").length).toBe(0);
  });

  it("hovering a matrix cell under ALL requests the topic-tier lower patterns", async () => {
    app.hoverCell(FIXTURES.meta.focus_state, FIXTURES.meta.topic);
    await flush();
    const call = source.calls.filter((c) => c.path === "/api/patterns").pop()!;
    expect(call.params.cell_topic).toBe(FIXTURES.meta.topic);
    expect(call.params.state).toBe(FIXTURES.meta.focus_state);
  });
});

describe("matrix row kinds", () => {
  it("shows topic rows under ALL and policy rows once a topic is set", async () => {
    let matrix = root.querySelector("#matrix svg")!;
    expect(matrix.getAttribute("data-kind")).toBe("topics");
    const topicRows = [...root.querySelectorAll("#matrix .matrix-row")]
      .map((r) => r.getAttribute("data-key"));
    expect(topicRows).toEqual(FIXTURES.matrixAll.rows.map((r: any) => r.key));

    const topicMenu = root.querySelector("#menu-topic") as HTMLSelectElement;
    topicMenu.value = FIXTURES.meta.topic;
    topicMenu.dispatchEvent(new Event("change"));
    await flush();

    matrix = root.querySelector("#matrix svg")!;
    expect(matrix.getAttribute("data-kind")).toBe("policies");
    const policyRows = [...root.querySelectorAll("#matrix .matrix-row")]
      .map((r) => r.getAttribute("data-key"));
    expect(policyRows).toEqual(FIXTURES.matrixTopic.rows.map((r: any) => r.key));
    expect(root.querySelectorAll("#matrix .policy-circle").length).toBeGreaterThan(0);
  });
});

describe("basis-year selector visibility", () => {
  const setMethod = async (value: string) => {
    const menu = root.querySelector("#menu-method") as HTMLSelectElement;
    menu.value = value;
    menu.dispatchEvent(new Event("change"));
    await flush();
  };

  it("is absent by default and under non-contextual methods", async () => {
    expect(root.querySelector("#menu-basis-year")).toBeNull();
    expect(root.querySelector("#menu-basis")).toBeNull();
    await setMethod("StaticInnovativeness");
    expect(root.querySelector("#menu-basis-year")).toBeNull();
  });

  it("appears only under ContextualFactor + one-year", async () => {
    await setMethod("ContextualFactor");
    expect(root.querySelector("#menu-basis")).not.toBeNull();
    expect(root.querySelector("#menu-basis-year")).toBeNull();

    const basis = root.querySelector("#menu-basis") as HTMLSelectElement;
    basis.value = "one-year";
    basis.dispatchEvent(new Event("change"));
    await flush();
    expect(root.querySelector("#menu-basis-year")).not.toBeNull();

    const basis2 = root.querySelector("#menu-basis") as HTMLSelectElement;
    basis2.value = "years-range";
    basis2.dispatchEvent(new Event("change"));
    await flush();
    expect(root.querySelector("#menu-basis-year")).toBeNull();
  });
});

describe("shared state axis ordering", () => {
  const axisOrders = () => {
    const arc = [...root.querySelectorAll("#arc-chart text.state-label")]
      .map((t) => t.getAttribute("data-state"));
    const matrix = [...root.querySelectorAll("#matrix .matrix-col")]
      .map((t) => t.getAttribute("data-state"));
    const bars = [...root.querySelectorAll("#tab-body .bar-label")]
      .map((t) => t.getAttribute("data-label"));
    return { arc, matrix, bars };
  };

  it("agrees across arc chart, matrix, and the state bar chart", async () => {
    const stateTab = root.querySelector("#tabs [data-tab='state']") as HTMLButtonElement;
    stateTab.click();
    await flush();
    const { arc, matrix, bars } = axisOrders();
    expect(matrix).toEqual(arc);
    expect(bars).toEqual(arc);
  });

  it("still agrees under measurement-descending sort", async () => {
    const sortMenu = root.querySelector("#menu-state-sort") as HTMLSelectElement;
    sortMenu.value = "measurement-desc";
    sortMenu.dispatchEvent(new Event("change"));
    await flush();
    const stateTab = root.querySelector("#tabs [data-tab='state']") as HTMLButtonElement;
    stateTab.click();
    await flush();

    const { arc, matrix, bars } = axisOrders();
    expect(arc).toEqual(FIXTURES.mapDesc.order);
    expect(matrix).toEqual(arc);
    expect(bars).toEqual(arc);
  });
});

describe("server-owned numbers", () => {
  it("renders matrix intensities straight from the payload bins", async () => {
    const cells = [...root.querySelectorAll("#matrix .matrix-cell rect[data-part='creations']")];
    const byState = new Map(cells.map((c) => [
      c.parentElement!.getAttribute("data-state")! +
      "|" + c.parentElement!.getAttribute("data-key")!,
      Number(c.getAttribute("data-bin")),
    ]));
    for (const row of FIXTURES.matrixAll.rows as any[]) {
      for (const cell of row.cells) {
        expect(byState.get(`${cell.state}|${row.key}`)).toBe(cell.creation_bin);
      }
    }
  });

  it("colors map tiles by the payload's green quartile bins", async () => {
    const greens = ["#e5f5e0", "#a1d99b", "#41ab5d", "#006d2c"];
    for (const tile of root.querySelectorAll("#map .map-tile")) {
      const state = tile.getAttribute("data-state")!;
      const bin = (FIXTURES.map.bins as Record<string, number>)[state] ?? 0;
      expect(tile.getAttribute("fill")).toBe(greens[bin]);
    }
  });
});

describe("context shortcut and cox tooltip", () => {
  it("clicking a policy label sets the context menus", async () => {
    const topicMenu = root.querySelector("#menu-topic") as HTMLSelectElement;
    topicMenu.value = FIXTURES.meta.topic;
    topicMenu.dispatchEvent(new Event("change"));
    await flush();

    const label = root.querySelector("#matrix .policy-label") as SVGTextElement;
    const pid = label.getAttribute("data-key")!;
    label.dispatchEvent(new Event("click"));
    await flush();

    expect(app.store.state.activeTab).toBe("context");
    expect(app.store.state.contextSelection.policy).toBe(pid);
    expect(app.store.state.contextSelection.factor).toBe(
      FIXTURES.options.methods.ContextualFactor[0]);
    const policyMenu = root.querySelector("#context-policy") as HTMLSelectElement;
    expect(policyMenu.value).toBe(pid);
    expect(root.querySelectorAll("#tab-body .context-box").length).toBe(
      FIXTURES.adoptionsContext.boxes.length);
  });

  it("hovering a policy label shows the hazard report tooltip", async () => {
    const topicMenu = root.querySelector("#menu-topic") as HTMLSelectElement;
    topicMenu.value = FIXTURES.meta.topic;
    topicMenu.dispatchEvent(new Event("change"));
    await flush();

    const label = root.querySelector("#matrix .policy-label")!;
    label.dispatchEvent(new Event("mouseenter"));
    await flush();

    const tooltip = root.querySelector("#tooltip") as HTMLElement;
    expect(tooltip.style.display).toBe("block");
    const items = [...tooltip.querySelectorAll("li")].map((li) => li.dataset.factor);
    expect(items).toEqual(FIXTURES.cox.factors.map((f: any) => f.factor));
  });
});

describe("context tab boxes", () => {
  it("stacks same-year boxes bottom-up in ascending value order", async () => {
    app.shortcutToContext(FIXTURES.meta.policy);
    await flush();
    const boxes = [...root.querySelectorAll("#tab-body .context-box")];
    const byYear = new Map<string, { y: number; value: number }[]>();
    for (const b of boxes) {
      const year = b.getAttribute("data-year")!;
      if (!byYear.has(year)) byYear.set(year, []);
      byYear.get(year)!.push({
        y: Number(b.getAttribute("y")),
        value: Number(b.getAttribute("data-value")),
      });
    }
    for (const entries of byYear.values()) {
      const sortedByValue = [...entries].sort((a, b) => a.value - b.value);
      // ascending value must mean descending y (stacked from the bottom)
      for (let i = 1; i < sortedByValue.length; i++) {
        expect(sortedByValue[i].y).toBeLessThan(sortedByValue[i - 1].y);
      }
    }
  });
});
