/** Store transitions: hover involution, configure merging, reset. */

import { describe, expect, it } from "vitest";

import { defaultConfig, Store } from "../src/state";
import type { OptionsPayload } from "../src/types";

const OPTIONS: OptionsPayload = {
  topics: ["T1", "T2"],
  states: ["CA", "NY"],
  year_bounds: [1950, 2017],
  methods: {
    NetworkCentrality: ["Degree"],
    StaticInnovativeness: ["Static State Innovativeness"],
    ContextualFactor: ["Foreign Born"],
  },
  defaults: {
    topic: "ALL", year_range: [1950, 2017], method: "NetworkCentrality",
    measurement: "Degree", basis: "years-range",
    state_sort: "alphabetical", policy_sort: "alphabetical",
  },
};

describe("Store", () => {
  it("hover then un-hover returns to the initial state", () => {
    const store = new Store(OPTIONS);
    const before = JSON.stringify(store.state);
    store.hover({ kind: "state", state: "CA" });
    expect(store.state.hover).toEqual({ kind: "state", state: "CA" });
    store.clearHover();
    expect(JSON.stringify(store.state)).toBe(before);
  });

  it("exactly one hover focus at a time", () => {
    const store = new Store(OPTIONS);
    store.hover({ kind: "state", state: "CA" });
    store.hover({ kind: "cell", state: "NY", topic: "T1" });
    expect(store.state.hover).toEqual({ kind: "cell", state: "NY", topic: "T1" });
  });

  it("configure merges partial changes and notifies", () => {
    const store = new Store(OPTIONS);
    const seen: string[] = [];
    store.subscribe((_, changed) => seen.push(...changed));
    store.configure({ topic: "T1" });
    expect(store.state.config.topic).toBe("T1");
    expect(store.state.config.measurement).toBe("Degree");
    expect(seen).toContain("config");
  });

  it("defaults mirror the server's options payload", () => {
    const config = defaultConfig(OPTIONS);
    expect(config).toEqual({
      topic: "ALL", from: 1950, to: 2017,
      method: "NetworkCentrality", measurement: "Degree",
      basis: "years-range", basisYear: null,
      stateSort: "alphabetical", policySort: "alphabetical",
      activityState: null,
    });
  });
});
