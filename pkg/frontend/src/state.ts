/** Central UI state with subscription; every mutation funnels through
 * update() so views re-render from one source of truth. */

import type { HoverFocus, OptionsPayload, UiState, ViewConfig } from "./types";

export function defaultConfig(options: OptionsPayload): ViewConfig {
  const d = options.defaults;
  return {
    topic: d.topic,
    from: d.year_range[0],
    to: d.year_range[1],
    method: d.method,
    measurement: d.measurement,
    basis: d.basis,
    basisYear: null,
    stateSort: d.state_sort,
    policySort: d.policy_sort,
    activityState: null,
  };
}

export class Store {
  private listeners: ((state: UiState, changed: Set<keyof UiState>) => void)[] = [];
  state: UiState;

  constructor(options: OptionsPayload) {
    this.state = {
      config: defaultConfig(options),
      hover: { kind: "none" },
      contextSelection: { policy: null, state: null, factor: null },
      mapStyle: "hexbin",
      sharedY: false,
      activeTab: "year",
    };
  }

  subscribe(fn: (state: UiState, changed: Set<keyof UiState>) => void): void {
    this.listeners.push(fn);
  }

  update(partial: Partial<UiState>): void {
    const changed = new Set<keyof UiState>();
    for (const key of Object.keys(partial) as (keyof UiState)[]) {
      if (this.state[key] !== partial[key]) changed.add(key);
    }
    this.state = { ...this.state, ...partial };
    for (const fn of this.listeners) fn(this.state, changed);
  }

  configure(change: Partial<ViewConfig>): void {
    this.update({ config: { ...this.state.config, ...change } });
  }

  hover(focus: HoverFocus): void {
    this.update({ hover: focus });
  }

  clearHover(): void {
    this.update({ hover: { kind: "none" } });
  }
}
