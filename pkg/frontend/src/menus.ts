/** Configuration menus: topic, year window, analysis method/measurement,
 * basis (contextual only, with the basis-year selector appearing only for
 * one-year), sort options, map style, shared-y toggle, and reset. Invalid
 * combinations are never shown: dependent menus rebuild on each change. */

import type { OptionsPayload, UiState } from "./types";
import { Store, defaultConfig } from "./state";

function option(value: string, label?: string): HTMLOptionElement {
  const el = document.createElement("option");
  el.value = value;
  el.textContent = label ?? value;
  return el;
}

function select(id: string, values: string[], current: string,
                onChange: (v: string) => void): HTMLSelectElement {
  const el = document.createElement("select");
  el.id = id;
  for (const v of values) el.appendChild(option(v));
  el.value = current;
  el.addEventListener("change", () => onChange(el.value));
  return el;
}

function labeled(text: string, control: HTMLElement): HTMLLabelElement {
  const label = document.createElement("label");
  label.textContent = text + " ";
  label.appendChild(control);
  return label;
}

export function renderMenus(container: HTMLElement, options: OptionsPayload, store: Store): void {
  const state = store.state;
  container.textContent = "";
  container.className = "menus";

  container.appendChild(labeled("Policy Topic",
    select("menu-topic", ["ALL", ...options.topics], state.config.topic,
      (v) => store.configure({ topic: v }))));

  const years: string[] = [];
  for (let y = options.year_bounds[0]; y <= options.year_bounds[1]; y++) years.push(String(y));
  container.appendChild(labeled("From",
    select("menu-from", years, String(state.config.from),
      (v) => store.configure({ from: Number(v) }))));
  container.appendChild(labeled("To",
    select("menu-to", years, String(state.config.to),
      (v) => store.configure({ to: Number(v) }))));

  container.appendChild(labeled("Analysis Method",
    select("menu-method", Object.keys(options.methods), state.config.method,
      (v) => {
        const method = v as UiState["config"]["method"];
        store.configure({
          method,
          measurement: options.methods[v][0],
          basis: "years-range",
          basisYear: null,
        });
      })));

  container.appendChild(labeled("Measurement",
    select("menu-measurement", options.methods[state.config.method], state.config.measurement,
      (v) => store.configure({ measurement: v }))));

  if (state.config.method === "ContextualFactor") {
    container.appendChild(labeled("Basis",
      select("menu-basis", ["all-range", "years-range", "one-year"], state.config.basis,
        (v) => store.configure({
          basis: v as UiState["config"]["basis"],
          basisYear: v === "one-year"
            ? (state.config.basisYear ?? state.config.to) : null,
        }))));
    if (state.config.basis === "one-year") {
      container.appendChild(labeled("Basis Year",
        select("menu-basis-year", years,
          String(state.config.basisYear ?? state.config.to),
          (v) => store.configure({ basisYear: Number(v) }))));
    }
  }

  container.appendChild(labeled("State Sort",
    select("menu-state-sort", ["alphabetical", "measurement-desc"], state.config.stateSort,
      (v) => store.configure({ stateSort: v as UiState["config"]["stateSort"] }))));

  container.appendChild(labeled("Policy Sort",
    select("menu-policy-sort", ["alphabetical", "total-adoptions-desc", "policy-activity"],
      state.config.policySort,
      (v) => store.configure({ policySort: v as UiState["config"]["policySort"] }))));

  container.appendChild(labeled("Map Style",
    select("menu-map-style", ["hexbin", "geographic"], state.mapStyle,
      (v) => store.update({ mapStyle: v as UiState["mapStyle"] }))));

  const shared = document.createElement("input");
  shared.type = "checkbox";
  shared.id = "menu-shared-y";
  shared.checked = state.sharedY;
  shared.addEventListener("change", () => store.update({ sharedY: shared.checked }));
  container.appendChild(labeled("Shared y-domain", shared));

  const reset = document.createElement("button");
  reset.id = "menu-reset";
  reset.textContent = "Reset";
  reset.addEventListener("click", () => store.update({
    config: defaultConfig(options),
    hover: { kind: "none" },
  }));
  container.appendChild(reset);
}
