/** Wires the store, data source, and views into the coordinated layout:
 *
 *   menus | search
 *   arc chart (upper/lower patterns)
 *   matrix heatmap          map (hexbin / geographic)
 *   adoption tabs (year / state / topic / context)
 *
 * Hovering a state, matrix cell, or policy circle refetches the patterns
 * payload and the focused tab data; every rendered arc and outline comes
 * from the latest payload (stale responses are discarded by sequence
 * number). The UI never computes bins or sorts; the server's numbers are
 * rendered as-is.
 */

import { configParams, DataSource, SequencedFetcher } from "./api";
import { renderMenus } from "./menus";
import {
  renderContextTab, renderStateTab, renderTopicTab, renderYearTab,
} from "./render/adoptions";
import { renderArcChart } from "./render/arcchart";
import { renderMap } from "./render/map";
import { renderMatrix } from "./render/matrix";
import { clear } from "./render/svg";
import { Store } from "./state";
import type {
  AdoptionTab, ContextPayload, CoxPayload, MapPayload,
  MatrixPayload, OptionsPayload, PatternsPayload, SearchPayload,
  StateEntry, TopicEntry, YearEntry,
} from "./types";

export interface AppElements {
  menus: HTMLElement;
  search: HTMLElement;
  arcChart: HTMLElement;
  matrix: HTMLElement;
  map: HTMLElement;
  tabs: HTMLElement;
  tabBody: HTMLElement;
  tooltip: HTMLElement;
}

export class App {
  store!: Store;
  options!: OptionsPayload;
  private fetcher: SequencedFetcher;
  private payloads: {
    map: MapPayload | null;
    matrix: MatrixPayload | null;
    patterns: PatternsPayload | null;
    tab: unknown;
  } = { map: null, matrix: null, patterns: null, tab: null };
  private coxCache = new Map<string, CoxPayload>();
  private ready: Promise<void>;

  constructor(private el: AppElements, private source: DataSource) {
    this.fetcher = new SequencedFetcher(source);
    this.ready = this.boot();
  }

  whenReady(): Promise<void> {
    return this.ready;
  }

  private async boot(): Promise<void> {
    this.options = (await this.source.getJson("/api/config/options", {})) as OptionsPayload;
    this.store = new Store(this.options);
    this.store.subscribe((state, changed) => {
      if (changed.has("config")) void this.refreshConfigViews();
      if (changed.has("hover")) void this.refreshHoverViews();
      if (changed.has("activeTab") || changed.has("contextSelection") || changed.has("sharedY")) {
        void this.refreshTab();
      }
      if (changed.has("mapStyle")) this.renderMapView();
      if (changed.has("config")) renderMenus(this.el.menus, this.options, this.store);
      if (changed.has("activeTab")) this.renderTabBar();
    });
    renderMenus(this.el.menus, this.options, this.store);
    this.renderSearchBox();
    this.renderTabBar();
    await this.refreshConfigViews();
  }

  // -- data refresh ---------------------------------------------------------

  private async refreshConfigViews(): Promise<void> {
    const params = configParams(this.store.state.config);
    const [map, matrix] = await Promise.all([
      this.fetcher.get<MapPayload>("map", "/api/map", params),
      this.fetcher.get<MatrixPayload>("matrix", "/api/matrix", params),
    ]);
    if (map) this.payloads.map = map;
    if (matrix) this.payloads.matrix = matrix;
    await Promise.all([this.refreshHoverViews(), this.refreshTab()]);
    this.renderArc();
    this.renderMatrixView();
    this.renderMapView();
  }

  private async refreshHoverViews(): Promise<void> {
    const hover = this.store.state.hover;
    if (hover.kind === "none") {
      this.payloads.patterns = null;
    } else {
      const params = configParams(this.store.state.config);
      if (hover.kind === "state") {
        params.state = hover.state;
      } else if (hover.kind === "cell") {
        params.state = hover.state;
        if (this.store.state.config.topic === "ALL") params.cell_topic = hover.topic;
      } else {
        params.policy = hover.policy;
        if (hover.state) params.state = hover.state;
      }
      const patterns = await this.fetcher.get<PatternsPayload>("patterns", "/api/patterns", params);
      if (patterns !== null) this.payloads.patterns = patterns;
      else return; // superseded; a newer refresh will render
    }
    this.renderArc();
    this.renderMapView();
    await this.refreshTab();
  }

  private async refreshTab(): Promise<void> {
    const state = this.store.state;
    const tab = state.activeTab;
    const params = configParams(state.config);
    if (tab === "context") {
      const sel = state.contextSelection;
      if (!sel.policy || !sel.factor) {
        this.payloads.tab = null;
        this.renderTabBody();
        return;
      }
      params.policy = sel.policy;
      if (sel.state) params.context_state = sel.state;
      params.factor = sel.factor;
    } else {
      const hover = state.hover;
      if (hover.kind === "state" || hover.kind === "cell") params.focus = hover.state;
    }
    const body = await this.fetcher.get<unknown>(`tab:${tab}`, `/api/adoptions/${tab}`, params);
    if (body !== null) {
      this.payloads.tab = body;
      this.renderTabBody();
    }
  }

  // -- rendering --------------------------------------------------------------

  private stateOrder(): string[] {
    return this.payloads.map?.order ?? this.options.states;
  }

  private renderArc(): void {
    renderArcChart(this.el.arcChart, this.stateOrder(), this.payloads.map,
      this.payloads.patterns, {
        onStateHover: (s) => this.hoverState(s),
        onStateLeave: () => this.unhover(),
      });
  }

  private renderMatrixView(): void {
    renderMatrix(this.el.matrix, this.payloads.matrix, {
      onCellHover: (state, rowKey, kind) => {
        if (kind === "topics") this.hoverCell(state, rowKey);
        else this.hoverPolicyCircle(rowKey, state);
      },
      onCellLeave: () => this.unhover(),
      onPolicyLabelClick: (pid) => this.shortcutToContext(pid),
    });
    this.attachPolicyTooltips();
  }

  private renderMapView(): void {
    renderMap(this.el.map, this.store.state.mapStyle, this.payloads.map,
      this.payloads.patterns, {
        onStateHover: (s) => this.hoverState(s),
        onStateLeave: () => this.unhover(),
      });
  }

  private renderTabBar(): void {
    const tabs: AdoptionTab[] = ["year", "state", "topic", "context"];
    clear(this.el.tabs);
    for (const tab of tabs) {
      const btn = document.createElement("button");
      btn.textContent = `By ${tab[0].toUpperCase()}${tab.slice(1)}`;
      btn.dataset.tab = tab;
      btn.className = tab === this.store.state.activeTab ? "tab active" : "tab";
      btn.addEventListener("click", () => this.store.update({ activeTab: tab }));
      this.el.tabs.appendChild(btn);
    }
  }

  private renderTabBody(): void {
    const tab = this.store.state.activeTab;
    const body = this.payloads.tab as { series?: unknown[] } | ContextPayload | null;
    clear(this.el.tabBody);
    if (tab === "context") {
      this.renderContextMenus();
      const chart = document.createElement("div");
      chart.className = "context-chart";
      this.el.tabBody.appendChild(chart);
      renderContextTab(chart, (body as ContextPayload) ?? null);
      return;
    }
    const series = (body && "series" in body ? body.series : []) ?? [];
    if (tab === "year") {
      renderYearTab(this.el.tabBody, series as YearEntry[], this.store.state.sharedY);
    } else if (tab === "state") {
      renderStateTab(this.el.tabBody, series as StateEntry[], this.store.state.sharedY);
    } else {
      renderTopicTab(this.el.tabBody, series as TopicEntry[]);
    }
  }

  private renderContextMenus(): void {
    const sel = this.store.state.contextSelection;
    const wrap = document.createElement("div");
    wrap.className = "context-menus";

    const policySelect = document.createElement("select");
    policySelect.id = "context-policy";
    const policies = this.payloads.matrix?.kind === "policies"
      ? this.payloads.matrix.rows.map((r) => ({ id: r.key, label: r.label }))
      : sel.policy ? [{ id: sel.policy, label: sel.policy }] : [];
    for (const p of policies) {
      const o = document.createElement("option");
      o.value = p.id;
      o.textContent = p.label;
      policySelect.appendChild(o);
    }
    if (sel.policy) policySelect.value = sel.policy;
    policySelect.addEventListener("change", () => this.store.update({
      contextSelection: { ...sel, policy: policySelect.value },
    }));

    const stateSelect = document.createElement("select");
    stateSelect.id = "context-state";
    for (const s of ["", ...this.options.states]) {
      const o = document.createElement("option");
      o.value = s;
      o.textContent = s || "(none)";
      stateSelect.appendChild(o);
    }
    stateSelect.value = sel.state ?? "";
    stateSelect.addEventListener("change", () => this.store.update({
      contextSelection: { ...sel, state: stateSelect.value || null },
    }));

    const factorSelect = document.createElement("select");
    factorSelect.id = "context-factor";
    for (const f of this.options.methods.ContextualFactor ?? []) {
      const o = document.createElement("option");
      o.value = f;
      o.textContent = f;
      factorSelect.appendChild(o);
    }
    if (sel.factor) factorSelect.value = sel.factor;
    factorSelect.addEventListener("change", () => this.store.update({
      contextSelection: { ...sel, factor: factorSelect.value },
    }));

    wrap.append(policySelect, stateSelect, factorSelect);
    this.el.tabBody.appendChild(wrap);
  }

  private renderSearchBox(): void {
    const input = document.createElement("input");
    input.type = "search";
    input.id = "search-input";
    input.placeholder = "Search policies…";
    const results = document.createElement("div");
    results.id = "search-results";
    input.addEventListener("input", () => void this.runSearch(input.value, results));
    clear(this.el.search);
    this.el.search.append(input, results);
  }

  private async runSearch(q: string, results: HTMLElement): Promise<void> {
    if (!q) {
      clear(results);
      return;
    }
    const body = await this.fetcher.get<SearchPayload>("search", "/api/search", { q });
    if (body === null) return;
    clear(results);
    for (const group of body.groups) {
      const head = document.createElement("div");
      head.className = "search-topic";
      head.textContent = group.topic;
      results.appendChild(head);
      for (const p of group.policies) {
        const item = document.createElement("div");
        item.className = "search-policy";
        item.dataset.policyId = p.policy_id;
        item.textContent = p.display_name;
        item.addEventListener("click", () => {
          this.store.configure({ topic: group.topic });
          this.shortcutToContext(p.policy_id);
        });
        results.appendChild(item);
      }
    }
  }

  private attachPolicyTooltips(): void {
    for (const label of this.el.matrix.querySelectorAll(".policy-label")) {
      label.addEventListener("mouseenter", () => {
        void this.showCoxTooltip((label as SVGTextElement).dataset.key
          ?? label.getAttribute("data-key")!);
      });
      label.addEventListener("mouseleave", () => {
        this.el.tooltip.style.display = "none";
      });
    }
  }

  private async showCoxTooltip(policyId: string): Promise<void> {
    let payload = this.coxCache.get(policyId);
    if (!payload) {
      payload = (await this.source.getJson(`/api/cox/${policyId}`, {})) as CoxPayload;
      this.coxCache.set(policyId, payload);
    }
    const tip = this.el.tooltip;
    clear(tip);
    tip.style.display = "block";
    tip.dataset.policyId = policyId;
    if (payload.error || !payload.factors) {
      tip.textContent = payload.detail ?? payload.error ?? "no fit available";
      return;
    }
    const list = document.createElement("ul");
    list.className = "cox-report";
    for (const f of payload.factors) {
      const li = document.createElement("li");
      li.dataset.factor = f.factor;
      const marker = f.significant ? " *" : "";
      li.textContent = f.dropped
        ? `${f.factor}: dropped (${f.dropped})`
        : `${f.factor}: ${f.hazard_ratio.toFixed(4)}${marker}`;
      list.appendChild(li);
    }
    tip.appendChild(list);
  }

  // -- hover transitions -------------------------------------------------------

  hoverState(state: string): void {
    this.store.hover({ kind: "state", state });
  }

  hoverCell(state: string, topic: string): void {
    this.store.hover({ kind: "cell", state, topic });
  }

  hoverPolicyCircle(policy: string, state: string): void {
    this.store.hover({ kind: "policy", policy, state });
  }

  unhover(): void {
    this.store.clearHover();
  }

  shortcutToContext(policyId: string): void {
    const factors = this.options.methods.ContextualFactor ?? [];
    const current = this.store.state.contextSelection;
    this.store.update({
      contextSelection: {
        policy: policyId,
        state: current.state,
        factor: current.factor ?? (factors.length ? factors[0] : null),
      },
      activeTab: "context",
    });
  }
}

export function createApp(root: HTMLElement, source: DataSource): App {
  root.innerHTML = `
    <header>
      <div id="menus"></div>
      <div id="search"></div>
    </header>
    <section id="arc-chart"></section>
    <div class="middle">
      <section id="matrix"></section>
      <section id="map"></section>
    </div>
    <section id="adoptions">
      <nav id="tabs"></nav>
      <div id="tab-body"></div>
    </section>
    <div id="tooltip" style="display:none"></div>
  `;
  const el: AppElements = {
    menus: root.querySelector("#menus")!,
    search: root.querySelector("#search")!,
    arcChart: root.querySelector("#arc-chart")!,
    matrix: root.querySelector("#matrix")!,
    map: root.querySelector("#map")!,
    tabs: root.querySelector("#tabs")!,
    tabBody: root.querySelector("#tab-body")!,
    tooltip: root.querySelector("#tooltip")!,
  };
  return new App(el, source);
}
