/** Data access: live API or exported static bundle, plus response
 * sequencing so stale answers never reach the views. */

import type { ViewConfig } from "./types";

export interface DataSource {
  getJson(path: string, params: Record<string, string>): Promise<unknown>;
}

export class HttpSource implements DataSource {
  constructor(private base: string = "") {}

  async getJson(path: string, params: Record<string, string>): Promise<unknown> {
    const qs = new URLSearchParams(params).toString();
    const url = this.base + path + (qs ? `?${qs}` : "");
    const resp = await fetch(url);
    if (!resp.ok && resp.status >= 500) {
      throw new Error(`${path}: HTTP ${resp.status}`);
    }
    return resp.json();
  }
}

export function configParams(config: ViewConfig): Record<string, string> {
  const params: Record<string, string> = {
    topic: config.topic,
    from: String(config.from),
    to: String(config.to),
    method: config.method,
    measurement: config.measurement,
    state_sort: config.stateSort,
    policy_sort: config.policySort,
  };
  if (config.method === "ContextualFactor") {
    params.basis = config.basis;
    if (config.basis === "one-year" && config.basisYear !== null) {
      params.basis_year = String(config.basisYear);
    }
  }
  if (config.policySort === "policy-activity" && config.activityState) {
    params.activity_state = config.activityState;
  }
  return params;
}

/** Per-key monotonic sequencing: the resolved value is null when a newer
 * request for the same key was issued meanwhile. */
export class SequencedFetcher {
  private seq = new Map<string, number>();

  constructor(private source: DataSource) {}

  async get<T>(key: string, path: string, params: Record<string, string>): Promise<T | null> {
    const ticket = (this.seq.get(key) ?? 0) + 1;
    this.seq.set(key, ticket);
    const body = (await this.source.getJson(path, params)) as T;
    if (this.seq.get(key) !== ticket) {
      return null; // superseded while in flight
    }
    return body;
  }
}

/** Read-only source over a `policydiff export` bundle: patterns are
 * reconstructed client-side from the bundled networks; endpoints the bundle
 * cannot answer return empty payloads. */
export class BundleSource implements DataSource {
  constructor(private bundle: any) {}

  async getJson(path: string, params: Record<string, string>): Promise<unknown> {
    if (path === "/api/config/options") return this.bundle.options;
    if (path === "/api/map") {
      return this.bundle.metrics[params.measurement] ?? this.bundle.metrics["Degree"];
    }
    if (path === "/api/matrix") {
      const matrices = this.bundle.matrices ?? { ALL: this.bundle.matrix };
      return matrices[params.topic ?? "ALL"] ?? this.bundle.matrix;
    }
    if (path.startsWith("/api/adoptions/")) {
      const tab = path.split("/").pop() as string;
      return this.bundle.adoptions[tab] ?? { tab, series: [] };
    }
    if (path === "/api/patterns") return this.patterns(params);
    if (path.startsWith("/api/cox/")) {
      return { policy_id: path.split("/").pop(), error: "demo_mode", detail: "unavailable offline" };
    }
    if (path === "/api/search") return this.search(params.q ?? "");
    return {};
  }

  private network(topic: string): any {
    return this.bundle.networks[topic] ?? this.bundle.networks.ALL;
  }

  private patterns(params: Record<string, string>) {
    const state = params.state;
    const topic = params.topic && params.topic !== "ALL" ? params.topic : null;
    const upper = state ? tagEdges(this.network(topic ?? "ALL").edges, state) : [];
    let lower: any[] = [];
    if (state && !topic && params.cell_topic) {
      lower = tagEdges(this.network(params.cell_topic).edges, state);
    } else if (state && topic) {
      lower = tieEdges(this.network(topic).parents, state);
    }
    return { upper, lower, focus: { state: state ?? null, cell_topic: params.cell_topic ?? null, policy: null } };
  }

  private search(q: string) {
    const needle = q.toLowerCase();
    const groups = new Map<string, { policy_id: string; display_name: string }[]>();
    const matrices = this.bundle.matrices ?? {};
    for (const [topic, matrix] of Object.entries<any>(matrices)) {
      if (topic === "ALL" || matrix.kind !== "policies") continue;
      for (const row of matrix.rows) {
        if (row.label.toLowerCase().includes(needle) || topic.toLowerCase().includes(needle)) {
          if (!groups.has(topic)) groups.set(topic, []);
          groups.get(topic)!.push({ policy_id: row.key, display_name: row.label });
        }
      }
    }
    return {
      keyword: q,
      groups: [...groups.keys()].sort().map((t) => ({ topic: t, policies: groups.get(t)! })),
    };
  }
}

function tagEdges(edges: { source: string; target: string }[], state: string) {
  const out = new Set<string>();
  const inn = new Set<string>();
  for (const e of edges) {
    if (e.source === state) out.add(e.target);
    else if (e.target === state) inn.add(e.source);
  }
  const partners = [...new Set([...out, ...inn])].sort();
  return partners.map((p) => {
    if (out.has(p) && inn.has(p)) return { source: state, target: p, relation: "bidirectional" };
    if (out.has(p)) return { source: state, target: p, relation: "outgoing" };
    return { source: p, target: state, relation: "incoming" };
  });
}

function tieEdges(parents: Record<string, Record<string, string>>, state: string) {
  const inbound = new Map<string, number>();
  const outbound = new Map<string, number>();
  for (const assignment of Object.values(parents)) {
    for (const [tgt, src] of Object.entries(assignment)) {
      if (src === "__background__") continue;
      if (tgt === state) inbound.set(src, (inbound.get(src) ?? 0) + 1);
      else if (src === state) outbound.set(tgt, (outbound.get(tgt) ?? 0) + 1);
    }
  }
  const partners = [...new Set([...inbound.keys(), ...outbound.keys()])].sort();
  return partners.map((p) => {
    const nIn = inbound.get(p) ?? 0;
    const nOut = outbound.get(p) ?? 0;
    const relation = nIn && nOut ? "bidirectional" : nOut ? "outgoing" : "incoming";
    const [source, target] = relation === "incoming" ? [p, state] : [state, p];
    return { source, target, relation, count: nIn + nOut };
  });
}
