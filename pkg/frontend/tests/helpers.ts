/** Test scaffolding: a DataSource backed by fixtures captured from the real
 * API (scripts/make_fixtures.py), with per-request overrides and optional
 * manual resolution for sequencing tests. */

import type { DataSource } from "../src/api";

import optionsFx from "./fixtures/options.json";
import mapFx from "./fixtures/map.json";
import mapDescFx from "./fixtures/map_desc.json";
import matrixAllFx from "./fixtures/matrix_all.json";
import matrixAllDescFx from "./fixtures/matrix_all_desc.json";
import matrixTopicFx from "./fixtures/matrix_topic.json";
import patternsStateFx from "./fixtures/patterns_state.json";
import patternsCellFx from "./fixtures/patterns_cell.json";
import adoptionsYearFx from "./fixtures/adoptions_year.json";
import adoptionsStateFx from "./fixtures/adoptions_state.json";
import adoptionsStateDescFx from "./fixtures/adoptions_state_desc.json";
import adoptionsTopicFx from "./fixtures/adoptions_topic.json";
import adoptionsContextFx from "./fixtures/adoptions_context.json";
import coxFx from "./fixtures/cox.json";
import searchFx from "./fixtures/search.json";
import metaFx from "./fixtures/meta.json";

export const FIXTURES = {
  options: optionsFx,
  map: mapFx,
  mapDesc: mapDescFx,
  matrixAll: matrixAllFx,
  matrixAllDesc: matrixAllDescFx,
  matrixTopic: matrixTopicFx,
  patternsState: patternsStateFx,
  patternsCell: patternsCellFx,
  adoptionsYear: adoptionsYearFx,
  adoptionsState: adoptionsStateFx,
  adoptionsStateDesc: adoptionsStateDescFx,
  adoptionsTopic: adoptionsTopicFx,
  adoptionsContext: adoptionsContextFx,
  cox: coxFx,
  search: searchFx,
  meta: metaFx,
};

export class FakeSource implements DataSource {
  calls: { path: string; params: Record<string, string> }[] = [];

  async getJson(path: string, params: Record<string, string>): Promise<unknown> {
    this.calls.push({ path, params });
    const desc = params.state_sort === "measurement-desc";
    if (path === "/api/config/options") return FIXTURES.options;
    if (path === "/api/map") return desc ? FIXTURES.mapDesc : FIXTURES.map;
    if (path === "/api/matrix") {
      if (params.topic && params.topic !== "ALL") return FIXTURES.matrixTopic;
      return desc ? FIXTURES.matrixAllDesc : FIXTURES.matrixAll;
    }
    if (path === "/api/patterns") {
      if (!params.state) return { upper: [], lower: [], focus: { state: null, cell_topic: null, policy: null } };
      return params.cell_topic ? FIXTURES.patternsCell : FIXTURES.patternsState;
    }
    if (path === "/api/adoptions/year") return FIXTURES.adoptionsYear;
    if (path === "/api/adoptions/state") {
      return desc ? FIXTURES.adoptionsStateDesc : FIXTURES.adoptionsState;
    }
    if (path === "/api/adoptions/topic") return FIXTURES.adoptionsTopic;
    if (path === "/api/adoptions/context") return FIXTURES.adoptionsContext;
    if (path.startsWith("/api/cox/")) return FIXTURES.cox;
    if (path === "/api/search") return FIXTURES.search;
    throw new Error(`no fixture for ${path}`);
  }
}

/** Source whose responses resolve only when the test says so. */
export class ManualSource implements DataSource {
  pending: { path: string; resolve: (v: unknown) => void }[] = [];

  getJson(path: string): Promise<unknown> {
    return new Promise((resolve) => {
      this.pending.push({ path, resolve });
    });
  }
}

export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((r) => setTimeout(r, 0));
  }
}
