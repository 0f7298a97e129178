"""Read-only JSON API over cached analysis snapshots.

Every endpoint is a pure function of (data version, view configuration,
focus): identical requests produce byte-identical bodies. Expensive
artifacts (inferred networks, hazard fits) are built lazily, once per key
(single-flight), kept in memory, and persisted content-addressed under
DATA_DIR/cache so restarts stay warm. Computational failures inside a fit
are legitimate analytical outcomes and come back as 200 payloads with an
error field; bad requests are 4xx with {error, detail}.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles

from . import metrics as met
from .cascade import adoption_stats, build_cascades, policy_activity_order
from .constants import DEFAULT_YEAR_RANGE, STATE_CODES, TOPIC_ALL
from .errors import (
    PolicyDiffError,
    SurvivalError,
    UnknownFactor,
    UnknownFocus,
    UnknownPolicy,
    UnknownState,
    UnknownTopic,
    YearOutOfPanel,
)
from .ingest import (
    AdoptionTable,
    CovariatePanel,
    filter_adoptions,
    impute_covariates,
    load_adoption_table,
    load_panel,
)
from .netinf import DiffusionNetwork, InferenceParams, infer_network, policy_source_ties
from .survival import build_person_periods, fit_cox, hazard_report

CENTRALITY_MEASUREMENTS = ("Degree", "In-Degree", "Out-Degree", "Closeness", "PageRank")
INNOVATIVENESS_MEASUREMENT = "Static State Innovativeness"
METHODS = ("NetworkCentrality", "StaticInnovativeness", "ContextualFactor")
BASES = ("all-range", "years-range", "one-year")
STATE_SORTS = ("alphabetical", "measurement-desc")
POLICY_SORTS = ("alphabetical", "total-adoptions-desc", "policy-activity")


def canonical_json(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False).encode()


class BadRequest(PolicyDiffError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


@dataclass(frozen=True)
class ViewConfig:
    topic: str = TOPIC_ALL
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE
    method: str = "NetworkCentrality"
    measurement: str = "Degree"
    basis: str = "years-range"
    basis_year: int | None = None
    state_sort: str = "alphabetical"
    policy_sort: str = "alphabetical"
    activity_state: str | None = None

    def cache_key(self) -> str:
        return json.dumps(
            [self.topic, self.year_range, self.method, self.measurement,
             self.basis, self.basis_year, self.state_sort, self.policy_sort,
             self.activity_state],
            separators=(",", ":"),
        )


@dataclass
class DataBundle:
    table: AdoptionTable
    panel: CovariatePanel          # imputed over the panel's full span
    version: str
    raw_panel: CovariatePanel | None = None


def load_bundle(data_dir: str | Path) -> DataBundle:
    data_dir = Path(data_dir)
    table_path = data_dir / "adoption_table.jsonl"
    panel_path = data_dir / "covariate_panel.json"
    if not table_path.exists():
        raise FileNotFoundError(f"{table_path} missing; run `policydiff ingest` first")
    table = load_adoption_table(table_path)
    h = hashlib.sha256(table_path.read_bytes())
    raw_panel = None
    panel = None
    if panel_path.exists():
        raw_panel = load_panel(panel_path)
        panel = impute_covariates(raw_panel, (raw_panel.year_start, raw_panel.year_end))
        h.update(panel_path.read_bytes())
    return DataBundle(table=table, panel=panel, version=h.hexdigest()[:16], raw_panel=raw_panel)


class AnalysisService:
    """Owns the loaded data and every derived, cacheable artifact."""

    def __init__(self, bundle: DataBundle, data_dir: str | Path | None = None,
                 params: InferenceParams | None = None):
        self.bundle = bundle
        self.params = params or InferenceParams()
        self.cache_dir = Path(data_dir) / "cache" if data_dir else None
        if self.cache_dir:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self._networks: dict[str, DiffusionNetwork] = {}
        self._cox: dict[str, dict] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- plumbing ----------------------------------------------------------

    def _lock_for(self, key: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(key, threading.Lock())

    def _disk_path(self, kind: str, key: str) -> Path | None:
        if not self.cache_dir:
            return None
        digest = hashlib.sha256(f"{self.bundle.version}|{kind}|{key}".encode()).hexdigest()
        return self.cache_dir / f"{digest}.json"

    # -- derived artifacts ---------------------------------------------------

    def scoped_table(self, topic: str | None, year_range: tuple[int, int]) -> AdoptionTable:
        return filter_adoptions(self.bundle.table, topic, year_range)

    def network(self, topic: str | None, year_range: tuple[int, int]) -> DiffusionNetwork:
        key = json.dumps([topic, year_range, self.params.to_dict()], sort_keys=True)
        if key in self._networks:
            return self._networks[key]
        with self._lock_for("net:" + key):
            if key in self._networks:
                return self._networks[key]
            path = self._disk_path("network", key)
            if path and path.exists():
                net = DiffusionNetwork.from_json(path.read_text())
            else:
                cascades = build_cascades(self.scoped_table(topic, year_range))
                net = infer_network(cascades, self.params)
                if path:
                    path.write_text(net.to_json())
            self._networks[key] = net
            return net

    def cox_payload(self, policy_id: str) -> dict:
        if policy_id not in self.bundle.table.policies:
            raise UnknownPolicy(policy_id)
        if policy_id in self._cox:
            return self._cox[policy_id]
        with self._lock_for("cox:" + policy_id):
            if policy_id in self._cox:
                return self._cox[policy_id]
            path = self._disk_path("cox", policy_id)
            if path and path.exists():
                payload = json.loads(path.read_text())
            else:
                payload = self._compute_cox(policy_id)
                if path:
                    path.write_text(json.dumps(payload, sort_keys=True))
            self._cox[policy_id] = payload
            return payload

    def _compute_cox(self, policy_id: str) -> dict:
        if self.bundle.panel is None:
            return {"policy_id": policy_id, "error": "no_covariate_panel",
                    "detail": "no covariate panel loaded"}
        try:
            periods = build_person_periods(policy_id, self.bundle.table, self.bundle.panel)
            fit = fit_cox(periods)
        except SurvivalError as exc:
            return {"policy_id": policy_id, "error": type(exc).__name__, "detail": str(exc)}
        return {
            "policy_id": policy_id,
            "converged": fit.converged,
            "iterations": fit.iterations,
            "log_partial_likelihood": fit.log_partial_likelihood,
            "warnings": list(fit.warnings),
            "factors": hazard_report(fit),
        }

    # -- measurements --------------------------------------------------------

    def metric_vector(self, config: ViewConfig) -> met.StateMetricVector:
        topic = None if config.topic == TOPIC_ALL else config.topic
        scope = met.MetricScope(topic, config.year_range, config.basis)
        if config.method == "NetworkCentrality":
            net = self.network(topic, config.year_range)
            m = config.measurement
            if m == "Degree":
                return met.degree_centrality(net, STATE_CODES, "total", scope)
            if m == "In-Degree":
                return met.degree_centrality(net, STATE_CODES, "in", scope)
            if m == "Out-Degree":
                return met.degree_centrality(net, STATE_CODES, "out", scope)
            if m == "Closeness":
                return met.closeness_centrality(net, STATE_CODES, scope=scope)
            if m == "PageRank":
                return met.pagerank(net, STATE_CODES, scope=scope)
            raise BadRequest(f"measurement {m!r} invalid for NetworkCentrality")
        if config.method == "StaticInnovativeness":
            return met.static_innovativeness(self.bundle.table, config.year_range, topic)
        if config.method == "ContextualFactor":
            if self.bundle.panel is None:
                raise BadRequest("no covariate panel loaded")
            return met.contextual_measurement(
                self.bundle.panel, config.measurement, config.basis,
                year_range=config.year_range, basis_year=config.basis_year)
        raise BadRequest(f"unknown method {config.method!r}")

    def state_order(self, config: ViewConfig) -> list[str]:
        if config.state_sort == "alphabetical":
            return list(STATE_CODES)
        vec = self.metric_vector(config)
        return [s for s in vec.sorted_states() if s in STATE_CODES]

    # -- view payloads ---------------------------------------------------------

    def config_options(self) -> dict:
        table = self.bundle.table
        years = [r.year for r in table.records]
        factors = list(self.bundle.panel.factors) if self.bundle.panel else []
        return {
            "topics": list(table.topics),
            "states": list(STATE_CODES),
            "year_bounds": [min(years), max(years)] if years else list(DEFAULT_YEAR_RANGE),
            "methods": {
                "NetworkCentrality": list(CENTRALITY_MEASUREMENTS),
                "StaticInnovativeness": [INNOVATIVENESS_MEASUREMENT],
                "ContextualFactor": factors,
            },
            "bases": list(BASES),
            "state_sorts": list(STATE_SORTS),
            "policy_sorts": list(POLICY_SORTS),
            "defaults": {
                "topic": TOPIC_ALL,
                "year_range": list(DEFAULT_YEAR_RANGE),
                "method": "NetworkCentrality",
                "measurement": "Degree",
                "basis": "years-range",
                "state_sort": "alphabetical",
                "policy_sort": "alphabetical",
            },
            "data_version": self.bundle.version,
        }

    @staticmethod
    def _tag_partner_edges(edge_set: set[tuple[str, str]], state: str) -> list[dict]:
        partners: dict[str, dict[str, bool]] = {}
        for s, t in edge_set:
            if s == state:
                partners.setdefault(t, {"out": False, "in": False})["out"] = True
            elif t == state:
                partners.setdefault(s, {"out": False, "in": False})["in"] = True
        out = []
        for other in sorted(partners):
            f = partners[other]
            if f["out"] and f["in"]:
                out.append({"source": state, "target": other, "relation": "bidirectional"})
            elif f["out"]:
                out.append({"source": state, "target": other, "relation": "outgoing"})
            else:
                out.append({"source": other, "target": state, "relation": "incoming"})
        return out

    def _tie_edges(self, ties: dict[str, dict[str, str]], pids: list[str], state: str) -> list[dict]:
        inbound: dict[str, int] = {}
        outbound: dict[str, int] = {}
        for pid in pids:
            for tgt, src in ties.get(pid, {}).items():
                if tgt == state:
                    inbound[src] = inbound.get(src, 0) + 1
                elif src == state:
                    outbound[tgt] = outbound.get(tgt, 0) + 1
        out = []
        for other in sorted(set(inbound) | set(outbound)):
            n_in, n_out = inbound.get(other, 0), outbound.get(other, 0)
            if n_in and n_out:
                relation = "bidirectional"
            elif n_out:
                relation = "outgoing"
            else:
                relation = "incoming"
            src, tgt = (other, state) if relation == "incoming" else (state, other)
            out.append({"source": src, "target": tgt, "relation": relation,
                        "count": n_in + n_out})
        return out

    def patterns(self, config: ViewConfig, state: str | None,
                 cell_topic: str | None, policy: str | None) -> dict:
        table = self.bundle.table
        if state is not None and state not in STATE_CODES:
            raise UnknownState(state)
        if cell_topic is not None and cell_topic not in table.topics:
            raise UnknownTopic(cell_topic)
        if policy is not None and policy not in table.policies:
            raise UnknownPolicy(policy)

        topic = None if config.topic == TOPIC_ALL else config.topic
        upper: list[dict] = []
        lower: list[dict] = []

        if state is not None:
            upper_net = self.network(topic, config.year_range)
            upper = self._tag_partner_edges(upper_net.edge_set(), state)

        if policy is not None:
            ties = self._topic_ties(topic, config.year_range)
            tie_map = ties.get(policy, {})
            for tgt in sorted(tie_map):
                src = tie_map[tgt]
                if state is None:
                    lower.append({"source": src, "target": tgt, "relation": "directed"})
                elif tgt == state:
                    lower.append({"source": src, "target": tgt, "relation": "incoming"})
                elif src == state:
                    lower.append({"source": src, "target": tgt, "relation": "outgoing"})
        elif state is not None and topic is None and cell_topic is not None:
            cell_net = self.network(cell_topic, config.year_range)
            lower = self._tag_partner_edges(cell_net.edge_set(), state)
        elif state is not None and topic is not None:
            ties = self._topic_ties(topic, config.year_range)
            pids = sorted(self.scoped_table(topic, config.year_range).policies)
            lower = self._tie_edges(ties, pids, state)

        return {"upper": upper, "lower": lower,
                "focus": {"state": state, "cell_topic": cell_topic, "policy": policy}}

    def _topic_ties(self, topic: str | None, year_range: tuple[int, int]) -> dict[str, dict[str, str]]:
        cascades = build_cascades(self.scoped_table(topic, year_range))
        net = self.network(topic, year_range)
        return policy_source_ties(net, cascades)

    def matrix(self, config: ViewConfig) -> dict:
        topic = None if config.topic == TOPIC_ALL else config.topic
        scoped = self.scoped_table(topic, config.year_range)
        order = self.state_order(config)

        if topic is None:
            row_keys = self._ordered_topics(scoped, config)
            rows = []
            for t in row_keys:
                creations = {s: 0 for s in STATE_CODES}
                adoptions = {s: 0 for s in STATE_CODES}
                for r in scoped.records:
                    if scoped.policies[r.policy_id].topic != t:
                        continue
                    if r.year == scoped.policies[r.policy_id].first_year:
                        creations[r.state] += 1
                    else:
                        adoptions[r.state] += 1
                rows.append(self._matrix_row(t, t, creations, adoptions, order, None))
            return {"kind": "topics", "states": order, "rows": rows}

        row_pids = self._ordered_policies(scoped, config)
        rows = []
        for pid in row_pids:
            meta = scoped.policies[pid]
            creations = {s: 0 for s in STATE_CODES}
            adoptions = {s: 0 for s in STATE_CODES}
            circles: dict[str, str] = {}
            for r in scoped.records:
                if r.policy_id != pid:
                    continue
                if r.year == meta.first_year:
                    creations[r.state] += 1
                    circles[r.state] = "initiator"
                else:
                    adoptions[r.state] += 1
                    circles[r.state] = "adopter"
            rows.append(self._matrix_row(pid, meta.display_name, creations, adoptions, order, circles))
        return {"kind": "policies", "states": order, "rows": rows}

    @staticmethod
    def _matrix_row(key, label, creations, adoptions, order, circles):
        cbins = met.bin_values({s: float(creations[s]) for s in STATE_CODES})
        abins = met.bin_values({s: float(adoptions[s]) for s in STATE_CODES})
        cells = []
        for s in order:
            cell = {
                "state": s,
                "creations": creations[s],
                "adoptions": adoptions[s],
                "creation_bin": cbins[s],
                "adoption_bin": abins[s],
            }
            if circles is not None:
                cell["circle"] = circles.get(s)
            cells.append(cell)
        return {"key": key, "label": label, "cells": cells}

    def _ordered_topics(self, scoped: AdoptionTable, config: ViewConfig) -> list[str]:
        topics = list(scoped.topics)
        if config.policy_sort == "alphabetical":
            return sorted(topics)
        if config.policy_sort == "total-adoptions-desc":
            counts = {t: 0 for t in topics}
            for r in scoped.records:
                counts[scoped.policies[r.policy_id].topic] += 1
            return sorted(topics, key=lambda t: (-counts[t], t))
        if config.policy_sort == "policy-activity":
            if not config.activity_state:
                raise BadRequest("policy-activity sort requires activity_state")
            ordered = policy_activity_order(scoped, config.activity_state)
            return [t for t in ordered if t in topics]
        raise BadRequest(f"unknown policy_sort {config.policy_sort!r}")

    def _ordered_policies(self, scoped: AdoptionTable, config: ViewConfig) -> list[str]:
        pids = list(scoped.policies)
        name = {pid: scoped.policies[pid].display_name for pid in pids}
        if config.policy_sort == "alphabetical":
            return sorted(pids, key=lambda p: (name[p], p))
        if config.policy_sort == "total-adoptions-desc":
            counts = {pid: 0 for pid in pids}
            for r in scoped.records:
                counts[r.policy_id] += 1
            return sorted(pids, key=lambda p: (-counts[p], name[p], p))
        if config.policy_sort == "policy-activity":
            if not config.activity_state:
                raise BadRequest("policy-activity sort requires activity_state")
            topic = None if config.topic == TOPIC_ALL else config.topic
            return policy_activity_order(scoped, config.activity_state, topic)
        raise BadRequest(f"unknown policy_sort {config.policy_sort!r}")

    def adoption_view(self, config: ViewConfig, tab: str, focus: str | None,
                      context: tuple[str | None, str | None, str | None] = (None, None, None)) -> dict:
        topic = None if config.topic == TOPIC_ALL else config.topic
        scoped = self.scoped_table(topic, config.year_range)

        if tab == "context":
            return self._context_tab(*context)

        stats = adoption_stats(scoped, focus) if focus else adoption_stats(scoped)
        if tab == "year":
            series = [{"year": y, "creations": c, "adoptions": a}
                      for y, (c, a) in stats.by_year.items()]
            return {"tab": "year", "series": series}
        if tab == "state":
            order = self.state_order(config)
            series = []
            for s in order:
                c, a = stats.by_state.get(s, (0, 0))
                series.append({"state": s, "creations": c, "adoptions": a})
            return {"tab": "state", "series": series}
        if tab == "topic":
            payload = []
            if focus is not None:
                from .cascade import resolve_focus
                kind, value = resolve_focus(scoped, focus)
            else:
                kind, value = None, None
            year_of = (
                {r.policy_id: r.year for r in scoped.records if r.state == value}
                if kind == "state" else {}
            )
            for t in sorted(scoped.topics):
                pids = [pid for pid, p in scoped.policies.items() if p.topic == t]
                if kind == "state":
                    introduced = sum(
                        1 for pid in pids
                        if pid in year_of and year_of[pid] == scoped.policies[pid].first_year
                    )
                    adopted = sum(1 for pid in pids if pid in year_of) - introduced
                    payload.append({"topic": t, "introduced": introduced, "adopted": adopted})
                else:
                    payload.append({"topic": t, "policies": len(pids)})
            return {"tab": "topic", "series": payload}
        raise BadRequest(f"unknown adoption tab {tab!r}")

    def _context_tab(self, policy: str | None, state: str | None, factor: str | None) -> dict:
        table = self.bundle.table
        panel = self.bundle.panel
        if panel is None:
            raise BadRequest("no covariate panel loaded")
        if policy is None or factor is None:
            raise BadRequest("context tab requires policy and factor")
        if policy not in table.policies:
            raise UnknownPolicy(policy)
        if factor not in panel.factors:
            raise UnknownFactor(factor)
        if state is not None and state not in STATE_CODES:
            raise UnknownState(state)

        meta = table.policies[policy]
        y0, y1 = meta.first_year, meta.last_year
        if y0 < panel.year_start or y1 > panel.year_end:
            raise YearOutOfPanel(y0 if y0 < panel.year_start else y1)
        years = list(range(y0, y1 + 1))
        fi = panel.factors.index(factor)
        a, b = y0 - panel.year_start, y1 - panel.year_start + 1

        adopters = {r.state: r.year for r in table.records if r.policy_id == policy}
        series = []
        for s in sorted(adopters):
            if s not in panel.states:
                continue
            si = panel.states.index(s)
            series.append({"state": s,
                           "values": [float(v) for v in panel.values[si, a:b, fi]]})
        us_mean = [float(panel.values[:, a + i, fi].mean()) for i in range(len(years))]

        boxes = []
        for s, yr in adopters.items():
            if s not in panel.states:
                continue
            si = panel.states.index(s)
            boxes.append({
                "state": s, "year": yr,
                "value": float(panel.values[si, yr - panel.year_start, fi]),
                "first_year": yr == meta.first_year,
            })
        # same-year boxes stack bottom-up in ascending factor order
        boxes.sort(key=lambda bx: (bx["year"], bx["value"], bx["state"]))
        return {
            "tab": "context", "policy": policy, "state": state, "factor": factor,
            "years": years, "series": series, "us_mean": us_mean, "boxes": boxes,
        }

    def map_view(self, config: ViewConfig) -> dict:
        vec = self.metric_vector(config)
        bins = met.quartile_bins(vec)
        return {
            "measurement": vec.measurement,
            "values": {s: vec.values.get(s, 0.0) for s in STATE_CODES},
            "bins": {s: bins.get(s, 0) for s in STATE_CODES},
            "order": self.state_order(config),
        }

    def search(self, keyword: str) -> dict:
        if not keyword:
            raise BadRequest("empty search keyword")
        q = keyword.lower()
        groups: dict[str, list[dict]] = {}
        for pid, meta in self.bundle.table.policies.items():
            if q in meta.display_name.lower() or q in meta.topic.lower():
                groups.setdefault(meta.topic, []).append(
                    {"policy_id": pid, "display_name": meta.display_name})
        return {
            "keyword": keyword,
            "groups": [
                {"topic": t, "policies": sorted(groups[t], key=lambda p: (p["display_name"], p["policy_id"]))}
                for t in sorted(groups)
            ],
        }

    def precompute_all(self, topics: bool = True, cox: bool = True) -> dict:
        """Eagerly build the overall network, every topic network, and every
        hazard fit for the default year range."""
        built = {"networks": 0, "cox_fits": 0}
        self.network(None, DEFAULT_YEAR_RANGE)
        built["networks"] += 1
        if topics:
            for t in self.bundle.table.topics:
                self.network(t, DEFAULT_YEAR_RANGE)
                built["networks"] += 1
        if cox and self.bundle.panel is not None:
            for pid in sorted(self.bundle.table.policies):
                self.cox_payload(pid)
                built["cox_fits"] += 1
        return built


def _parse_config(request: Request, service: AnalysisService) -> ViewConfig:
    q = request.query_params
    topic = q.get("topic", TOPIC_ALL)
    if topic != TOPIC_ALL and topic not in service.bundle.table.topics:
        raise UnknownTopic(topic)
    try:
        y0 = int(q.get("from", DEFAULT_YEAR_RANGE[0]))
        y1 = int(q.get("to", DEFAULT_YEAR_RANGE[1]))
    except ValueError:
        raise BadRequest("from/to must be integers") from None
    if y0 > y1:
        raise BadRequest("empty year range")
    method = q.get("method", "NetworkCentrality")
    if method not in METHODS:
        raise BadRequest(f"unknown method {method!r}")
    default_measurement = {
        "NetworkCentrality": "Degree",
        "StaticInnovativeness": INNOVATIVENESS_MEASUREMENT,
        "ContextualFactor": (service.bundle.panel.factors[0] if service.bundle.panel else ""),
    }[method]
    measurement = q.get("measurement", default_measurement)
    basis = q.get("basis", "years-range")
    if basis not in BASES:
        raise BadRequest(f"unknown basis {basis!r}")
    if basis == "one-year" and method != "ContextualFactor":
        raise BadRequest("one-year basis is only valid for ContextualFactor")
    basis_year = q.get("basis_year")
    state_sort = q.get("state_sort", "alphabetical")
    if state_sort not in STATE_SORTS:
        raise BadRequest(f"unknown state_sort {state_sort!r}")
    policy_sort = q.get("policy_sort", "alphabetical")
    if policy_sort not in POLICY_SORTS:
        raise BadRequest(f"unknown policy_sort {policy_sort!r}")
    return ViewConfig(
        topic=topic,
        year_range=(y0, y1),
        method=method,
        measurement=measurement,
        basis=basis,
        basis_year=int(basis_year) if basis_year is not None else None,
        state_sort=state_sort,
        policy_sort=policy_sort,
        activity_state=q.get("activity_state"),
    )


_NOT_FOUND = (UnknownTopic, UnknownPolicy, UnknownState, UnknownFactor, UnknownFocus)


def build_app(service: AnalysisService, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="policydiff", docs_url=None, redoc_url=None)

    def reply(payload) -> Response:
        return Response(content=canonical_json(payload), media_type="application/json")

    def fail(exc: Exception) -> Response:
        status = 404 if isinstance(exc, _NOT_FOUND) else 400
        body = {"error": type(exc).__name__, "detail": str(exc)}
        return Response(content=canonical_json(body), media_type="application/json",
                        status_code=status)

    @app.get("/api/config/options")
    def config_options():
        return reply(service.config_options())

    @app.get("/api/patterns")
    def patterns(request: Request):
        try:
            config = _parse_config(request, service)
            q = request.query_params
            return reply(service.patterns(config, q.get("state"), q.get("cell_topic"), q.get("policy")))
        except PolicyDiffError as exc:
            return fail(exc)

    @app.get("/api/matrix")
    def matrix(request: Request):
        try:
            config = _parse_config(request, service)
            return reply(service.matrix(config))
        except PolicyDiffError as exc:
            return fail(exc)

    @app.get("/api/map")
    def map_view(request: Request):
        try:
            config = _parse_config(request, service)
            return reply(service.map_view(config))
        except PolicyDiffError as exc:
            return fail(exc)

    @app.get("/api/adoptions/{tab}")
    def adoptions(tab: str, request: Request):
        try:
            config = _parse_config(request, service)
            q = request.query_params
            context = (q.get("policy"), q.get("context_state"), q.get("factor"))
            return reply(service.adoption_view(config, tab, q.get("focus"), context))
        except PolicyDiffError as exc:
            return fail(exc)

    @app.get("/api/cox/{policy_id}")
    def cox(policy_id: str):
        try:
            return reply(service.cox_payload(policy_id))
        except PolicyDiffError as exc:
            return fail(exc)

    @app.get("/api/search")
    def search(request: Request):
        try:
            return reply(service.search(request.query_params.get("q", "")))
        except PolicyDiffError as exc:
            return fail(exc)

    ui = Path(ui_dir) if ui_dir else None
    if ui and ui.is_dir():
        app.mount("/", StaticFiles(directory=str(ui), html=True), name="ui")
    return app


def serve(data_dir: str | Path, port: int | None = None, ui_dir: str | Path | None = None):
    import uvicorn
    bundle = load_bundle(data_dir)
    service = AnalysisService(bundle, data_dir)
    app = build_app(service, ui_dir=ui_dir)
    uvicorn.run(app, host="0.0.0.0", port=port or int(os.environ.get("PORT", "8080")))
