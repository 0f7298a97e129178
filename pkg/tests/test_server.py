import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from policydiff.cascade import adoption_stats, build_cascades
from policydiff.constants import STATE_CODES
from policydiff.ingest import impute_covariates, save_adoption_table, save_panel
from policydiff.metrics import bin_values
from policydiff.netinf import policy_source_ties
from policydiff.server import AnalysisService, DataBundle, ViewConfig, build_app, load_bundle

from conftest import synthetic_world


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    table, panel = synthetic_world()
    save_adoption_table(table, d / "adoption_table.jsonl")
    save_panel(panel, d / "covariate_panel.json")
    return d


@pytest.fixture(scope="module")
def service(data_dir):
    return AnalysisService(load_bundle(data_dir), data_dir)


@pytest.fixture(scope="module")
def client(service):
    return TestClient(build_app(service))


class TestOptions:
    def test_shape(self, client):
        r = client.get("/api/config/options")
        assert r.status_code == 200
        body = r.json()
        assert body["defaults"]["topic"] == "ALL"
        assert body["defaults"]["year_range"] == [1950, 2017]
        assert body["defaults"]["method"] == "NetworkCentrality"
        assert "Degree" in body["methods"]["NetworkCentrality"]
        assert len(body["states"]) == 50


class TestMatrix:
    def test_topic_rows(self, client, service):
        r = client.get("/api/matrix", params={"from": 1960, "to": 2000})
        body = r.json()
        assert body["kind"] == "topics"
        assert [row["key"] for row in body["rows"]] == sorted(service.bundle.table.topics)
        assert body["states"] == list(STATE_CODES)

    def test_policy_rows_with_circles(self, client, service):
        topic = service.bundle.table.topics[0]
        r = client.get("/api/matrix", params={"topic": topic, "from": 1960, "to": 2000})
        body = r.json()
        assert body["kind"] == "policies"
        scoped = service.scoped_table(topic, (1960, 2000))
        assert {row["key"] for row in body["rows"]} == set(scoped.policies)
        for row in body["rows"]:
            meta = scoped.policies[row["key"]]
            for cell in row["cells"]:
                if cell["circle"] == "initiator":
                    assert cell["creations"] == 1
                recs = [r2 for r2 in scoped.records
                        if r2.policy_id == row["key"] and r2.state == cell["state"]]
                if recs:
                    expected = "initiator" if recs[0].year == meta.first_year else "adopter"
                    assert cell["circle"] == expected

    def test_row_totals_reconcile_with_stats(self, client, service):
        r = client.get("/api/matrix", params={"from": 1960, "to": 2000})
        body = r.json()
        scoped = service.scoped_table(None, (1960, 2000))
        stats = adoption_stats(scoped)
        for row in body["rows"]:
            creations = sum(c["creations"] for c in row["cells"])
            adoptions = sum(c["adoptions"] for c in row["cells"])
            assert (creations, adoptions) == tuple(stats.by_topic[row["key"]])

    def test_bins_are_row_relative(self, client):
        r = client.get("/api/matrix", params={"from": 1960, "to": 2000})
        for row in r.json()["rows"]:
            cre = {c["state"]: float(c["creations"]) for c in row["cells"]}
            expected = bin_values(cre)
            got = {c["state"]: c["creation_bin"] for c in row["cells"]}
            assert got == expected

    def test_unknown_topic_404(self, client):
        r = client.get("/api/matrix", params={"topic": "No Such Topic"})
        assert r.status_code == 404
        assert r.json()["error"] == "UnknownTopic"


class TestPatterns:
    def test_edges_come_from_network(self, client, service):
        net = service.network(None, (1960, 2000))
        edge_set = net.edge_set()
        for state in ("CA", "NY", "TX"):
            r = client.get("/api/patterns", params={"state": state, "from": 1960, "to": 2000})
            for e in r.json()["upper"]:
                if e["relation"] == "outgoing":
                    assert (e["source"], e["target"]) in edge_set
                elif e["relation"] == "incoming":
                    assert (e["source"], e["target"]) in edge_set
                else:
                    assert (state, e["target"]) in edge_set and (e["target"], state) in edge_set

    def test_tags_partition_partners(self, client, service):
        net = service.network(None, (1960, 2000))
        edge_set = net.edge_set()
        state = "CA"
        r = client.get("/api/patterns", params={"state": state, "from": 1960, "to": 2000})
        partners = {(e["source"], e["target"], e["relation"]) for e in r.json()["upper"]}
        expected_partners = {t for (s, t) in edge_set if s == state} | {
            s for (s, t) in edge_set if t == state}
        assert len(partners) == len(expected_partners)

    def test_cell_focus_gives_topic_lower(self, client, service):
        topic = service.bundle.table.topics[0]
        r = client.get("/api/patterns",
                       params={"state": "CA", "cell_topic": topic, "from": 1960, "to": 2000})
        body = r.json()
        topic_net = service.network(topic, (1960, 2000)).edge_set()
        for e in body["lower"]:
            pair = (e["source"], e["target"])
            assert pair in topic_net or (pair[1], pair[0]) in topic_net

    def test_topic_config_gives_tie_lower(self, client, service):
        topic, tied_states = None, set()
        for t in service.bundle.table.topics:
            scoped = service.scoped_table(t, (1960, 2000))
            cascades = build_cascades(scoped)
            ties = policy_source_ties(service.network(t, (1960, 2000)), cascades)
            for pid, m in ties.items():
                for tgt, src in m.items():
                    tied_states.update((tgt, src))
            if tied_states:
                topic = t
                break
        assert topic is not None, "no topic scope produced any ties"
        state = sorted(tied_states)[0]
        r = client.get("/api/patterns", params={"state": state, "topic": topic,
                                                "from": 1960, "to": 2000})
        lower = r.json()["lower"]
        assert lower, "expected tie-based lower patterns"
        for e in lower:
            assert e["count"] >= 1

    def test_absent_state_empty(self, client):
        r = client.get("/api/patterns", params={"from": 3000, "to": 3001})
        body = r.json()
        assert body["upper"] == [] and body["lower"] == []


class TestMap:
    def test_values_and_bins(self, client, service):
        r = client.get("/api/map", params={"measurement": "PageRank", "from": 1960, "to": 2000})
        body = r.json()
        assert body["measurement"] == "PageRank"
        assert sum(body["values"].values()) == pytest.approx(1.0, abs=1e-9)
        assert body["bins"] == bin_values(body["values"])

    def test_measurement_sort_order(self, client):
        r = client.get("/api/map", params={"measurement": "Degree", "from": 1960, "to": 2000,
                                           "state_sort": "measurement-desc"})
        body = r.json()
        order = body["order"]
        vals = body["values"]
        keyed = [(-vals[s], s) for s in order]
        assert keyed == sorted(keyed)


class TestAdoptions:
    def test_year_tab(self, client, service):
        r = client.get("/api/adoptions/year", params={"from": 1960, "to": 2000})
        series = r.json()["series"]
        stats = adoption_stats(service.scoped_table(None, (1960, 2000)))
        assert {e["year"]: (e["creations"], e["adoptions"]) for e in series} == \
            {y: tuple(v) for y, v in stats.by_year.items()}

    def test_year_tab_empty_range(self, client):
        r = client.get("/api/adoptions/year", params={"from": 3000, "to": 3001})
        assert r.json()["series"] == []

    def test_state_tab_covers_universe(self, client):
        r = client.get("/api/adoptions/state", params={"from": 1960, "to": 2000})
        series = r.json()["series"]
        assert [e["state"] for e in series] == list(STATE_CODES)

    def test_topic_tab_split_under_state_focus(self, client, service):
        scoped = service.scoped_table(None, (1960, 2000))
        some_state = scoped.records[0].state
        r = client.get("/api/adoptions/topic", params={"from": 1960, "to": 2000,
                                                       "focus": some_state})
        for entry in r.json()["series"]:
            assert set(entry) == {"topic", "introduced", "adopted"}

    def test_context_tab(self, client, service):
        pid = sorted(service.bundle.table.policies)[0]
        r = client.get("/api/adoptions/context",
                       params={"policy": pid, "context_state": "CA", "factor": "Factor One"})
        body = r.json()
        meta = service.bundle.table.policies[pid]
        assert body["years"][0] == meta.first_year
        assert body["years"][-1] == meta.last_year
        adopters = {rec.state for rec in service.bundle.table.records if rec.policy_id == pid}
        assert {b["state"] for b in body["boxes"]} == adopters
        assert {s["state"] for s in body["series"]} == adopters
        assert len(body["us_mean"]) == len(body["years"])
        # first-adoption-year boxes flagged; same-year boxes ascend by value
        for b in body["boxes"]:
            assert b["first_year"] == (
                next(rec.year for rec in service.bundle.table.records
                     if rec.policy_id == pid and rec.state == b["state"]) == meta.first_year)
        years = [b["year"] for b in body["boxes"]]
        assert years == sorted(years)
        for y in set(years):
            vals = [b["value"] for b in body["boxes"] if b["year"] == y]
            assert vals == sorted(vals)


class TestCox:
    def test_payload_shape(self, client, service):
        pid = sorted(service.bundle.table.policies)[0]
        r = client.get(f"/api/cox/{pid}")
        body = r.json()
        assert body["policy_id"] == pid
        assert "converged" in body
        ratios = [f["hazard_ratio"] for f in body["factors"] if f["dropped"] is None]
        assert ratios == sorted(ratios, reverse=True)

    def test_unknown_policy_404(self, client):
        r = client.get("/api/cox/ghost")
        assert r.status_code == 404


class TestSearch:
    def test_grouped_by_topic(self, client):
        r = client.get("/api/search", params={"q": "policy number"})
        groups = r.json()["groups"]
        assert groups
        for g in groups:
            names = [p["display_name"] for p in g["policies"]]
            assert names == sorted(names)

    def test_case_insensitive(self, client):
        lower = client.get("/api/search", params={"q": "policy"}).json()
        upper = client.get("/api/search", params={"q": "POLICY"}).json()
        assert lower["groups"] == upper["groups"]

    def test_no_match_ok(self, client):
        r = client.get("/api/search", params={"q": "zzzz"})
        assert r.status_code == 200
        assert r.json()["groups"] == []


class TestConcurrency:
    def test_parallel_requests_identical(self, data_dir):
        import concurrent.futures
        service = AnalysisService(load_bundle(data_dir), data_dir)
        client = TestClient(build_app(service))
        params = {"state": "CA", "from": 1962, "to": 1999}
        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            bodies = list(pool.map(
                lambda _: client.get("/api/patterns", params=params).content, range(16)))
        assert len(set(bodies)) == 1


class TestDeterminism:
    def test_cold_warm_and_disk_cache(self, data_dir):
        service1 = AnalysisService(load_bundle(data_dir), data_dir)
        client1 = TestClient(build_app(service1))
        paths = [
            ("/api/matrix", {"from": 1960, "to": 2000}),
            ("/api/map", {"measurement": "Closeness", "from": 1960, "to": 2000}),
            ("/api/patterns", {"state": "CA", "from": 1960, "to": 2000}),
        ]
        cold = [client1.get(p, params=q).content for p, q in paths]
        warm = [client1.get(p, params=q).content for p, q in paths]
        assert cold == warm

        # a fresh instance over the same data dir reads the disk cache
        service2 = AnalysisService(load_bundle(data_dir), data_dir)
        client2 = TestClient(build_app(service2))
        again = [client2.get(p, params=q).content for p, q in paths]
        assert cold == again
