#!/usr/bin/env python3
"""Regenerate tests/fixtures/*.json from the real API over the synthetic
test world, so the UI contract tests run against genuine server payloads.

    python3 scripts/make_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "tests"))

from fastapi.testclient import TestClient

from conftest import synthetic_world
from policydiff.ingest import save_adoption_table, save_panel
from policydiff.server import AnalysisService, build_app, load_bundle

OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    table, panel = synthetic_world()
    with tempfile.TemporaryDirectory() as tmp:
        save_adoption_table(table, Path(tmp) / "adoption_table.jsonl")
        save_panel(panel, Path(tmp) / "covariate_panel.json")
        service = AnalysisService(load_bundle(tmp), tmp)
        client = TestClient(build_app(service))

        window = {"from": "1960", "to": "2000"}
        topic = sorted(table.topics)[0]

        # focus the state with the most incident edges so the hover fixture
        # carries several relations
        net = service.network(None, (1960, 2000))
        degree = {}
        for e in net.edges:
            degree[e.source] = degree.get(e.source, 0) + 1
            degree[e.target] = degree.get(e.target, 0) + 1
        focus = max(sorted(degree), key=lambda s: degree[s])

        fixtures = {
            "options": ("/api/config/options", {}),
            "map": ("/api/map", {**window, "measurement": "Degree"}),
            "map_desc": ("/api/map", {**window, "measurement": "Degree",
                                      "state_sort": "measurement-desc"}),
            "matrix_all": ("/api/matrix", window),
            "matrix_topic": ("/api/matrix", {**window, "topic": topic}),
            "matrix_all_desc": ("/api/matrix", {**window, "state_sort": "measurement-desc"}),
            "patterns_state": ("/api/patterns", {**window, "state": focus}),
            "patterns_cell": ("/api/patterns", {**window, "state": focus, "cell_topic": topic}),
            "adoptions_year": ("/api/adoptions/year", window),
            "adoptions_state": ("/api/adoptions/state", window),
            "adoptions_state_desc": ("/api/adoptions/state",
                                     {**window, "state_sort": "measurement-desc"}),
            "adoptions_topic": ("/api/adoptions/topic", window),
            "search": ("/api/search", {"q": "policy"}),
        }
        pid = sorted(table.policies)[0]
        meta = {"focus_state": focus, "topic": topic, "policy": pid}

        for name, (path, params) in fixtures.items():
            resp = client.get(path, params=params)
            assert resp.status_code == 200, f"{path} -> {resp.status_code}"
            (OUT / f"{name}.json").write_bytes(resp.content)
        (OUT / "adoptions_context.json").write_bytes(client.get(
            "/api/adoptions/context",
            params={"policy": pid, "context_state": focus, "factor": "Factor One"}).content)
        (OUT / "cox.json").write_bytes(client.get(f"/api/cox/{pid}").content)
        (OUT / "meta.json").write_text(json.dumps(meta, sort_keys=True))
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
