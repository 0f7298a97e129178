"""Shared fixtures: hand-written micro datasets plus a seeded synthetic
50-state world for server-level tests."""

import io
import os

import numpy as np
import pytest

from policydiff.constants import STATE_CODES
from policydiff.ingest import (
    AdoptionRecord,
    AdoptionTable,
    PolicyMeta,
    parse_adoption_data,
    parse_covariate_panel,
)

# Reference archives are not shipped with the repo; data-dependent targets
# run only when this points at a directory with the raw CSVs.
REFERENCE_DATA_DIR = os.environ.get("POLICYDIFF_REFERENCE_DATA")


def csv_bytes(text: str) -> bytes:
    return io.BytesIO(text.encode("utf-8")).getvalue()


HATE_CRIMES_EVENTS = """state,policy,adopt_year
CA,hate_crimes,1978
OR,hate_crimes,1981
WA,hate_crimes,1981
NY,hate_crimes,1982
RI,hate_crimes,1982
MA,hate_crimes,1982
AK,hate_crimes,1982
PA,hate_crimes,1982
ID,hate_crimes,1983
IL,hate_crimes,1983
"""

HATE_CRIMES_META = """policy,policy_name,topic
hate_crimes,Laws establishing Hate Crimes against Minorities,Law and Crime
"""


@pytest.fixture
def hate_crimes_table() -> AdoptionTable:
    return parse_adoption_data(csv_bytes(HATE_CRIMES_EVENTS), csv_bytes(HATE_CRIMES_META))


def make_table(records, names_topics) -> AdoptionTable:
    """records: (state, pid, year) triples; names_topics: pid -> (name, topic)."""
    span = {}
    for _, pid, year in records:
        lo, hi = span.get(pid, (year, year))
        span[pid] = (min(lo, year), max(hi, year))
    policies = {
        pid: PolicyMeta(pid, name, topic, span[pid][0], span[pid][1])
        for pid, (name, topic) in names_topics.items()
        if pid in span
    }
    recs = tuple(sorted(
        (AdoptionRecord(s, p, y) for s, p, y in records),
        key=lambda r: (r.policy_id, r.year, r.state),
    ))
    return AdoptionTable(records=recs, policies=policies)


def random_table(rng: np.random.Generator, n_policies=12, n_topics=3,
                 year_lo=1950, year_hi=2000) -> AdoptionTable:
    topics = [f"Topic {chr(ord('A') + i)}" for i in range(n_topics)]
    records = []
    names_topics = {}
    for i in range(n_policies):
        pid = f"pol{i:03d}"
        names_topics[pid] = (f"Policy number {i:03d}", topics[int(rng.integers(n_topics))])
        n_adopters = int(rng.integers(1, 20))
        states = rng.choice(len(STATE_CODES), size=n_adopters, replace=False)
        start = int(rng.integers(year_lo, year_hi - 10))
        for s in states:
            records.append((STATE_CODES[s], pid, start + int(rng.integers(0, 10))))
    return make_table(records, names_topics)


def synthetic_world(seed=20240901):
    """A 50-state adoption table plus a matching dense-ish covariate panel,
    sized so inference and hazard fits run in well under a second."""
    rng = np.random.default_rng(seed)
    table = random_table(rng, n_policies=24, n_topics=4, year_lo=1960, year_hi=1995)

    years = range(1955, 2001)
    factors = ["Factor One", "Factor Two", "Senate Democrats"]
    lines = ["state,year," + ",".join(factors)]
    for s in STATE_CODES:
        base = rng.normal(0.0, 1.0, size=len(factors))
        for y in years:
            vals = []
            for fi in range(len(factors)):
                if s == "NE" and factors[fi] == "Senate Democrats":
                    vals.append("")  # structurally inapplicable
                elif rng.random() < 0.1:
                    vals.append("")  # sporadic gap for the imputer
                else:
                    vals.append(f"{base[fi] + 0.02 * (y - 1955) + rng.normal(0, 0.3):.4f}")
            lines.append(f"{s},{y}," + ",".join(vals))
    panel = parse_covariate_panel(csv_bytes("\n".join(lines) + "\n"), factors)
    return table, panel


@pytest.fixture(scope="session")
def world():
    return synthetic_world()
