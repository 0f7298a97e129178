"""Parse, validate, and impute the two input datasets.

Adoption events + policy metadata arrive as two CSVs (UTF-8, RFC-4180); the
contextual panel as a third. Everything is normalized into immutable
in-memory tables before any analysis runs. Imputation turns the sparse
panel into a dense state x year x factor grid:

  1. decade-sampled series carry forward until the next observation,
  2. structurally inapplicable cells are zero-filled per a rule table,
  3. remaining gaps take the most recent non-missing value,
  4. cells before the first observation take the first observation.

Steps 1 and 3 are the same mechanism (last observation carried forward);
step 1 is kept in the docs because decade-sampled census series are the
dominant source of gaps.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace

import numpy as np

from .constants import (
    DATA_YEAR_BOUNDS,
    DEFAULT_INAPPLICABLE_ZERO,
    EXCLUDED_TOPICS,
    STATE_SET,
)
from .errors import (
    AllMissingSeries,
    DuplicateStateYear,
    EmptyInput,
    MalformedRow,
    MissingFactorColumn,
    NonNumericValue,
    UnknownFactor,
    UnknownState,
    UnknownTopic,
    UnresolvedPolicy,
    YearOutOfPanel,
)

SNAPSHOT_VERSION = 1

# Header aliases accepted for the two adoption CSVs (case-insensitive).
# The canonical schema is (state, policy, adopt_year) / (policy, policy_name,
# topic); source archives ship slight variations of these names.
_EVENT_ALIASES = {
    "state": ("state", "st", "state_code", "abbr"),
    "policy": ("policy", "policy_id", "policy_code"),
    "adopt_year": ("adopt_year", "year", "adoption_year", "adoptyear"),
}
_META_ALIASES = {
    "policy": ("policy", "policy_id", "policy_code"),
    "policy_name": ("policy_name", "name", "policy_lab", "description"),
    "topic": ("topic", "majortopic", "major_topic", "policy_topic"),
}


@dataclass(frozen=True)
class AdoptionRecord:
    state: str
    policy_id: str
    year: int


@dataclass(frozen=True)
class PolicyMeta:
    policy_id: str
    display_name: str
    topic: str
    first_year: int
    last_year: int


@dataclass(frozen=True)
class AdoptionTable:
    records: tuple[AdoptionRecord, ...]
    policies: dict[str, PolicyMeta]
    duplicate_count: int = 0

    @property
    def topics(self) -> tuple[str, ...]:
        return tuple(sorted({p.topic for p in self.policies.values()}))

    def records_for(self, policy_id: str) -> list[AdoptionRecord]:
        return [r for r in self.records if r.policy_id == policy_id]


@dataclass(frozen=True)
class CovariatePanel:
    states: tuple[str, ...]
    year_start: int
    year_end: int
    factors: tuple[str, ...]
    values: np.ndarray        # (n_states, n_years, n_factors), NaN = missing
    observed_mask: np.ndarray  # same shape, True where present before imputation

    @property
    def years(self) -> range:
        return range(self.year_start, self.year_end + 1)

    def state_index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise UnknownState(state) from None

    def factor_index(self, factor: str) -> int:
        try:
            return self.factors.index(factor)
        except ValueError:
            raise UnknownFactor(factor) from None

    def value(self, state: str, year: int, factor: str) -> float:
        if not (self.year_start <= year <= self.year_end):
            raise YearOutOfPanel(year)
        return float(
            self.values[self.state_index(state), year - self.year_start, self.factor_index(factor)]
        )


def _coerce_stream(data) -> io.TextIOBase:
    if isinstance(data, (bytes, bytearray)):
        return io.StringIO(data.decode("utf-8"))
    if isinstance(data, str):
        return io.StringIO(data)
    if hasattr(data, "read"):
        raw = data.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        return io.StringIO(raw)
    raise TypeError(f"expected bytes, str, or file object, got {type(data)!r}")


def _resolve_headers(header: list[str], aliases: dict[str, tuple[str, ...]], what: str) -> dict[str, int]:
    lowered = [h.strip().lower() for h in header]
    out = {}
    for canonical, names in aliases.items():
        for name in names:
            if name in lowered:
                out[canonical] = lowered.index(name)
                break
        else:
            raise MalformedRow(1, f"{what} header missing a {canonical!r} column (have {header})")
    return out


def parse_adoption_data(events_bytes, meta_bytes, year_bounds: tuple[int, int] = DATA_YEAR_BOUNDS) -> AdoptionTable:
    """Parse the events and metadata CSVs into a normalized AdoptionTable.

    Policies in the excluded topics are dropped along with their events.
    Duplicate (state, policy) rows collapse to the earliest year; the count
    of collapsed rows is kept on the table as a warning signal.
    """
    meta_reader = csv.reader(_coerce_stream(meta_bytes))
    meta_rows = list(meta_reader)
    if not meta_rows or len(meta_rows) < 2:
        raise EmptyInput("metadata CSV has no data rows")
    mcols = _resolve_headers(meta_rows[0], _META_ALIASES, "metadata")

    names: dict[str, str] = {}
    topics: dict[str, str] = {}
    for lineno, row in enumerate(meta_rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(mcols.values()):
            raise MalformedRow(lineno, f"expected {max(mcols.values()) + 1}+ columns, got {len(row)}")
        pid = row[mcols["policy"]].strip()
        if not pid:
            raise MalformedRow(lineno, "empty policy id")
        names[pid] = row[mcols["policy_name"]].strip()
        topics[pid] = row[mcols["topic"]].strip()

    events_reader = csv.reader(_coerce_stream(events_bytes))
    event_rows = list(events_reader)
    if not event_rows or len(event_rows) < 2:
        raise EmptyInput("events CSV has no data rows")
    ecols = _resolve_headers(event_rows[0], _EVENT_ALIASES, "events")

    lo, hi = year_bounds
    earliest: dict[tuple[str, str], int] = {}
    duplicates = 0
    for lineno, row in enumerate(event_rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(ecols.values()):
            raise MalformedRow(lineno, f"expected {max(ecols.values()) + 1}+ columns, got {len(row)}")
        state = row[ecols["state"]].strip().upper()
        pid = row[ecols["policy"]].strip()
        raw_year = row[ecols["adopt_year"]].strip()
        if state not in STATE_SET:
            raise UnknownState(state, line=lineno)
        if pid not in names:
            raise UnresolvedPolicy(pid, line=lineno)
        try:
            year = int(raw_year)
        except ValueError:
            raise MalformedRow(lineno, f"adoption year {raw_year!r} is not an integer") from None
        if not (lo <= year <= hi):
            raise MalformedRow(lineno, f"adoption year {year} outside bounds [{lo}, {hi}]")
        key = (state, pid)
        if key in earliest:
            duplicates += 1
            earliest[key] = min(earliest[key], year)
        else:
            earliest[key] = year

    # Drop excluded topics, then derive per-policy year spans.
    kept_events = {
        (state, pid): year
        for (state, pid), year in earliest.items()
        if topics[pid] not in EXCLUDED_TOPICS
    }
    if not kept_events:
        raise EmptyInput("no adoption events remain after topic exclusion")

    span: dict[str, list[int]] = {}
    for (state, pid), year in kept_events.items():
        span.setdefault(pid, []).append(year)

    policies = {
        pid: PolicyMeta(pid, names[pid], topics[pid], min(years), max(years))
        for pid, years in span.items()
    }
    records = tuple(
        sorted(
            (AdoptionRecord(state, pid, year) for (state, pid), year in kept_events.items()),
            key=lambda r: (r.policy_id, r.year, r.state),
        )
    )
    return AdoptionTable(records=records, policies=policies, duplicate_count=duplicates)


def parse_covariate_panel(panel_bytes, factor_names: list[str]) -> CovariatePanel:
    """Parse the raw panel CSV. No imputation happens here: missing cells
    stay NaN and observed_mask records what was actually present."""
    if not factor_names:
        raise MissingFactorColumn("<none requested>")
    reader = csv.reader(_coerce_stream(panel_bytes))
    rows = list(reader)
    if not rows or len(rows) < 2:
        raise EmptyInput("panel CSV has no data rows")

    header = [h.strip() for h in rows[0]]
    lowered = [h.lower() for h in header]
    if "state" not in lowered or "year" not in lowered:
        raise MalformedRow(1, f"panel header must contain state and year columns (have {header})")
    state_col = lowered.index("state")
    year_col = lowered.index("year")
    factor_cols = {}
    for name in factor_names:
        if name not in header:
            raise MissingFactorColumn(name)
        factor_cols[name] = header.index(name)

    cells: dict[tuple[str, int], dict[str, float]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        state = row[state_col].strip().upper()
        if state not in STATE_SET:
            raise UnknownState(state, line=lineno)
        try:
            year = int(row[year_col].strip())
        except ValueError:
            raise MalformedRow(lineno, f"year {row[year_col]!r} is not an integer") from None
        key = (state, year)
        if key in cells:
            raise DuplicateStateYear(state, year)
        vals = {}
        for name, col in factor_cols.items():
            raw = row[col].strip() if col < len(row) else ""
            if raw == "" or raw.upper() in ("NA", "NAN", "NULL"):
                continue
            try:
                vals[name] = float(raw)
            except ValueError:
                raise NonNumericValue(state, year, name, raw) from None
        cells[key] = vals

    states = tuple(sorted({s for s, _ in cells}))
    years = [y for _, y in cells]
    y0, y1 = min(years), max(years)
    n_years = y1 - y0 + 1
    factors = tuple(factor_names)

    values = np.full((len(states), n_years, len(factors)), np.nan)
    mask = np.zeros_like(values, dtype=bool)
    sidx = {s: i for i, s in enumerate(states)}
    fidx = {f: i for i, f in enumerate(factors)}
    for (state, year), vals in cells.items():
        for name, v in vals.items():
            values[sidx[state], year - y0, fidx[name]] = v
            mask[sidx[state], year - y0, fidx[name]] = True

    return CovariatePanel(states, y0, y1, factors, values, mask)


def impute_covariates(
    panel: CovariatePanel,
    year_range: tuple[int, int],
    zero_fill_rules: tuple[tuple[str, str], ...] = DEFAULT_INAPPLICABLE_ZERO,
) -> CovariatePanel:
    """Return a dense panel covering year_range.

    Observations outside the requested range still seed the fill (a decade
    value at 2010 services a 2011-2017 request). Observed cells are never
    altered; every filled cell reads False in observed_mask.
    """
    y0, y1 = year_range
    if not (panel.year_start <= y0 <= y1 <= panel.year_end):
        # Widen the working grid so requests beyond the observed years
        # still carry forward/backward.
        lo = min(panel.year_start, y0)
        hi = max(panel.year_end, y1)
        n_years = hi - lo + 1
        values = np.full((len(panel.states), n_years, len(panel.factors)), np.nan)
        mask = np.zeros_like(values, dtype=bool)
        off = panel.year_start - lo
        values[:, off:off + panel.values.shape[1], :] = panel.values
        mask[:, off:off + panel.values.shape[1], :] = panel.observed_mask
        panel = replace(panel, year_start=lo, year_end=hi, values=values, observed_mask=mask)

    values = panel.values.copy()
    rule_cells = set(zero_fill_rules)

    for si, state in enumerate(panel.states):
        for fi, factor in enumerate(panel.factors):
            series = values[si, :, fi]
            missing = np.isnan(series)
            if (state, factor) in rule_cells:
                series[missing] = 0.0
                continue
            if missing.all():
                raise AllMissingSeries(state, factor)
            # forward fill, then backfill the leading gap
            last = np.nan
            for t in range(series.shape[0]):
                if np.isnan(series[t]):
                    series[t] = last
                else:
                    last = series[t]
            first_obs = np.argmin(np.isnan(series))
            series[:first_obs] = series[first_obs]

    lo_idx = y0 - panel.year_start
    hi_idx = y1 - panel.year_start + 1
    return CovariatePanel(
        states=panel.states,
        year_start=y0,
        year_end=y1,
        factors=panel.factors,
        values=values[:, lo_idx:hi_idx, :],
        observed_mask=panel.observed_mask[:, lo_idx:hi_idx, :].copy(),
    )


def filter_adoptions(table: AdoptionTable, topic: str | None, year_range: tuple[int, int]) -> AdoptionTable:
    """Keep records inside year_range (and topic, when given). Policy metadata
    keeps the original span years so first-year classification is stable
    under filtering."""
    if topic is not None and topic not in table.topics:
        raise UnknownTopic(topic)
    y0, y1 = year_range
    keep = [
        r for r in table.records
        if y0 <= r.year <= y1 and (topic is None or table.policies[r.policy_id].topic == topic)
    ]
    kept_ids = {r.policy_id for r in keep}
    return AdoptionTable(
        records=tuple(keep),
        policies={pid: table.policies[pid] for pid in sorted(kept_ids)},
        duplicate_count=table.duplicate_count,
    )


# --- snapshot persistence ---------------------------------------------------

def save_adoption_table(table: AdoptionTable, path) -> None:
    """Newline-delimited JSON snapshot; first line is a version header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"kind": "adoption_table", "version": SNAPSHOT_VERSION,
                             "duplicate_count": table.duplicate_count}, sort_keys=True) + "\n")
        for pid in sorted(table.policies):
            p = table.policies[pid]
            fh.write(json.dumps({"kind": "policy", "policy_id": p.policy_id,
                                 "display_name": p.display_name, "topic": p.topic,
                                 "first_year": p.first_year, "last_year": p.last_year},
                                sort_keys=True) + "\n")
        for r in table.records:
            fh.write(json.dumps({"kind": "record", "state": r.state,
                                 "policy_id": r.policy_id, "year": r.year},
                                sort_keys=True) + "\n")


def load_adoption_table(path) -> AdoptionTable:
    policies: dict[str, PolicyMeta] = {}
    records: list[AdoptionRecord] = []
    duplicate_count = 0
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("kind") != "adoption_table":
            raise MalformedRow(1, "not an adoption table snapshot")
        if header.get("version") != SNAPSHOT_VERSION:
            raise MalformedRow(1, f"unsupported snapshot version {header.get('version')}")
        duplicate_count = header.get("duplicate_count", 0)
        for line in fh:
            obj = json.loads(line)
            if obj["kind"] == "policy":
                policies[obj["policy_id"]] = PolicyMeta(
                    obj["policy_id"], obj["display_name"], obj["topic"],
                    obj["first_year"], obj["last_year"])
            elif obj["kind"] == "record":
                records.append(AdoptionRecord(obj["state"], obj["policy_id"], obj["year"]))
    return AdoptionTable(records=tuple(records), policies=policies, duplicate_count=duplicate_count)


def save_panel(panel: CovariatePanel, path) -> None:
    payload = {
        "kind": "covariate_panel",
        "version": SNAPSHOT_VERSION,
        "states": list(panel.states),
        "year_start": panel.year_start,
        "year_end": panel.year_end,
        "factors": list(panel.factors),
        "values": [[[None if np.isnan(v) else v for v in row] for row in state]
                   for state in panel.values.tolist()],
        "observed_mask": panel.observed_mask.astype(int).tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)


def load_panel(path) -> CovariatePanel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("kind") != "covariate_panel" or payload.get("version") != SNAPSHOT_VERSION:
        raise MalformedRow(1, "not a covariate panel snapshot")
    values = np.array(
        [[[np.nan if v is None else v for v in row] for row in state]
         for state in payload["values"]],
        dtype=float,
    )
    if values.size == 0:
        values = values.reshape(len(payload["states"]),
                                payload["year_end"] - payload["year_start"] + 1,
                                len(payload["factors"]))
    return CovariatePanel(
        states=tuple(payload["states"]),
        year_start=payload["year_start"],
        year_end=payload["year_end"],
        factors=tuple(payload["factors"]),
        values=values,
        observed_mask=np.array(payload["observed_mask"], dtype=bool).reshape(values.shape),
    )
