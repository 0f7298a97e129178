"""Per-state analysis measurements: centralities over the inferred network,
static innovativeness over the adoption table, quartile binning for the
color scales, and contextual-factor summaries from the panel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonconvergencePastCap, UnknownFactor, YearOutOfPanel
from .ingest import AdoptionTable, CovariatePanel
from .netinf import DiffusionNetwork

PAGERANK_MAX_ITER = 10_000


@dataclass(frozen=True)
class MetricScope:
    topic: str | None
    years: tuple[int, int]
    basis: str = "years-range"


@dataclass(frozen=True)
class StateMetricVector:
    measurement: str
    values: dict[str, float]
    scope: MetricScope

    def sorted_states(self) -> list[str]:
        """Measurement-descending order with state-code tie-break."""
        return sorted(self.values, key=lambda s: (-self.values[s], s))


def _adjacency(net: DiffusionNetwork, nodes: tuple[str, ...]) -> np.ndarray:
    idx = {s: i for i, s in enumerate(nodes)}
    A = np.zeros((len(nodes), len(nodes)), dtype=bool)
    for e in net.edges:
        A[idx[e.source], idx[e.target]] = True
    return A


def degree_centrality(net: DiffusionNetwork, nodes: tuple[str, ...], kind: str = "total",
                      scope: MetricScope | None = None) -> StateMetricVector:
    if kind not in ("total", "in", "out"):
        raise ValueError(f"unknown degree kind {kind!r}")
    A = _adjacency(net, nodes)
    indeg = A.sum(axis=0)
    outdeg = A.sum(axis=1)
    vals = {"total": indeg + outdeg, "in": indeg, "out": outdeg}[kind]
    name = {"total": "Degree", "in": "In-Degree", "out": "Out-Degree"}[kind]
    return StateMetricVector(name, {s: float(vals[i]) for i, s in enumerate(nodes)},
                             scope or MetricScope(None, (0, 0)))


def closeness_centrality(net: DiffusionNetwork, nodes: tuple[str, ...],
                         direction: str = "in",
                         scope: MetricScope | None = None) -> StateMetricVector:
    """Reachability-scaled closeness on unweighted shortest paths.

    For node u with r = number of other nodes that can reach u along edge
    direction and total inbound distance D:

        closeness(u) = (r / D) * (r / (n - 1))

    Unreachable nodes score 0. direction="out" flips the graph first, for
    reading closeness as outgoing influence instead.
    """
    A = _adjacency(net, nodes)
    if direction == "out":
        A = A.T
    elif direction != "in":
        raise ValueError(f"unknown closeness direction {direction!r}")
    n = len(nodes)
    values = {}
    for u in range(n):
        # BFS over reversed edges finds everyone who reaches u.
        dist = np.full(n, -1, dtype=np.int64)
        dist[u] = 0
        frontier = [u]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for w in frontier:
                for v in np.flatnonzero(A[:, w]):
                    if dist[v] < 0:
                        dist[v] = d
                        nxt.append(int(v))
            frontier = nxt
        reached = dist > 0
        r = int(reached.sum())
        if r == 0 or n <= 1:
            values[nodes[u]] = 0.0
        else:
            total = float(dist[reached].sum())
            values[nodes[u]] = (r / total) * (r / (n - 1))
    return StateMetricVector("Closeness", values, scope or MetricScope(None, (0, 0)))


def pagerank(net: DiffusionNetwork, nodes: tuple[str, ...], damping: float = 0.85,
             tol: float = 1e-10, scope: MetricScope | None = None) -> StateMetricVector:
    """Power iteration over the full node universe; dangling nodes
    redistribute uniformly; stops when the L1 change drops below tol."""
    A = _adjacency(net, nodes).astype(float)
    n = len(nodes)
    outdeg = A.sum(axis=1)
    dangling = outdeg == 0
    P = np.zeros_like(A)
    nz = ~dangling
    P[nz] = A[nz] / outdeg[nz, None]

    x = np.full(n, 1.0 / n)
    for _ in range(PAGERANK_MAX_ITER):
        x_new = damping * (x @ P + x[dangling].sum() / n) + (1.0 - damping) / n
        if np.abs(x_new - x).sum() < tol:
            x = x_new
            break
        x = x_new
    else:
        raise NonconvergencePastCap(f"pagerank did not converge in {PAGERANK_MAX_ITER} iterations")
    return StateMetricVector("PageRank", {s: float(x[i]) for i, s in enumerate(nodes)},
                             scope or MetricScope(None, (0, 0)))


def static_innovativeness(table: AdoptionTable, year_range: tuple[int, int],
                          topic: str | None = None,
                          nodes: tuple[str, ...] | None = None) -> StateMetricVector:
    """Adoptions divided by annual adoption opportunities over the window.

    A policy counts as an opportunity for a state in every window year from
    its first adoption year until the year the state adopts it (inclusive);
    once adopted it stops counting. Earlier adopters therefore accumulate
    fewer opportunity-years per adoption and score higher.
    """
    from .constants import STATE_CODES
    if nodes is None:
        nodes = STATE_CODES
    y0, y1 = year_range
    policies = {
        pid: meta for pid, meta in table.policies.items()
        if topic is None or meta.topic == topic
    }
    adopted_year: dict[tuple[str, str], int] = {
        (r.state, r.policy_id): r.year for r in table.records if r.policy_id in policies
    }
    values = {}
    for s in nodes:
        numerator = sum(
            1 for (st, pid), yr in adopted_year.items()
            if st == s and y0 <= yr <= y1
        )
        denominator = 0
        for pid, meta in policies.items():
            ay = adopted_year.get((s, pid))
            start = max(y0, meta.first_year)
            end = min(y1, ay) if ay is not None else y1
            if end >= start:
                denominator += end - start + 1
        values[s] = numerator / denominator if denominator > 0 else 0.0
    scope = MetricScope(topic, year_range)
    return StateMetricVector("Static State Innovativeness", values, scope)


def bin_values(values: dict[str, float]) -> dict[str, int]:
    """Min-max normalize, then bin into four 25% intensity steps."""
    if not values:
        return {}
    vals = np.array(list(values.values()), dtype=float)
    lo, hi = float(vals.min()), float(vals.max())
    if hi == lo:
        return {s: 0 for s in values}
    return {
        s: min(int((v - lo) / (hi - lo) / 0.25), 3)
        for s, v in values.items()
    }


def quartile_bins(vec: StateMetricVector) -> dict[str, int]:
    return bin_values(vec.values)


def contextual_measurement(panel: CovariatePanel, factor: str, basis: str,
                           year_range: tuple[int, int] | None = None,
                           basis_year: int | None = None) -> StateMetricVector:
    """Per-state mean of a factor over the basis interval.

    basis: "all-range" (whole panel), "years-range" (year_range), or
    "one-year" (basis_year).
    """
    if factor not in panel.factors:
        raise UnknownFactor(factor)
    fi = panel.factors.index(factor)
    if basis == "all-range":
        lo, hi = panel.year_start, panel.year_end
    elif basis == "years-range":
        if year_range is None:
            raise ValueError("years-range basis requires a year_range")
        lo, hi = year_range
    elif basis == "one-year":
        if basis_year is None:
            raise ValueError("one-year basis requires a basis_year")
        lo = hi = basis_year
    else:
        raise ValueError(f"unknown basis {basis!r}")
    if lo < panel.year_start or hi > panel.year_end:
        raise YearOutOfPanel(lo if lo < panel.year_start else hi)

    a = lo - panel.year_start
    b = hi - panel.year_start + 1
    window = panel.values[:, a:b, fi]
    means = np.nanmean(window, axis=1)
    values = {s: float(means[i]) for i, s in enumerate(panel.states)}
    return StateMetricVector(factor, values, MetricScope(None, (lo, hi), basis))
