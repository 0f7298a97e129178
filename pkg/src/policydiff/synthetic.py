"""Ground-truth cascade simulation for recovery tests and benchmarks.

Continuous-time SI diffusion over a known directed graph: each cascade
starts from a uniformly chosen root at t=0; an infected node transmits to
each out-neighbor after an exponential delay; independently, every
non-root node can be seeded from outside the network (uniform time in the
horizon) with a small probability. A node's infection time is the minimum
over all its candidate times.
"""

from __future__ import annotations

import heapq

import numpy as np

from .cascade import Cascade, CascadeSet


def simulate_cascades(
    nodes: tuple[str, ...],
    edges: set[tuple[str, str]],
    n_cascades: int,
    rate: float = 1.0,
    background_prob: float = 0.1,
    horizon: float = 10.0,
    seed: int = 0,
) -> CascadeSet:
    rng = np.random.default_rng(seed)
    out_neighbors: dict[str, list[str]] = {u: [] for u in nodes}
    for u, v in sorted(edges):
        out_neighbors[u].append(v)

    cascades = []
    for ci in range(n_cascades):
        root = nodes[rng.integers(len(nodes))]
        infected: dict[str, float] = {}
        heap: list[tuple[float, str]] = [(0.0, root)]
        for v in nodes:
            if v != root and rng.random() < background_prob:
                heapq.heappush(heap, (float(rng.uniform(0.0, horizon)), v))
        while heap:
            t, u = heapq.heappop(heap)
            if u in infected or t > horizon:
                continue
            infected[u] = t
            for v in out_neighbors[u]:
                if v not in infected:
                    heapq.heappush(heap, (t + float(rng.exponential(1.0 / rate)), v))
        events = tuple(sorted(infected.items(), key=lambda e: (e[1], e[0])))
        cascades.append(Cascade(policy_id=f"c{ci:04d}", events=events))

    return CascadeSet(cascades=tuple(cascades), node_universe=tuple(nodes))


def random_digraph(n_nodes: int, n_edges: int, rng: np.random.Generator) -> tuple[tuple[str, ...], set[tuple[str, str]]]:
    """Simple directed graph on letter-labeled nodes, exactly n_edges arcs."""
    nodes = tuple(chr(ord("A") + i) for i in range(n_nodes))
    all_pairs = [(a, b) for a in nodes for b in nodes if a != b]
    chosen = rng.choice(len(all_pairs), size=n_edges, replace=False)
    return nodes, {all_pairs[i] for i in chosen}
