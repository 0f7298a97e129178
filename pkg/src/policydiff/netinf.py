"""Greedy diffusion-network inference from adoption cascades.

Each adopter in a cascade is explained by a single parent: either an earlier
adopter connected by an inferred edge, or a background source with a fixed
(very poor) log-weight. The algorithm starts with every parent set to
background and repeatedly adds the directed edge whose adoption would raise
total cascade log-likelihood the most, stopping when a one-sided test on the
per-cascade improvements no longer clears the significance cutoff.

The candidate sweep is the hot loop; see accel.py for the numba/numpy
kernel pair. Everything here is deterministic: candidate pairs are scanned
in lexicographic (source, target) order and ties break toward the first
maximum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import accel
from .cascade import Cascade, CascadeSet
from .constants import BACKGROUND
from .errors import CascadeMismatch, EmptyCascadeSet, NegativeDelta, SelfLoop

RAYLEIGH_DT_FLOOR = 1e-6


@dataclass(frozen=True)
class InferenceParams:
    transmission_model: str = "exponential"   # or "rayleigh"
    lam: float = 1.0
    epsilon_log_weight: float = math.log(1e-9)
    p_cutoff: float = 0.05
    max_edges: int | None = None
    # Improvement vectors shorter than this are treated as insufficient
    # evidence (p = 1). Lower to 1 to let single-cascade toy inputs emit
    # edges; keep the default for real runs.
    min_cascades_for_test: int = 2

    def __post_init__(self):
        if self.transmission_model not in ("exponential", "rayleigh"):
            raise ValueError(f"unknown transmission model {self.transmission_model!r}")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if not (0.0 < self.p_cutoff < 1.0):
            raise ValueError("p_cutoff must lie in (0, 1)")
        # Background must always be worse than an instantaneous parent.
        if self.epsilon_log_weight >= log_transmission_weight(0.0, self):
            raise ValueError("epsilon_log_weight must be below the zero-delay transmission weight")

    def to_dict(self) -> dict:
        return {
            "transmission_model": self.transmission_model,
            "lambda": self.lam,
            "epsilon_log_weight": self.epsilon_log_weight,
            "p_cutoff": self.p_cutoff,
            "max_edges": self.max_edges,
            "min_cascades_for_test": self.min_cascades_for_test,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InferenceParams":
        return cls(
            transmission_model=d.get("transmission_model", "exponential"),
            lam=d.get("lambda", 1.0),
            epsilon_log_weight=d.get("epsilon_log_weight", math.log(1e-9)),
            p_cutoff=d.get("p_cutoff", 0.05),
            max_edges=d.get("max_edges"),
            min_cascades_for_test=d.get("min_cascades_for_test", 2),
        )


@dataclass(frozen=True)
class DiffusionEdge:
    source: str
    target: str
    gain: float      # total log-likelihood improvement at insertion
    order: int       # 1-based insertion index
    p_value: float   # significance of the improvement vector at insertion


@dataclass(frozen=True)
class DiffusionNetwork:
    edges: tuple[DiffusionEdge, ...]
    parents: dict[str, dict[str, str]]  # policy_id -> {adopter: source or BACKGROUND}
    params: InferenceParams
    log_likelihood_trace: tuple[float, ...] = field(default=())

    def edge_set(self) -> set[tuple[str, str]]:
        return {(e.source, e.target) for e in self.edges}

    def to_json(self) -> str:
        payload = {
            "params": self.params.to_dict(),
            "edges": [
                {"source": e.source, "target": e.target, "gain": e.gain,
                 "order": e.order, "p_value": e.p_value}
                for e in self.edges
            ],
            "parents": self.parents,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DiffusionNetwork":
        payload = json.loads(text)
        edges = tuple(
            DiffusionEdge(e["source"], e["target"], e["gain"], e["order"], e["p_value"])
            for e in payload["edges"]
        )
        return cls(edges=edges, parents=payload["parents"],
                   params=InferenceParams.from_dict(payload["params"]))


def log_transmission_weight(delta_t, params: InferenceParams):
    """Log-weight of a transmission after delay delta_t (scalar or array).

    exponential: ln(lam) - lam * dt
    rayleigh:    ln(dt * lam) - lam * dt^2 / 2, dt floored at 1e-6
    """
    dt = np.asarray(delta_t, dtype=float)
    if np.any(dt < 0):
        raise NegativeDelta(f"negative delay {delta_t!r}")
    lam = params.lam
    if params.transmission_model == "exponential":
        out = math.log(lam) - lam * dt
    else:
        floored = np.maximum(dt, RAYLEIGH_DT_FLOOR)
        out = np.log(floored * lam) - lam * floored**2 / 2.0
    return float(out) if np.isscalar(delta_t) or np.ndim(delta_t) == 0 else out


def vuong_pvalue(deltas, min_n: int = 2) -> float:
    """One-sided test that the mean per-cascade improvement exceeds zero.

    n < min_n counts as insufficient evidence (p = 1). A degenerate
    improvement vector (zero spread) is conclusive in whichever direction
    its mean points.
    """
    d = np.asarray(deltas, dtype=float)
    n = d.shape[0]
    if n == 0 or n < min_n:
        return 1.0
    m = float(d.mean())
    s = float(d.std(ddof=1)) if n >= 2 else 0.0
    if s == 0.0:
        return 0.0 if m > 0.0 else 1.0
    z = m * math.sqrt(n) / s
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def marginal_gain(
    candidate: tuple[str, str],
    cascades: CascadeSet,
    parents: dict[str, dict[str, str]],
    params: InferenceParams,
) -> tuple[float, list[float]]:
    """Reference (slow-path) gain of adding candidate given current parents.

    Only cascades where the source adopts strictly before the target apply;
    each contributes max(0, candidate weight - incumbent weight). The
    returned delta list covers applicable cascades only.
    """
    src, tgt = candidate
    if src == tgt:
        raise SelfLoop(f"candidate {src}->{tgt}")
    deltas = []
    for c in cascades.cascades:
        times = dict(c.events)
        if src not in times or tgt not in times or not (times[src] < times[tgt]):
            continue
        w_cand = log_transmission_weight(times[tgt] - times[src], params)
        incumbent = parents.get(c.policy_id, {}).get(tgt, BACKGROUND)
        if incumbent == BACKGROUND:
            w_cur = params.epsilon_log_weight
        else:
            w_cur = log_transmission_weight(times[tgt] - times[incumbent], params)
        deltas.append(max(0.0, w_cand - w_cur))
    return sum(deltas), deltas


class _FlatCascades:
    """CSR layout of every temporally admissible (source, target, cascade)
    triple, grouped by candidate pair in lexicographic (source code, target
    code) order, cascades ascending within a pair."""

    def __init__(self, cascades: CascadeSet, params: InferenceParams):
        self.nodes = tuple(cascades.node_universe)
        node_id = {s: i for i, s in enumerate(self.nodes)}
        n_nodes = len(self.nodes)
        n_casc = len(cascades.cascades)

        # rank nodes by code so pair keys sort lexicographically regardless
        # of how the universe happens to be ordered
        by_code = np.array(sorted(range(n_nodes), key=lambda i: self.nodes[i]), dtype=np.int64)
        rank = np.empty(n_nodes, dtype=np.int64)
        rank[by_code] = np.arange(n_nodes)

        members: list[list[int]] = []
        src_parts, tgt_parts, casc_parts, w_parts = [], [], [], []
        for ci, c in enumerate(cascades.cascades):
            ids = np.array([node_id[s] for s, _ in c.events], dtype=np.int64)
            times = np.array([t for _, t in c.events], dtype=float)
            members.append(ids.tolist())
            dt = times[None, :] - times[:, None]  # dt[a, b] = t_b - t_a
            a_idx, b_idx = np.nonzero(dt > 0)
            if a_idx.size == 0:
                continue
            src_parts.append(ids[a_idx])
            tgt_parts.append(ids[b_idx])
            casc_parts.append(np.full(a_idx.size, ci, dtype=np.int64))
            w_parts.append(log_transmission_weight(dt[a_idx, b_idx], params))

        if src_parts:
            src = np.concatenate(src_parts)
            tgt = np.concatenate(tgt_parts)
            casc = np.concatenate(casc_parts)
            w = np.concatenate(w_parts)
            pair_key = rank[src] * n_nodes + rank[tgt]
            order = np.lexsort((casc, pair_key))
            src, tgt, casc, w, pair_key = (
                src[order], tgt[order], casc[order], w[order], pair_key[order])
            unique_keys, starts, counts = np.unique(
                pair_key, return_index=True, return_counts=True)
            self.pair_src = by_code[unique_keys // n_nodes]
            self.pair_tgt = by_code[unique_keys % n_nodes]
            self.offsets = np.append(starts, pair_key.shape[0]).astype(np.int64)
            self.elem_cascade = casc
            self.elem_target = tgt
            self.elem_logw = np.asarray(w, dtype=np.float64)
            self.elem_pair = np.repeat(np.arange(unique_keys.shape[0], dtype=np.int64), counts)
        else:
            self.pair_src = np.empty(0, dtype=np.int64)
            self.pair_tgt = np.empty(0, dtype=np.int64)
            self.offsets = np.zeros(1, dtype=np.int64)
            self.elem_cascade = np.empty(0, dtype=np.int64)
            self.elem_target = np.empty(0, dtype=np.int64)
            self.elem_logw = np.empty(0, dtype=np.float64)
            self.elem_pair = np.empty(0, dtype=np.int64)

        self.cur_logw = np.full((max(n_casc, 1), n_nodes), params.epsilon_log_weight)
        self.parent_id = np.full((max(n_casc, 1), n_nodes), -1, dtype=np.int64)
        self.members = members

    @property
    def n_pairs(self) -> int:
        return self.offsets.shape[0] - 1


def infer_network(cascades: CascadeSet, params: InferenceParams | None = None) -> DiffusionNetwork:
    """Greedy edge addition with a per-edge significance stop.

    Each iteration scans every non-edge candidate pair, takes the maximum
    total gain (lexicographic tie-break), tests its improvement vector, and
    either stops or commits the edge and reassigns parents where the new
    edge strictly improves them. Deterministic for fixed input.
    """
    if params is None:
        params = InferenceParams()
    if not cascades.cascades:
        raise EmptyCascadeSet("cannot infer from an empty cascade set")

    flat = _FlatCascades(cascades, params)
    is_edge = np.zeros(flat.n_pairs, dtype=np.bool_)
    edges: list[DiffusionEdge] = []

    # Baseline: every adopter on background.
    ll = params.epsilon_log_weight * sum(len(m) for m in flat.members)
    ll_trace = [ll]

    while True:
        if params.max_edges is not None and len(edges) >= params.max_edges:
            break
        if flat.n_pairs == 0 or is_edge.all():
            break
        gains = accel.scan_gains(
            flat.offsets, flat.elem_cascade, flat.elem_target,
            flat.elem_logw, flat.elem_pair, flat.cur_logw, is_edge,
        )
        best = int(np.argmax(gains))
        best_gain = float(gains[best])
        if best_gain <= 0.0:
            break

        lo, hi = flat.offsets[best], flat.offsets[best + 1]
        tgt = flat.elem_target[lo]
        deltas = np.maximum(
            0.0, flat.elem_logw[lo:hi] - flat.cur_logw[flat.elem_cascade[lo:hi], tgt]
        )
        p = vuong_pvalue(deltas, min_n=params.min_cascades_for_test)
        if p >= params.p_cutoff:
            break

        src = int(flat.pair_src[best])
        is_edge[best] = True
        seg_casc = flat.elem_cascade[lo:hi]
        improves = flat.elem_logw[lo:hi] > flat.cur_logw[seg_casc, tgt]
        flat.cur_logw[seg_casc[improves], tgt] = flat.elem_logw[lo:hi][improves]
        flat.parent_id[seg_casc[improves], tgt] = src
        ll += best_gain
        ll_trace.append(ll)
        edges.append(DiffusionEdge(
            source=flat.nodes[src], target=flat.nodes[tgt],
            gain=best_gain, order=len(edges) + 1, p_value=p,
        ))

    parents: dict[str, dict[str, str]] = {}
    for ci, c in enumerate(cascades.cascades):
        assignment = {}
        for s, _ in c.events:
            pid = flat.parent_id[ci, flat.nodes.index(s)]
            assignment[s] = BACKGROUND if pid < 0 else flat.nodes[pid]
        parents[c.policy_id] = assignment

    return DiffusionNetwork(
        edges=tuple(edges), parents=parents, params=params,
        log_likelihood_trace=tuple(ll_trace),
    )


def policy_source_ties(network: DiffusionNetwork, cascades: CascadeSet) -> dict[str, dict[str, str]]:
    """Final parent assignment per policy, background entries omitted."""
    cascade_ids = {c.policy_id for c in cascades.cascades}
    if set(network.parents) != cascade_ids:
        raise CascadeMismatch("network parents do not cover the given cascade set")
    return {
        pid: {tgt: src for tgt, src in assignment.items() if src != BACKGROUND}
        for pid, assignment in network.parents.items()
    }
