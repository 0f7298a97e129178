"""Per-policy adoption cascades and adoption-count summaries.

A cascade is the time-ordered sequence of states adopting one policy; it is
the observation unit for network inference. Same-year adopters are ordered
by state code purely for determinism - inference never treats same-year
pairs as transmissible, so the ordering carries no causal meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .constants import STATE_CODES, STATE_SET
from .errors import UnknownFocus, UnknownState
from .ingest import AdoptionTable


@dataclass(frozen=True)
class Cascade:
    policy_id: str
    events: tuple[tuple[str, float], ...]  # (state, time), ascending by (time, state)

    @property
    def states(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.events)


@dataclass(frozen=True)
class CascadeSet:
    cascades: tuple[Cascade, ...]
    node_universe: tuple[str, ...] = STATE_CODES


class CountPair(NamedTuple):
    creations: int
    adoptions: int


@dataclass(frozen=True)
class AdoptionStats:
    by_year: dict[int, CountPair]
    by_state: dict[str, CountPair]
    by_topic: dict[str, CountPair]

    @property
    def total(self) -> int:
        return sum(c + a for c, a in self.by_year.values())


def build_cascades(table: AdoptionTable, node_universe: tuple[str, ...] = STATE_CODES) -> CascadeSet:
    by_policy: dict[str, list[tuple[str, int]]] = {}
    for r in table.records:
        by_policy.setdefault(r.policy_id, []).append((r.state, r.year))
    cascades = tuple(
        Cascade(pid, tuple(sorted(((s, y) for s, y in evs), key=lambda e: (e[1], e[0]))))
        for pid, evs in sorted(by_policy.items())
    )
    return CascadeSet(cascades=cascades, node_universe=node_universe)


def _is_creation(table: AdoptionTable, record) -> bool:
    return record.year == table.policies[record.policy_id].first_year


def resolve_focus(table: AdoptionTable, focus: str) -> tuple[str, str]:
    """Classify a focus token as ('state'|'topic'|'policy', value).

    State codes are two letters, so collisions with topic labels or policy
    ids are not a practical concern; resolution order is state, topic,
    policy.
    """
    if focus in STATE_SET:
        return ("state", focus)
    if focus in table.topics:
        return ("topic", focus)
    if focus in table.policies:
        return ("policy", focus)
    raise UnknownFocus(focus)


def adoption_stats(table: AdoptionTable, focus: str | None = None) -> AdoptionStats:
    """Tally creations (first-year adoptions) vs existing-policy adoptions on
    the year, state, and topic axes, optionally restricted to a focus."""
    records = table.records
    if focus is not None:
        kind, value = resolve_focus(table, focus)
        if kind == "state":
            records = [r for r in records if r.state == value]
        elif kind == "topic":
            records = [r for r in records if table.policies[r.policy_id].topic == value]
        else:
            records = [r for r in records if r.policy_id == value]

    by_year: dict[int, list[int]] = {}
    by_state: dict[str, list[int]] = {}
    by_topic: dict[str, list[int]] = {}
    for r in records:
        slot = 0 if _is_creation(table, r) else 1
        by_year.setdefault(r.year, [0, 0])[slot] += 1
        by_state.setdefault(r.state, [0, 0])[slot] += 1
        by_topic.setdefault(table.policies[r.policy_id].topic, [0, 0])[slot] += 1

    return AdoptionStats(
        by_year={k: CountPair(*v) for k, v in sorted(by_year.items())},
        by_state={k: CountPair(*v) for k, v in sorted(by_state.items())},
        by_topic={k: CountPair(*v) for k, v in sorted(by_topic.items())},
    )


def policy_activity_order(table: AdoptionTable, state: str, topic: str | None = None) -> list[str]:
    """Topics (or, under a fixed topic, policy ids) sorted descending by the
    chosen state's adoption count, ties and zero-activity alphabetical."""
    if state not in STATE_SET:
        raise UnknownState(state)
    if topic is None:
        counts = {t: 0 for t in table.topics}
        for r in table.records:
            if r.state == state:
                counts[table.policies[r.policy_id].topic] += 1
        return sorted(counts, key=lambda t: (-counts[t], t))

    from .errors import UnknownTopic
    if topic not in table.topics:
        raise UnknownTopic(topic)
    pids = [pid for pid, p in table.policies.items() if p.topic == topic]
    adopted = {r.policy_id for r in table.records if r.state == state}
    label = {pid: table.policies[pid].display_name for pid in pids}
    return sorted(pids, key=lambda pid: (-(1 if pid in adopted else 0), label[pid], pid))
