"""Community life-cycle events from a sequence of partitions.

Consecutive snapshots are compared through member-set intersections. For a
community ``a`` at t-1 and ``b`` at t the overlap ratio is
``|a & b| / min(|a|, |b|)``; a ratio at or above the threshold makes a strong
link, anything smaller but positive a partial link. Each community instance
receives one classification:

* no link to the previous snapshot: ``form``
* no link to the next snapshot: ``dissolve`` (also at the last snapshot when
  ``close_horizon`` is set, which treats the end of observation as an end of
  life)
* one strong predecessor and nothing else: ``continue`` / ``grow`` / ``shrink``
  by size, unless that predecessor has several strong successors, in which
  case the successors are reported together by one ``divide`` event
* several linked predecessors: the merge family; ``partial_`` when any link is
  partial, ``_and_grow`` when the result outgrows its largest predecessor
* a single partial predecessor: ``partial_survive_and_grow`` when larger,
  otherwise ``shrink`` / ``continue``
"""

from __future__ import annotations

import enum
from collections.abc import Hashable, Iterable
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .model import GroundTruth, TemporalPartition


class EventKind(str, enum.Enum):
    FORM = "form"
    CONTINUE = "continue"
    DISSOLVE = "dissolve"
    GROW = "grow"
    SHRINK = "shrink"
    MERGE = "merge"
    MERGE_AND_GROW = "merge_and_grow"
    PARTIAL_MERGE = "partial_merge"
    PARTIAL_MERGE_AND_GROW = "partial_merge_and_grow"
    DIVIDE = "divide"
    DIVIDE_AND_GROW = "divide_and_grow"
    PARTIAL_SURVIVE_AND_GROW = "partial_survive_and_grow"


KINDS = tuple(EventKind)


@dataclass(frozen=True)
class CommunityEvent:
    t: int
    kind: EventKind
    subject: tuple
    related: tuple = ()

    def to_dict(self) -> dict:
        return {"t": self.t, "kind": self.kind.value, "subject": list(self.subject), "related": list(self.related)}

    @classmethod
    def from_dict(cls, d: dict) -> "CommunityEvent":
        return cls(int(d["t"]), EventKind(d["kind"]), tuple(d["subject"]), tuple(d.get("related", ())))


@dataclass(frozen=True)
class EventLog:
    T: int
    events: tuple

    def counts(self) -> np.ndarray:
        """Matrix of event counts, rows in ``KINDS`` order, one column per timestep."""
        out = np.zeros((len(KINDS), self.T), dtype=np.int64)
        row = {k: i for i, k in enumerate(KINDS)}
        for e in self.events:
            out[row[e.kind], e.t] += 1
        return out

    def of_kind(self, kind: EventKind) -> list[CommunityEvent]:
        return [e for e in self.events if e.kind == kind]

    def to_list(self) -> list[dict]:
        return [e.to_dict() for e in self.events]


def _sorted(labels: Iterable[Hashable]) -> list:
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=repr)


def _links(prev: dict, cur: dict, threshold: float):
    """strong/partial predecessor lists per current label, and strong successors per previous label."""
    owner = {}
    for a, members in prev.items():
        for v in members:
            owner[v] = a
    strong_pred = {b: [] for b in cur}
    partial_pred = {b: [] for b in cur}
    strong_succ = {a: [] for a in prev}
    for b in _sorted(cur):
        overlap: dict = {}
        for v in cur[b]:
            a = owner.get(v)
            if a is not None:
                overlap[a] = overlap.get(a, 0) + 1
        for a in _sorted(overlap):
            ratio = overlap[a] / min(len(prev[a]), len(cur[b]))
            if ratio >= threshold:
                strong_pred[b].append(a)
                strong_succ[a].append(b)
            else:
                partial_pred[b].append(a)
    return strong_pred, partial_pred, strong_succ


def _has_overlap(members: frozenset, nxt: dict) -> bool:
    return any(members & m for m in nxt.values())


def extract_events(p: TemporalPartition, threshold: float = 0.5, close_horizon: bool = True) -> EventLog:
    if not 0.0 < threshold <= 1.0:
        raise ConfigurationError(f"threshold must be in (0, 1], got {threshold}", key="threshold")
    T = p.T
    groups = [p.communities_at(t) for t in range(T)]
    events: list[CommunityEvent] = []
    for t in range(T):
        cur = groups[t]
        prev = groups[t - 1] if t > 0 else {}
        nxt = groups[t + 1] if t + 1 < T else None
        strong, partial, succ = _links(prev, cur, threshold)

        dividing = {a: bs for a, bs in succ.items() if len(bs) >= 2}
        for a in _sorted(dividing):
            bs = dividing[a]
            grown = sum(len(cur[b]) for b in bs) > len(prev[a])
            kind = EventKind.DIVIDE_AND_GROW if grown else EventKind.DIVIDE
            events.append(CommunityEvent(t, kind, tuple(bs), (a,)))

        for b in _sorted(cur):
            size = len(cur[b])
            linked = strong[b] + partial[b]
            related = tuple(_sorted(linked))
            ends = (nxt is None and close_horizon) or (nxt is not None and not _has_overlap(cur[b], nxt))
            if not linked:
                events.append(CommunityEvent(t, EventKind.FORM, (b,), ()))
                if ends:
                    events.append(CommunityEvent(t, EventKind.DISSOLVE, (b,), ()))
                continue
            if ends:
                events.append(CommunityEvent(t, EventKind.DISSOLVE, (b,), related))
                continue
            kind = _classify(size, strong[b], partial[b], prev, dividing)
            if kind is not None:
                events.append(CommunityEvent(t, kind, (b,), related))
    return EventLog(T, tuple(events))


def _classify(size, strong, partial, prev, dividing):
    largest = max(len(prev[a]) for a in strong + partial)
    if len(strong) + len(partial) >= 2:
        grown = size > largest
        if partial:
            return EventKind.PARTIAL_MERGE_AND_GROW if grown else EventKind.PARTIAL_MERGE
        return EventKind.MERGE_AND_GROW if grown else EventKind.MERGE
    if strong:
        if strong[0] in dividing:
            return None  # reported by the divide event of its predecessor
        if size > largest:
            return EventKind.GROW
        return EventKind.SHRINK if size < largest else EventKind.CONTINUE
    if size > largest:
        return EventKind.PARTIAL_SURVIVE_AND_GROW
    return EventKind.SHRINK if size < largest else EventKind.CONTINUE


def ground_truth_events(gt: GroundTruth, threshold: float = 0.5, close_horizon: bool = True) -> EventLog:
    return extract_events(gt.partition(), threshold, close_horizon)


def event_count_diff(truth_log: EventLog, detected_log: EventLog) -> np.ndarray:
    """Detected minus truth counts per (kind, timestep); positive means overestimation."""
    T = max(truth_log.T, detected_log.T)
    a = np.zeros((len(KINDS), T), dtype=np.int64)
    b = np.zeros_like(a)
    a[:, :truth_log.T] = truth_log.counts()
    b[:, :detected_log.T] = detected_log.counts()
    return b - a


def diff_rows(diff: np.ndarray) -> list[tuple[str, int, int]]:
    """Long format ``(kind, t, value)`` rows of a diff matrix."""
    return [(KINDS[i].value, t, int(diff[i, t])) for i in range(diff.shape[0]) for t in range(diff.shape[1])]
