"""Domain types: snapshots, static and evolving communities, partitions.

All types are frozen after construction. Node ids are dense non-negative
integers; edges are stored as sorted ``(u, v)`` tuples with ``u < v``.
"""

from __future__ import annotations

from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:
    from .scenario import ScenarioConfig

BIRTH = "BIRTH"
IDLE = "IDLE"

FlowSource = Union[int, str]


@dataclass(frozen=True)
class Snapshot:
    t: int
    active_nodes: frozenset
    edges: tuple = ()

    @property
    def n_nodes(self) -> int:
        return len(self.active_nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class StaticCommunity:
    k: int
    t: int
    members: frozenset

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class EvolvingCommunity:
    k: int
    birth_t: int
    sequence: tuple

    @property
    def lifespan(self) -> int:
        return len(self.sequence)

    @property
    def death_t(self) -> int:
        """Last timestep of life (inclusive)."""
        return self.birth_t + self.lifespan - 1

    def alive_at(self, t: int) -> bool:
        return self.birth_t <= t <= self.death_t

    def at(self, t: int) -> StaticCommunity:
        return self.sequence[t - self.birth_t]


@dataclass(frozen=True)
class FlowRecord:
    """Where the members of community ``destination`` at time ``t`` came from.

    ``sources`` maps a community id at ``t - 1`` (or ``BIRTH`` / ``IDLE``)
    to a node count; counts sum to the community size.
    """

    t: int
    destination: int
    sources: Mapping

    def total(self) -> int:
        return sum(self.sources.values())


@dataclass(frozen=True)
class TemporalPartition:
    """Per-timestep ``node -> label`` maps. Labels are opaque hashables."""

    assignment: tuple
    source: str = "detected"

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(dict(a) for a in self.assignment))

    @property
    def T(self) -> int:
        return len(self.assignment)

    def at(self, t: int) -> dict:
        return self.assignment[t]

    def communities_at(self, t: int) -> dict[Hashable, frozenset]:
        groups: dict[Hashable, set] = {}
        for node, label in self.assignment[t].items():
            groups.setdefault(label, set()).add(node)
        return {label: frozenset(m) for label, m in groups.items()}

    def nodes_at(self, t: int) -> frozenset:
        return frozenset(self.assignment[t])

    @classmethod
    def from_communities(cls, T: int, groups_per_t: Sequence[Mapping], source: str = "detected"):
        """Build from per-t ``{label: members}`` maps."""
        assignment = []
        for t in range(T):
            a = {}
            for label, members in (groups_per_t[t] if t < len(groups_per_t) else {}).items():
                for v in members:
                    a[v] = label
            assignment.append(a)
        return cls(tuple(assignment), source)


@dataclass(frozen=True)
class GroundTruth:
    config: "ScenarioConfig"
    communities: tuple
    snapshots: tuple
    seed: int
    flows: tuple = field(default=())

    @property
    def T(self) -> int:
        return len(self.snapshots)

    def communities_at(self, t: int) -> list[StaticCommunity]:
        return [c.at(t) for c in self.communities if c.alive_at(t)]

    def partition(self) -> TemporalPartition:
        groups = [{sc.k: sc.members for sc in self.communities_at(t)} for t in range(self.T)]
        return TemporalPartition.from_communities(self.T, groups, source="ground-truth")

    def n_nodes(self) -> int:
        ids = set()
        for s in self.snapshots:
            ids |= s.active_nodes
        return len(ids)


def validate(gt: GroundTruth) -> list[str]:
    """Check every structural invariant; return one message per violation."""
    problems: list[str] = []
    T = gt.config.T
    min_size = gt.config.min_size

    if len(gt.snapshots) != T:
        problems.append(f"snapshot count: {len(gt.snapshots)} snapshots for T={T}")
    for i, snap in enumerate(gt.snapshots):
        if snap.t != i:
            problems.append(f"snapshot order: snapshot {i} carries t={snap.t}")

    members_at: dict[int, dict[int, int]] = {}
    for c in gt.communities:
        if c.lifespan < 1:
            problems.append(f"lifespan: community {c.k} has lifespan {c.lifespan}")
            continue
        if c.birth_t < 0 or c.birth_t + c.lifespan > T:
            problems.append(f"horizon: community {c.k} lives over [{c.birth_t}, {c.birth_t + c.lifespan}) outside [0, {T})")
        for i, sc in enumerate(c.sequence):
            if sc.k != c.k:
                problems.append(f"identity: static community at t={sc.t} of community {c.k} carries k={sc.k}")
            if sc.t != c.birth_t + i:
                problems.append(f"consecutive: community {c.k} has t={sc.t} at position {i}")
            if len(sc.members) < min_size:
                problems.append(f"min size: community {c.k} at t={sc.t} has {len(sc.members)} < {min_size} members")
            seen = members_at.setdefault(sc.t, {})
            for v in sorted(sc.members):
                if v in seen:
                    problems.append(f"overlap: node {v} in communities {seen[v]} and {c.k} at t={sc.t}")
                else:
                    seen[v] = c.k

    all_ids = set()
    for snap in gt.snapshots:
        all_ids |= snap.active_nodes
        in_comm = members_at.get(snap.t, {})
        for v in sorted(set(in_comm) - snap.active_nodes):
            problems.append(f"inactive member: node {v} of community {in_comm[v]} not active at t={snap.t}")
        for v in sorted(snap.active_nodes - set(in_comm)):
            problems.append(f"coverage: active node {v} has no community at t={snap.t}")
        prev = None
        for e in snap.edges:
            u, v = e
            if u == v:
                problems.append(f"self-loop: node {u} at t={snap.t}")
            elif u > v:
                problems.append(f"edge order: ({u}, {v}) at t={snap.t} not stored as u < v")
            if u not in snap.active_nodes or v not in snap.active_nodes:
                problems.append(f"edge endpoint: ({u}, {v}) at t={snap.t} touches an inactive node")
            if prev is not None and e <= prev:
                problems.append(f"duplicate edge: ({u}, {v}) at t={snap.t} duplicated or unsorted")
            prev = e
    if all_ids and (min(all_ids) < 0 or max(all_ids) != len(all_ids) - 1):
        problems.append(f"node ids: {len(all_ids)} ids are not dense in [0, {len(all_ids)})")

    by_key = {(c.k, sc.t): len(sc.members) for c in gt.communities for sc in c.sequence}
    for fr in gt.flows:
        size = by_key.get((fr.destination, fr.t))
        if size is None:
            problems.append(f"flow: record for community {fr.destination} at t={fr.t} has no community")
        elif fr.total() != size:
            problems.append(f"flow: community {fr.destination} at t={fr.t} sources sum to {fr.total()} != {size}")
    return problems
