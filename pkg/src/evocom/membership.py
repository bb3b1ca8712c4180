"""Populate community skeletons with node ids.

At every transition t-1 -> t each surviving community keeps a random core of
``ceil(core_ratio * size)`` members (never more than its new target size).
Open slots are then filled, in order, from nodes that just left *another*
community, from the idle pool, and finally from fresh ids. Leavers travel in
bundles of ``migration_chunk`` nodes, each bundle landing in one open
community picked with probability proportional to its remaining demand, so a
community draws from a handful of predecessors rather than from all of them.
Members of a
community that dies at t-1 go idle and become recruitable from t+1 on, so a
death never feeds a community that exists at the very next step.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .model import BIRTH, IDLE, EvolvingCommunity, FlowRecord, StaticCommunity
from .sampling import RngStream
from .scenario import CommunitySkeleton, ScenarioConfig

# guards ceil() against products such as 0.1 * 30 = 3.0000000000000004
_EPS = 1e-9


def retained_count(core_ratio: float, prev_size: int, target: int) -> int:
    return min(math.ceil(core_ratio * prev_size - _EPS), target)


@dataclass
class NodePool:
    next_fresh_id: int = 0
    idle: set = field(default_factory=set)
    active_assignment: dict = field(default_factory=dict)

    def fresh(self, n: int) -> list[int]:
        ids = list(range(self.next_fresh_id, self.next_fresh_id + n))
        self.next_fresh_id += n
        return ids


def assign_members(skeletons: list[CommunitySkeleton], config: ScenarioConfig,
                   rng: RngStream) -> tuple[list[EvolvingCommunity], list[FlowRecord]]:
    gen = rng.generator
    T = config.T
    by_k = {s.k: s for s in skeletons}
    alive = [sorted(s.k for s in skeletons if s.birth_t <= t < s.birth_t + s.lifespan) for t in range(T)]

    def target(k: int, t: int) -> int:
        s = by_k[k]
        return s.target_sizes[t - s.birth_t]

    chunk = config.migration_chunk or config.min_size
    pool = NodePool()
    members: dict[tuple[int, int], frozenset] = {}
    flows: list[FlowRecord] = []

    for t in range(T):
        prev_alive = set(alive[t - 1]) if t > 0 else set()
        now_alive = alive[t]
        surviving = [k for k in now_alive if k in prev_alive]
        newborn = [k for k in now_alive if k not in prev_alive]
        dying = sorted(prev_alive - set(now_alive))

        current: dict[int, list[int]] = {}
        sources: dict[int, Counter] = {k: Counter() for k in now_alive}
        leavers: list[tuple[int, int]] = []
        slots: list[int] = []

        for k in surviving:
            prev = sorted(members[(k, t - 1)])
            n_keep = retained_count(by_k[k].core_ratio, len(prev), target(k, t))
            keep_idx = gen.choice(len(prev), size=n_keep, replace=False) if n_keep else []
            keep = sorted(prev[i] for i in keep_idx)
            current[k] = keep
            if keep:
                sources[k][k] = len(keep)
            kept = set(keep)
            leavers.extend((v, k) for v in prev if v not in kept)
            slots.extend([k] * (target(k, t) - n_keep))
        for k in newborn:
            current[k] = []
            slots.extend([k] * target(k, t))

        slots = [slots[i] for i in gen.permutation(len(slots))]
        unplaced = _place_leavers(leavers, slots, current, sources, chunk, gen)

        if slots and pool.idle:
            idle = sorted(pool.idle)
            n_take = min(len(idle), len(slots))
            picked = [idle[i] for i in gen.choice(len(idle), size=n_take, replace=False)]
            for v, k in zip(picked, slots):
                current[k].append(v)
                sources[k][IDLE] += 1
            pool.idle.difference_update(picked)
            slots = slots[n_take:]

        for v, k in zip(pool.fresh(len(slots)), slots):
            current[k].append(v)
            sources[k][BIRTH] += 1

        pool.idle.update(unplaced)
        for k in dying:
            pool.idle.update(members[(k, t - 1)])

        pool.active_assignment = {}
        for k in now_alive:
            members[(k, t)] = frozenset(current[k])
            for v in current[k]:
                pool.active_assignment[v] = k
            flows.append(FlowRecord(t, k, dict(sorted(sources[k].items(), key=_source_key))))

    communities = []
    for s in sorted(skeletons, key=lambda s: s.k):
        seq = tuple(StaticCommunity(s.k, t, members[(s.k, t)]) for t in range(s.birth_t, s.birth_t + s.lifespan))
        communities.append(EvolvingCommunity(s.k, s.birth_t, seq))
    return communities, flows


def _place_leavers(leavers, slots, current, sources, chunk, gen):
    """Move leavers into open slots of other communities, ``chunk`` nodes at a time.

    Each origin's leavers are cut into bundles of at most ``chunk`` nodes; a
    bundle picks a uniformly random open slot among communities other than
    its origin and moves into that slot's community as far as the community
    has room, spilling the rest into the next random pick. ``slots`` is
    consumed in place. Returns the leavers that found no room.
    """
    by_origin: dict[int, list[int]] = {}
    for v, origin in leavers:
        by_origin.setdefault(origin, []).append(v)
    bundles = []
    for origin in sorted(by_origin):
        group = sorted(by_origin[origin])
        group = [group[i] for i in gen.permutation(len(group))]
        bundles.extend((origin, group[i:i + chunk]) for i in range(0, len(group), chunk))
    bundles = [bundles[i] for i in gen.permutation(len(bundles))]

    open_slots = Counter(slots)
    unplaced = []
    for origin, nodes in bundles:
        while nodes:
            eligible = [k for k in sorted(open_slots) if k != origin and open_slots[k] > 0]
            if not eligible:
                unplaced.extend(nodes)
                break
            weights = np.array([open_slots[k] for k in eligible], dtype=float)
            k = eligible[int(gen.choice(len(eligible), p=weights / weights.sum()))]
            n = min(open_slots[k], len(nodes))
            current[k].extend(nodes[:n])
            sources[k][origin] += n
            open_slots[k] -= n
            nodes = nodes[n:]

    # keep the remaining slots in their shuffled order
    remaining = []
    for k in slots:
        if open_slots[k] > 0:
            remaining.append(k)
            open_slots[k] -= 1
    slots[:] = remaining
    return unplaced


def _source_key(item):
    src = item[0]
    return (1, src) if isinstance(src, str) else (0, src)


def turnover_of_transition(prev: StaticCommunity, nxt: StaticCommunity) -> float:
    """Fraction of ``nxt``'s members that were not members of ``prev``."""
    if not nxt.members:
        return 0.0
    return len(nxt.members - prev.members) / len(nxt.members)
