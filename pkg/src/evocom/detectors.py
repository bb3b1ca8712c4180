"""Reference dynamic detector: per-snapshot Louvain plus Jaccard matching.

External tools plug into the evaluation through the membership CSV format;
this module only exists so the whole pipeline can run without them.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from .model import GroundTruth, Snapshot, TemporalPartition
from .sampling import RngStream

_MIN_GAIN = 1e-12


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class _Graph:
    """Weighted undirected graph; self-loop weight stored once in ``adj[i][i]``."""

    def __init__(self, n: int):
        self.adj: list[dict[int, float]] = [dict() for _ in range(n)]

    def add(self, u: int, v: int, w: float = 1.0):
        self.adj[u][v] = self.adj[u].get(v, 0.0) + w
        if u != v:
            self.adj[v][u] = self.adj[v].get(u, 0.0) + w

    def degrees(self) -> list[float]:
        return [sum(nb.values()) + nb.get(i, 0.0) for i, nb in enumerate(self.adj)]

    def total_weight(self) -> float:
        return sum(self.degrees()) / 2


def _modularity(g: _Graph, comm: Sequence[int], resolution: float) -> float:
    m = g.total_weight()
    if m == 0:
        return 0.0
    inside: dict[int, float] = {}
    deg: dict[int, float] = {}
    for i, (nb, k) in enumerate(zip(g.adj, g.degrees())):
        ci = comm[i]
        deg[ci] = deg.get(ci, 0.0) + k
        for j, w in nb.items():
            if comm[j] == ci and j >= i:
                inside[ci] = inside.get(ci, 0.0) + w
    return sum(inside.get(c, 0.0) / m - resolution * (d / (2 * m)) ** 2 for c, d in deg.items())


def _local_moving(g: _Graph, resolution: float, gen: np.random.Generator) -> tuple[list[int], bool]:
    n = len(g.adj)
    comm = list(range(n))
    k = g.degrees()
    m2 = sum(k)
    tot = list(k)
    moved_any = False
    if m2 == 0:
        return comm, False
    while True:
        moved = False
        for i in gen.permutation(n).tolist():
            ci = comm[i]
            links: dict[int, float] = {}
            for j, w in g.adj[i].items():
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[ci] -= k[i]
            best, best_gain = ci, links.get(ci, 0.0) - resolution * tot[ci] * k[i] / m2
            for c in sorted(links):
                gain = links[c] - resolution * tot[c] * k[i] / m2
                if gain > best_gain + _MIN_GAIN:
                    best, best_gain = c, gain
            tot[best] += k[i]
            if best != ci:
                comm[i] = best
                moved = moved_any = True
        if not moved:
            return comm, moved_any


def _aggregate(g: _Graph, comm: list[int]) -> tuple[_Graph, list[int]]:
    ids = {c: i for i, c in enumerate(sorted(set(comm)))}
    dense = [ids[c] for c in comm]
    h = _Graph(len(ids))
    for i, nb in enumerate(g.adj):
        for j, w in nb.items():
            if j >= i:
                h.add(dense[i], dense[j], w)
    return h, dense


def louvain_levels(g: Snapshot, resolution: float = 1.0, rng=None) -> list[tuple[dict, float]]:
    """Partition and modularity after each aggregation level (first entry: singletons)."""
    gen = _as_generator(rng)
    nodes = sorted(g.active_nodes)
    index = {v: i for i, v in enumerate(nodes)}
    graph = _Graph(len(nodes))
    for u, v in g.edges:
        graph.add(index[u], index[v])
    base = graph
    membership = list(range(len(nodes)))
    levels = [({v: i for i, v in enumerate(nodes)}, _modularity(base, membership, resolution))]
    while True:
        comm, moved = _local_moving(graph, resolution, gen)
        if not moved:
            break
        graph, dense = _aggregate(graph, comm)
        membership = [dense[c] for c in membership]
        levels.append(({v: membership[i] for i, v in enumerate(nodes)}, _modularity(base, membership, resolution)))
    return levels


def louvain_snapshot(g: Snapshot, resolution: float = 1.0, rng=None) -> dict:
    """Greedy modularity clustering (local moving + aggregation until no move improves)."""
    return louvain_levels(g, resolution, rng)[-1][0]


def _groups(labeling: Mapping) -> dict:
    out: dict = {}
    for v, c in labeling.items():
        out.setdefault(c, set()).add(v)
    return out


def match_snapshots(labelings: Sequence[Mapping], jaccard_threshold: float = 0.3) -> TemporalPartition:
    """Give per-snapshot clusters identities that persist across time.

    Between consecutive snapshots, candidate (previous, current) pairs are
    accepted greedily by decreasing Jaccard similarity of their member sets,
    ties going to the smaller previous id; each side is matched at most once
    and only pairs at or above the threshold count. Unmatched clusters get a
    fresh id, and ids are never reused.
    """
    next_id = 0
    prev: dict[int, frozenset] = {}
    assignment = []
    for labeling in labelings:
        groups = [frozenset(m) for m in _groups(labeling).values()]
        groups.sort(key=min)
        cands = []
        for gi, cur in enumerate(groups):
            for pid, members in prev.items():
                inter = len(cur & members)
                if inter:
                    jac = inter / len(cur | members)
                    if jac >= jaccard_threshold:
                        cands.append((-jac, pid, gi))
        cands.sort()
        ids: dict[int, int] = {}
        used = set()
        for _, pid, gi in cands:
            if pid not in used and gi not in ids:
                ids[gi] = pid
                used.add(pid)
        for gi in range(len(groups)):
            if gi not in ids:
                ids[gi] = next_id
                next_id += 1
        prev = {ids[gi]: groups[gi] for gi in range(len(groups))}
        assignment.append({v: ids[gi] for gi, members in enumerate(groups) for v in members})
    return TemporalPartition(tuple(assignment), "detected")


def detect(snapshots: Sequence[Snapshot] | GroundTruth, resolution: float = 1.0,
           match_threshold: float = 0.3, seed: int = 0) -> TemporalPartition:
    """Louvain on every snapshot (substream ``louvain/<t>``), then matching."""
    if isinstance(snapshots, GroundTruth):
        snapshots = snapshots.snapshots
    labelings = [louvain_snapshot(s, resolution, RngStream(seed, f"louvain/{s.t}")) for s in snapshots]
    return match_snapshots(labelings, match_threshold)
