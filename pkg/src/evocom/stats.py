"""Descriptive statistics of a ground truth.

Community dynamics per transition (size change, emigrants, turnover,
predecessors), system renewal per snapshot, member trajectories, and graph
properties of each snapshot (components from scipy, block-synchronous BFS
for path lengths).
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .model import GroundTruth, Snapshot

DYNAMICS_FIELDS = ("size_change", "emigrant_ratio", "turnover_ratio", "n_predecessors")


def summarize(values: Iterable[float]) -> dict:
    arr = np.asarray([v for v in values if v is not None], dtype=float)
    if arr.size == 0:
        return {"n": 0, "mean": None, "std": None, "min": None, "max": None}
    return {"n": int(arr.size), "mean": float(arr.mean()), "std": float(arr.std()),
            "min": float(arr.min()), "max": float(arr.max())}


def community_dynamics(gt: GroundTruth) -> dict:
    """Per-transition records, per-snapshot system renewal, and their aggregates.

    A transition is one community going from t to t+1. Surviving transitions
    carry every field; a community's final transition (death before the
    horizon) only carries the emigrant ratio.
    """
    T = gt.T
    owner = [dict() for _ in range(T)]
    for c in gt.communities:
        for sc in c.sequence:
            for v in sc.members:
                owner[sc.t][v] = c.k
    active = [s.active_nodes for s in gt.snapshots]

    records = []
    for c in gt.communities:
        for sc in c.sequence:
            t = sc.t
            if t + 1 >= T:
                continue
            prev = sc.members
            moved_on = sum(1 for v in prev if v in active[t + 1] and owner[t + 1].get(v) != c.k)
            rec = {"k": c.k, "t": t, "survives": c.alive_at(t + 1), "emigrant_ratio": moved_on / len(prev),
                   "size_change": None, "turnover_ratio": None, "n_predecessors": None}
            if rec["survives"]:
                nxt = c.at(t + 1).members
                rec["size_change"] = (len(nxt) - len(prev)) / len(prev)
                rec["turnover_ratio"] = len(nxt - prev) / len(nxt)
                rec["n_predecessors"] = len({owner[t][v] for v in nxt if v in owner[t]})
            records.append(rec)

    renewal = []
    for t in range(1, T):
        if active[t]:
            renewal.append({"t": t, "system_renewal": len(active[t] - active[t - 1]) / len(active[t])})

    aggregate = {f: summarize(r[f] for r in records) for f in DYNAMICS_FIELDS}
    aggregate["system_renewal"] = summarize(r["system_renewal"] for r in renewal)
    return {"transitions": records, "renewal": renewal, "aggregate": aggregate}


def member_trajectories(gt: GroundTruth) -> dict[int, dict]:
    duration: dict[int, int] = {}
    visited: dict[int, set] = {}
    for s in gt.snapshots:
        for v in s.active_nodes:
            duration[v] = duration.get(v, 0) + 1
    for c in gt.communities:
        for sc in c.sequence:
            for v in sc.members:
                visited.setdefault(v, set()).add(c.k)
    return {v: {"activity_duration": duration[v], "n_communities_visited": len(visited.get(v, ()))}
            for v in sorted(duration)}


def _adjacency(snapshot: Snapshot) -> tuple[list[int], csr_matrix]:
    nodes = sorted(snapshot.active_nodes)
    n = len(nodes)
    if snapshot.edges:
        e = np.searchsorted(np.array(nodes, dtype=np.int64), np.array(snapshot.edges, dtype=np.int64))
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
    else:
        rows = cols = np.empty(0, dtype=np.int64)
    A = csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
    return nodes, A


def modularity(snapshot: Snapshot, labels: Mapping, resolution: float = 1.0) -> float:
    """Newman modularity ``sum_c e_c/m - resolution * (d_c/2m)^2``."""
    m = snapshot.n_edges
    if m == 0:
        return 0.0
    ids: dict = {}
    code = {v: ids.setdefault(c, len(ids)) for v, c in labels.items()}
    e = np.array(snapshot.edges, dtype=np.int64)
    cu = np.fromiter((code[x] for x in e[:, 0].tolist()), dtype=np.int64, count=m)
    cv = np.fromiter((code[x] for x in e[:, 1].tolist()), dtype=np.int64, count=m)
    internal = np.bincount(cu[cu == cv], minlength=len(ids))
    degree = np.bincount(np.concatenate([cu, cv]), minlength=len(ids))
    return float((internal / m).sum() - resolution * ((degree / (2 * m)) ** 2).sum())


def _bfs_distances(A: csr_matrix, sources: np.ndarray, block: int = 256):
    """Yield hop-distance rows (-1 when unreachable) for ``sources``, one block of BFS trees at a time.

    All trees of a block advance together through sparse-dense products, which
    is far cheaper than per-source search on dense, low-diameter snapshots.
    """
    n = A.shape[0]
    for start in range(0, len(sources), block):
        src = sources[start:start + block]
        dist = np.full((n, len(src)), -1, dtype=np.int32)
        frontier = np.zeros((n, len(src)), dtype=np.float32)
        frontier[src, np.arange(len(src))] = 1
        dist[src, np.arange(len(src))] = 0
        level = 0
        while True:
            level += 1
            reached = (A @ frontier > 0) & (dist < 0)
            if not reached.any():
                break
            dist[reached] = level
            frontier = reached.astype(np.float32)
        yield dist.T


def average_clustering(A: csr_matrix) -> float:
    """Mean local clustering coefficient; nodes of degree < 2 count as 0."""
    n = A.shape[0]
    if n == 0:
        return 0.0
    deg = np.asarray(A.sum(axis=1)).ravel()
    tri = np.asarray((A @ A).multiply(A).sum(axis=1)).ravel() / 2
    pairs = deg * (deg - 1) / 2
    local = np.divide(tri, pairs, out=np.zeros(n), where=pairs > 0)
    return float(local.mean())


def network_properties(snapshot: Snapshot, labels: Mapping | None = None,
                       exact_threshold: int = 5000, n_sources: int = 500,
                       rng: np.random.Generator | None = None) -> dict:
    """Graph statistics of one snapshot.

    Path statistics are computed on the largest connected component, exactly
    up to ``exact_threshold`` nodes and from ``n_sources`` random BFS sources
    above it. A snapshot without edges yields a record flagged ``degenerate``.
    """
    nodes, A = _adjacency(snapshot)
    n = len(nodes)
    deg = np.asarray(A.sum(axis=1)).ravel().astype(np.int64) if n else np.empty(0, dtype=np.int64)
    hist = np.bincount(deg).tolist() if n else []
    rec = {
        "t": snapshot.t,
        "n_nodes": n,
        "n_edges": snapshot.n_edges,
        "degree_histogram": hist,
        "mean_degree": float(deg.mean()) if n else 0.0,
        "diameter": None,
        "avg_shortest_path": None,
        "lcc_size": 0,
        "clustering": None,
        "modularity": None,
        "sampled_paths": False,
        "degenerate": snapshot.n_edges == 0,
    }
    if labels is not None:
        rec["modularity"] = modularity(snapshot, labels)
    if snapshot.n_edges == 0:
        return rec

    rec["clustering"] = average_clustering(A)
    _, comp = connected_components(A, directed=False)
    sizes = np.bincount(comp)
    big = int(np.argmax(sizes))
    keep = np.flatnonzero(comp == big)
    rec["lcc_size"] = int(keep.size)
    sub = A[keep][:, keep].astype(np.float32)
    if keep.size > exact_threshold:
        gen = rng if rng is not None else np.random.default_rng(0)
        sources = np.sort(gen.choice(keep.size, size=min(n_sources, keep.size), replace=False))
        rec["sampled_paths"] = True
    else:
        sources = np.arange(keep.size)
    pair_count = len(sources) * (keep.size - 1)
    longest, total = 0, 0
    for d in _bfs_distances(sub, sources):
        longest = max(longest, int(d.max()))
        total += int(d.sum(dtype=np.int64))
    rec["diameter"] = longest
    rec["avg_shortest_path"] = total / pair_count if pair_count else 0.0
    return rec


def snapshot_table(gt: GroundTruth) -> list[dict]:
    """``network_properties`` of every non-empty snapshot, with planted-partition modularity."""
    part = gt.partition()
    return [network_properties(s, part.at(s.t)) for s in gt.snapshots if s.n_nodes]


NETWORK_FIELDS = ("n_nodes", "n_edges", "diameter", "avg_shortest_path", "clustering", "modularity")


def summary(gt: GroundTruth, network: bool = True) -> dict:
    """Aggregate report: community counts, lifespans, dynamics and (optionally) network properties."""
    per_t = [len(gt.communities_at(t)) for t in range(gt.T)]
    nonempty = [c for c in per_t if c > 0]
    sizes = [len(sc) for c in gt.communities for sc in c.sequence]
    traj = member_trajectories(gt)
    dyn = community_dynamics(gt)
    out = {
        "seed": gt.seed,
        "n_communities": len(gt.communities),
        "n_static_communities": len(sizes),
        "n_nodes": gt.n_nodes(),
        "communities_per_snapshot": per_t,
        "n_nonempty_snapshots": len(nonempty),
        "parallel_communities": summarize(nonempty),
        "lifespan": summarize(c.lifespan for c in gt.communities),
        "static_size": summarize(sizes),
        "activity_duration": summarize(r["activity_duration"] for r in traj.values()),
        "communities_visited": summarize(r["n_communities_visited"] for r in traj.values()),
        "dynamics": dyn["aggregate"],
    }
    if network:
        table = snapshot_table(gt)
        out["network"] = {f: summarize(r[f] for r in table) for f in NETWORK_FIELDS}
    return _clean(out)


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj
