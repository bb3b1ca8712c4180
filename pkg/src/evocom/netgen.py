"""Stochastic block model snapshots over the planted communities.

Edges inside a community appear with probability ``p_in``, across communities
with ``p_out``, independently per pair and per snapshot. Pair selection uses
geometric skipping, so the cost grows with the number of edges rather than
the number of pairs. ``generate_snapshot_naive`` visits every pair and is
kept as the reference the fast path is tested against.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .model import EvolvingCommunity, Snapshot, StaticCommunity
from .sampling import RngStream


def bernoulli_positions(n_trials: int, p: float, gen: np.random.Generator) -> np.ndarray:
    """Indices of successes in ``n_trials`` independent Bernoulli(p) trials."""
    if n_trials <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(n_trials, dtype=np.int64)
    chunks = []
    last = -1
    batch = int(n_trials * p * 1.1) + 16
    while True:
        gaps = gen.geometric(p, size=batch)
        pos = last + np.cumsum(gaps)
        if pos[-1] >= n_trials:
            chunks.append(pos[pos < n_trials])
            break
        chunks.append(pos)
        last = int(pos[-1])
        batch = int((n_trials - last) * p * 1.1) + 16
    return np.concatenate(chunks).astype(np.int64)


def _triangle_pairs(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map row-major indices of the strict upper triangle of an n x n matrix to (i, j)."""
    total = n * (n - 1) // 2
    # row i starts at offset total - (n - i)(n - i - 1)/2
    r = np.floor((np.sqrt(8.0 * (total - 1 - k) + 1) - 1) / 2).astype(np.int64)
    i = n - 2 - r
    start = total - (n - i) * (n - i - 1) // 2
    # float rounding can put k one row off; correct in both directions
    low = k < start
    i[low] -= 1
    start = total - (n - i) * (n - i - 1) // 2
    nxt = total - (n - i - 1) * (n - i - 2) // 2
    high = k >= nxt
    i[high] += 1
    start = total - (n - i) * (n - i - 1) // 2
    j = k - start + i + 1
    return i, j


def _finish(t: int, nodes, us: list, vs: list) -> Snapshot:
    if us:
        u = np.concatenate(us)
        v = np.concatenate(vs)
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        order = np.lexsort((hi, lo))
        edges = tuple(zip(lo[order].tolist(), hi[order].tolist()))
    else:
        edges = ()
    return Snapshot(t, frozenset(nodes), edges)


def generate_snapshot(communities_at_t: Sequence[StaticCommunity], p_in: float, p_out: float,
                      rng: RngStream, t: int | None = None) -> Snapshot:
    gen = rng.generator
    blocks = [np.array(sorted(c.members), dtype=np.int64) for c in sorted(communities_at_t, key=lambda c: c.k)]
    if t is None:
        t = communities_at_t[0].t if communities_at_t else 0
    us, vs = [], []
    for a, block in enumerate(blocks):
        n = block.size
        idx = bernoulli_positions(n * (n - 1) // 2, p_in, gen)
        if idx.size:
            i, j = _triangle_pairs(idx, n)
            us.append(block[i])
            vs.append(block[j])
        for other in blocks[a + 1:]:
            idx = bernoulli_positions(n * other.size, p_out, gen)
            if idx.size:
                us.append(block[idx // other.size])
                vs.append(other[idx % other.size])
    nodes = [v for block in blocks for v in block.tolist()]
    return _finish(t, nodes, us, vs)


def generate_snapshot_naive(communities_at_t: Sequence[StaticCommunity], p_in: float, p_out: float,
                            rng: RngStream, t: int = 0) -> Snapshot:
    """One uniform draw per unordered node pair."""
    gen = rng.generator
    label = {}
    for c in communities_at_t:
        for v in c.members:
            label[v] = c.k
    nodes = np.array(sorted(label), dtype=np.int64)
    n = nodes.size
    if n < 2:
        return Snapshot(t, frozenset(nodes.tolist()), ())
    i, j = np.triu_indices(n, 1)
    lab = np.array([label[v] for v in nodes.tolist()])
    prob = np.where(lab[i] == lab[j], p_in, p_out)
    hit = gen.random(i.size) < prob
    return _finish(t, nodes.tolist(), [nodes[i[hit]]], [nodes[j[hit]]])


def generate_all(communities: Sequence[EvolvingCommunity], T: int, p_in: float, p_out: float,
                 seed: int) -> list[Snapshot]:
    """One snapshot per timestep, each from its own ``edges/<t>`` substream."""
    snapshots = []
    for t in range(T):
        at_t = [c.at(t) for c in communities if c.alive_at(t)]
        snapshots.append(generate_snapshot(at_t, p_in, p_out, RngStream(seed, f"edges/{t}"), t=t))
    return snapshots
