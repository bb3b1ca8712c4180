import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evocom.model import StaticCommunity
from evocom.netgen import (
    _triangle_pairs, bernoulli_positions, generate_all, generate_snapshot, generate_snapshot_naive,
)
from evocom.sampling import RngStream


def blocks(*sizes, t=0):
    out, start = [], 0
    for k, n in enumerate(sizes):
        out.append(StaticCommunity(k, t, frozenset(range(start, start + n))))
        start += n
    return out


@pytest.mark.parametrize("n", [2, 3, 7, 50, 333, 1001, 3001])
def test_triangle_pairs_match_numpy(n):
    i, j = np.triu_indices(n, 1)
    k = np.arange(i.size)
    ii, jj = _triangle_pairs(k, n)
    assert np.array_equal(ii, i) and np.array_equal(jj, j)


def test_bernoulli_positions_edges_cases():
    gen = np.random.default_rng(0)
    assert bernoulli_positions(0, 0.5, gen).size == 0
    assert bernoulli_positions(10, 0.0, gen).size == 0
    assert np.array_equal(bernoulli_positions(5, 1.0, gen), np.arange(5))


@given(n=st.integers(1, 3000), p=st.floats(0.001, 0.999), seed=st.integers(0, 2**32))
@settings(max_examples=80, deadline=None)
def test_bernoulli_positions_sorted_unique_in_range(n, p, seed):
    pos = bernoulli_positions(n, p, np.random.default_rng(seed))
    assert np.all(np.diff(pos) > 0)
    assert pos.size == 0 or (pos[0] >= 0 and pos[-1] < n)


def test_two_triangles_with_certain_inside_no_outside():
    s = generate_snapshot(blocks(3, 3), 1.0, 0.0, RngStream(0))
    assert s.edges == ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5))


def test_complete_graph():
    s = generate_snapshot(blocks(10), 1.0, 0.0, RngStream(0))
    assert s.n_edges == 45


def test_edge_count_for_two_blocks_of_50():
    # two blocks of 50 at p_in=0.5, p_out=0: 2 * 1225 pairs * 0.5 = 1225 expected edges
    counts = [generate_snapshot(blocks(50, 50), 0.5, 0.0, RngStream(s)).n_edges for s in range(30)]
    sd = math.sqrt(2450 * 0.25)
    assert all(abs(c - 1225) < 4 * sd for c in counts)


def test_single_block_of_50_edge_count():
    c = generate_snapshot(blocks(50), 0.5, 0.1, RngStream(1)).n_edges
    assert abs(c - 612.5) < 3 * math.sqrt(1225 * 0.25)


def test_snapshot_is_simple_and_sorted():
    s = generate_snapshot(blocks(40, 30, 20), 0.3, 0.05, RngStream(2), t=4)
    assert s.t == 4
    assert list(s.edges) == sorted(set(s.edges))
    assert all(u < v for u, v in s.edges)
    assert s.active_nodes == frozenset(range(90))


def test_empty_and_singleton():
    assert generate_snapshot([], 0.5, 0.1, RngStream(0), t=3).n_edges == 0
    assert generate_snapshot_naive(blocks(1), 0.5, 0.1, RngStream(0)).n_edges == 0


def test_fast_and_naive_agree_in_distribution():
    comms = blocks(30, 20, 10)
    fast = np.array([generate_snapshot(comms, 0.4, 0.05, RngStream(s, "f")).n_edges for s in range(200)])
    slow = np.array([generate_snapshot_naive(comms, 0.4, 0.05, RngStream(s, "n")).n_edges for s in range(200)])
    se = math.sqrt(fast.var(ddof=1) / 200 + slow.var(ddof=1) / 200)
    assert abs(fast.mean() - slow.mean()) < 3 * se


def test_generate_all_uses_per_step_streams(stable_gt):
    again = generate_all(stable_gt.communities, stable_gt.T, 0.5, 0.05, stable_gt.seed)
    assert tuple(again) == stable_gt.snapshots
    other = generate_all(stable_gt.communities, stable_gt.T, 0.5, 0.05, stable_gt.seed + 1)
    assert tuple(other) != stable_gt.snapshots
