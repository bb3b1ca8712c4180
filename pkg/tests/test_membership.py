import pytest
from hypothesis import given, settings, strategies as st

from evocom.generate import generate_ground_truth
from evocom.membership import assign_members, retained_count, turnover_of_transition
from evocom.model import BIRTH, IDLE, StaticCommunity, validate
from evocom.sampling import RngStream
from evocom.scenario import CommunitySkeleton
from evocom.stats import community_dynamics

from conftest import scenario


@pytest.mark.parametrize("cnr,prev,target,expected", [
    (0.25, 10, 10, 3), (0.5, 10, 10, 5), (1.0, 10, 10, 10), (1.0, 30, 12, 12), (0.1, 30, 30, 3),
])
def test_retained_count(cnr, prev, target, expected):
    assert retained_count(cnr, prev, target) == expected


def test_hand_example_quarter_core():
    # one community of 10 -> 10 with cnr 0.25 keeps 3 and recruits 7 new members
    cfg = scenario(0.25, T=2, n_communities=1, min_size=10)
    sk = [CommunitySkeleton(0, 0, 2, (10, 10), 0.25)]
    comms, flows = assign_members(sk, cfg, RngStream(0, "membership"))
    a, b = comms[0].sequence
    assert len(a.members & b.members) == 3
    assert flows[1].sources == {0: 3, BIRTH: 7}


def test_leavers_feed_other_communities_first():
    cfg = scenario(0.5, T=2, n_communities=2, min_size=10)
    sk = [CommunitySkeleton(0, 0, 2, (20, 20), 0.5), CommunitySkeleton(1, 0, 2, (20, 20), 0.5)]
    comms, flows = assign_members(sk, cfg, RngStream(4, "membership"))
    nxt = {f.destination: f.sources for f in flows if f.t == 1}
    # each keeps 10 and takes the 10 leavers of the other
    assert nxt == {0: {0: 10, 1: 10}, 1: {0: 10, 1: 10}}


def test_dying_members_idle_only_after_transition():
    cfg = scenario(1.0, T=3, n_communities=3, min_size=5)
    sk = [CommunitySkeleton(0, 0, 1, (10,), 1.0),
          CommunitySkeleton(1, 1, 1, (10,), 1.0),
          CommunitySkeleton(2, 2, 1, (10,), 1.0)]
    comms, flows = assign_members(sk, cfg, RngStream(0, "membership"))
    by = {f.destination: f.sources for f in flows}
    # community 1 is born right after 0 dies: all fresh; community 2 recruits 0's idle members
    assert by[1] == {BIRTH: 10}
    assert by[2] == {IDLE: 10}
    assert comms[2].sequence[0].members == comms[0].sequence[0].members


def test_turnover_of_transition():
    a = StaticCommunity(0, 0, frozenset(range(10)))
    b = StaticCommunity(0, 1, frozenset(range(5, 15)))
    assert turnover_of_transition(a, b) == 0.5


@given(seed=st.integers(0, 2**63), cnr=st.sampled_from([0.1, 0.25, 0.5, 0.75, 1.0]), changing=st.booleans(),
       chunk=st.sampled_from([None, 1, 3, 50]))
@settings(max_examples=40, deadline=None)
def test_generated_instances_are_valid(seed, cnr, changing, chunk):
    cfg = scenario(cnr, changing=changing, migration_chunk=chunk, p_in=0.1, p_out=0.01)
    gt = generate_ground_truth(cfg, seed)
    assert validate(gt) == []
    for c in gt.communities:
        for a, b in zip(c.sequence, c.sequence[1:]):
            assert len(a.members & b.members) >= retained_count(cnr, len(a), len(b))


@given(seed=st.integers(0, 2**63))
@settings(max_examples=25, deadline=None)
def test_full_core_keeps_members(seed):
    gt = generate_ground_truth(scenario(1.0, p_in=0.1, p_out=0.01), seed)
    for r in community_dynamics(gt)["transitions"]:
        if r["survives"]:
            assert r["turnover_ratio"] == 0 and r["n_predecessors"] == 1
        assert r["emigrant_ratio"] == 0


def test_membership_does_not_depend_on_densities():
    a = generate_ground_truth(scenario(0.5, p_out=0.025), 3)
    b = generate_ground_truth(scenario(0.5, p_out=0.1), 3)
    assert a.communities == b.communities
    assert a.snapshots != b.snapshots
