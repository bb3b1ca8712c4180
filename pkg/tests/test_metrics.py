import math

import pytest
from hypothesis import given, settings, strategies as st

from evocom.errors import ConfigurationError, EvaluationError
from evocom.metrics import (
    METRICS, ari, contingency, entropies, f1_score, jaccard_index, nmi, nvi, pair_counts, score,
    variation_of_information,
)

import oracles


def all_pairs(max_n):
    for n in range(1, max_n + 1):
        parts = [oracles.labeling(p) for p in oracles.set_partitions(range(n))]
        for a in parts:
            for b in parts:
                yield a, b


def test_partition_enumeration_counts_bell_numbers():
    assert [sum(1 for _ in oracles.set_partitions(range(n))) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_pair_metrics_match_brute_force():
    for a, b in all_pairs(5):
        M = contingency(a, b)
        assert ari(M) == pytest.approx(oracles.ari(a, b), abs=1e-12)
        assert jaccard_index(M) == pytest.approx(oracles.jaccard(a, b), abs=1e-12)
        n11, n10, n01, n00 = oracles.pair_table(a, b)
        assert pair_counts(M) == (n11, n10, n01, n11 + n10 + n01 + n00)


def test_information_metrics_match_direct_entropies():
    for a, b in all_pairs(5):
        M = contingency(a, b)
        assert nmi(M) == pytest.approx(oracles.nmi(a, b), abs=1e-12)
        assert variation_of_information(M) == pytest.approx(max(oracles.vi(a, b), 0), abs=1e-12)


def test_identical_partitions_score_one():
    for n in range(1, 7):
        for p in oracles.set_partitions(range(n)):
            a = oracles.labeling(p)
            M = contingency(a, dict(a))
            for name, fn in METRICS.items():
                assert fn(M) == pytest.approx(1.0, abs=1e-12), (name, p)


def test_crossed_halves():
    a = {1: 0, 2: 0, 3: 1, 4: 1}
    b = {1: 0, 3: 0, 2: 1, 4: 1}
    M = contingency(a, b)
    assert nmi(M) == pytest.approx(0.0, abs=1e-15)
    assert ari(M) == pytest.approx(-0.5)
    assert jaccard_index(M) == 0.0


def test_nmi_max_normalization():
    a = {i: i // 2 for i in range(6)}
    b = {i: i // 3 for i in range(6)}
    ha, hb, mi = entropies(contingency(a, b))
    assert nmi(contingency(a, b), "max") == pytest.approx(mi / max(ha, hb))
    with pytest.raises(ConfigurationError):
        nmi(contingency(a, b), "geometric-ish")


def test_one_sided_trivial_nmi_is_zero():
    a = {i: 0 for i in range(4)}
    b = {i: i % 2 for i in range(4)}
    assert nmi(contingency(a, b)) == 0.0


def test_nvi_definition():
    a = {i: i // 2 for i in range(8)}
    b = {i: i % 2 for i in range(8)}
    M = contingency(a, b)
    assert nvi(M) == pytest.approx(1 - oracles.vi(a, b) / math.log(8))


def test_f1_brute_force():
    a = {1: "x", 2: "x", 3: "x", 4: "y", 5: "y"}
    b = {1: 0, 2: 0, 3: 1, 4: 1, 5: 1}
    # a->b: x best 0 (2*2/5=.8), y best 1 (2*2/5=.8);  b->a: 0 best x (.8), 1 best y (.8)
    assert f1_score(contingency(a, b)) == pytest.approx(0.8)


def test_mismatched_items_and_empty_raise():
    with pytest.raises(EvaluationError):
        contingency({1: 0, 2: 0}, {1: 0, 3: 0})
    with pytest.raises(EvaluationError):
        nmi(contingency({}, {}))


def test_unknown_metric_names_key():
    with pytest.raises(ConfigurationError) as err:
        score({1: 0}, {1: 0}, "purity")
    assert err.value.key == "metric"


def test_mixed_label_types_sort():
    M = contingency({1: "a", 2: 3}, {1: 0, 2: 1})
    assert M.shape == (2, 2)


labelings = st.integers(1, 30).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 4), min_size=n, max_size=n),
                        st.lists(st.integers(0, 4), min_size=n, max_size=n)))


@given(labelings)
@settings(max_examples=150, deadline=None)
def test_metric_properties(pair):
    a = dict(enumerate(pair[0]))
    b = dict(enumerate(pair[1]))
    M, Mt = contingency(a, b), contingency(b, a)
    for fn in METRICS.values():
        v = fn(M)
        assert v == pytest.approx(fn(Mt), abs=1e-12)  # symmetric
        assert v <= 1 + 1e-12
    for fn in (nmi, nvi, jaccard_index, f1_score):
        assert fn(M) >= 0
    assert ari(M) == pytest.approx(oracles.ari(a, b), abs=1e-12)
    assert nmi(M) == pytest.approx(oracles.nmi(a, b), abs=1e-12)


@given(labelings)
@settings(max_examples=60, deadline=None)
def test_against_sklearn(pair):
    sk = pytest.importorskip("sklearn.metrics")
    a, b = pair
    M = contingency(dict(enumerate(a)), dict(enumerate(b)))
    assert ari(M) == pytest.approx(sk.adjusted_rand_score(a, b), abs=1e-10)
    if len(set(a)) > 1 and len(set(b)) > 1:
        assert nmi(M) == pytest.approx(sk.normalized_mutual_info_score(a, b), abs=1e-10)
