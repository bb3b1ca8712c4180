"""Partition similarity measures computed from a contingency matrix.

Every measure is oriented so that 1 means identical partitions. Natural logs
throughout, with 0 log 0 = 0.
"""

from __future__ import annotations

from collections.abc import Hashable, Mapping
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, EvaluationError


@dataclass(frozen=True)
class ContingencyMatrix:
    rows: tuple
    cols: tuple
    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def transpose(self) -> "ContingencyMatrix":
        return ContingencyMatrix(self.cols, self.rows, self.counts.T)


def _sort_labels(labels) -> tuple:
    try:
        return tuple(sorted(labels))
    except TypeError:
        return tuple(sorted(labels, key=repr))


def contingency(a: Mapping[Hashable, Hashable], b: Mapping[Hashable, Hashable]) -> ContingencyMatrix:
    """Co-occurrence counts of the labels of ``a`` (rows) and ``b`` (columns).

    Both mappings go from item to label and must cover the same items.
    """
    if a.keys() != b.keys():
        only_a = len(a.keys() - b.keys())
        only_b = len(b.keys() - a.keys())
        raise EvaluationError(f"labelings cover different items ({only_a} only in first, {only_b} only in second)")
    rows = _sort_labels(set(a.values()))
    cols = _sort_labels(set(b.values()))
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: i for i, c in enumerate(cols)}
    counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for item, la in a.items():
        counts[ri[la], ci[b[item]]] += 1
    return ContingencyMatrix(rows, cols, counts)


def _check(M: ContingencyMatrix) -> int:
    n = M.n
    if n == 0:
        raise EvaluationError("contingency matrix is empty")
    return n


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def _mutual_information(M: ContingencyMatrix, n: int) -> float:
    c = M.counts.astype(float)
    a = c.sum(axis=1)
    b = c.sum(axis=0)
    nz = c > 0
    outer = np.outer(a, b)
    return float((c[nz] / n * np.log(c[nz] * n / outer[nz])).sum())


def entropies(M: ContingencyMatrix) -> tuple[float, float, float]:
    """(H(A), H(B), I(A;B))."""
    n = _check(M)
    return (_entropy(M.counts.sum(axis=1), n), _entropy(M.counts.sum(axis=0), n), _mutual_information(M, n))


def nmi(M: ContingencyMatrix, normalization: str = "arithmetic") -> float:
    """Mutual information over the mean (or max) of the two entropies."""
    ha, hb, mi = entropies(M)
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    if normalization == "arithmetic":
        denom = (ha + hb) / 2
    elif normalization == "max":
        denom = max(ha, hb)
    else:
        raise ConfigurationError(f"unknown NMI normalization {normalization!r}")
    return float(min(max(mi / denom, 0.0), 1.0))


def variation_of_information(M: ContingencyMatrix) -> float:
    ha, hb, mi = entropies(M)
    return max(ha + hb - 2 * mi, 0.0)


def nvi(M: ContingencyMatrix) -> float:
    """Similarity form ``1 - VI / log(n)``."""
    n = _check(M)
    if n == 1:
        return 1.0
    return float(min(max(1.0 - variation_of_information(M) / np.log(n), 0.0), 1.0))


def _comb2(x):
    x = np.asarray(x, dtype=float)
    return x * (x - 1) / 2


def pair_counts(M: ContingencyMatrix) -> tuple[float, float, float, float]:
    """(both together, together in A only, together in B only, total pairs)."""
    n = _check(M)
    together_both = float(_comb2(M.counts).sum())
    together_a = float(_comb2(M.counts.sum(axis=1)).sum())
    together_b = float(_comb2(M.counts.sum(axis=0)).sum())
    return together_both, together_a - together_both, together_b - together_both, float(_comb2(n))


def ari(M: ContingencyMatrix) -> float:
    n = _check(M)
    index = float(_comb2(M.counts).sum())
    sum_a = float(_comb2(M.counts.sum(axis=1)).sum())
    sum_b = float(_comb2(M.counts.sum(axis=0)).sum())
    total = float(_comb2(n))
    if total == 0:
        return 1.0
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0
    return (index - expected) / (max_index - expected)


def jaccard_index(M: ContingencyMatrix) -> float:
    """Pair-counting Jaccard: pairs together in both / pairs together in either."""
    both, only_a, only_b, _ = pair_counts(M)
    union = both + only_a + only_b
    if union == 0:
        return 1.0
    return both / union


def _best_match_f1(counts: np.ndarray) -> float:
    sizes_r = counts.sum(axis=1).astype(float)
    sizes_c = counts.sum(axis=0).astype(float)
    n = sizes_r.sum()
    f1 = 2 * counts / (sizes_r[:, None] + sizes_c[None, :])
    return float((sizes_r * f1.max(axis=1)).sum() / n)


def f1_score(M: ContingencyMatrix) -> float:
    """Size-weighted best-match F1, averaged over both matching directions."""
    _check(M)
    return (_best_match_f1(M.counts) + _best_match_f1(M.counts.T)) / 2


METRICS = {
    "nmi": nmi,
    "nvi": nvi,
    "ari": ari,
    "f1": f1_score,
    "jaccard": jaccard_index,
}


def get_metric(name: str):
    try:
        return METRICS[name]
    except KeyError:
        raise ConfigurationError(f"unknown metric {name!r}; expected one of {sorted(METRICS)}", key="metric") from None


def score(a: Mapping, b: Mapping, metric: str = "nmi") -> float:
    return get_metric(metric)(contingency(a, b))
