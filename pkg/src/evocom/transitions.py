"""Node-transition labelings and the scores built on them.

A node active at both t and t+delta is labelled by the pair (community at t,
community at t+delta). Comparing the pair labels of a detected partition with
those of the ground truth measures how well membership changes are tracked.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError, EvaluationError
from .metrics import contingency, get_metric
from .model import TemporalPartition


@dataclass(frozen=True)
class TransitionLabeling:
    t: int
    delta: int
    labels: dict

    @property
    def domain(self) -> frozenset:
        return frozenset(self.labels)


@dataclass(frozen=True)
class Score:
    value: float
    coverage: float


def _check_range(p: TemporalPartition, t: int, delta: int):
    if delta < 1:
        raise ConfigurationError(f"delta must be >= 1, got {delta}", key="delta")
    if t < 0 or t + delta >= p.T:
        raise EvaluationError(f"t={t}, delta={delta} outside a partition of {p.T} timesteps")


def transitions_of(p: TemporalPartition, t: int, delta: int = 1) -> TransitionLabeling:
    _check_range(p, t, delta)
    a, b = p.at(t), p.at(t + delta)
    common = a.keys() & b.keys()
    if not common:
        raise EvaluationError(f"no node is active at both t={t} and t={t + delta}")
    return TransitionLabeling(t, delta, {v: (a[v], b[v]) for v in common})


def transition_score_detail(truth: TemporalPartition, detected: TemporalPartition, t: int,
                            delta: int = 1, metric: str = "nmi") -> Score:
    """Score over nodes active at both ends in both partitions, plus that set's share of the truth domain."""
    fn = get_metric(metric)
    lt = transitions_of(truth, t, delta)
    _check_range(detected, t, delta)
    da, db = detected.at(t), detected.at(t + delta)
    domain = [v for v in lt.labels if v in da and v in db]
    if not domain:
        raise EvaluationError(f"detected partition covers no truth transition at t={t}, delta={delta}")
    a = {v: lt.labels[v] for v in domain}
    b = {v: (da[v], db[v]) for v in domain}
    return Score(fn(contingency(a, b)), len(domain) / len(lt.labels))


def transition_score(truth: TemporalPartition, detected: TemporalPartition, t: int,
                     delta: int = 1, metric: str = "nmi") -> float:
    return transition_score_detail(truth, detected, t, delta, metric).value


def windowed_score(truth: TemporalPartition, detected: TemporalPartition, t: int, window: int,
                   metric: str = "nmi", mode: str = "mse") -> float:
    """Aggregate of transition scores for delta = 1..window.

    ``mode="mse"`` returns the mean squared similarity deficit
    ``mean((1 - score)^2)``; ``mode="mean"`` returns the plain mean score.
    """
    if window < 1:
        raise ConfigurationError(f"window must be >= 1, got {window}", key="window")
    if t + window >= truth.T:
        raise EvaluationError(f"window {window} from t={t} runs past T={truth.T}")
    values = [transition_score(truth, detected, t, d, metric) for d in range(1, window + 1)]
    if mode == "mse":
        return sum((1.0 - v) ** 2 for v in values) / window
    if mode == "mean":
        return sum(values) / window
    raise ConfigurationError(f"unknown window mode {mode!r}; expected 'mse' or 'mean'", key="mode")


def partition_score_detail(truth: TemporalPartition, detected: TemporalPartition, t: int,
                           metric: str = "nmi") -> Score:
    """Static comparison of the two partitions at one snapshot."""
    fn = get_metric(metric)
    a, b = truth.at(t), detected.at(t)
    domain = a.keys() & b.keys()
    if not domain:
        raise EvaluationError(f"no node labelled by both partitions at t={t}")
    return Score(fn(contingency({v: a[v] for v in domain}, {v: b[v] for v in domain})), len(domain) / len(a))


def partition_score(truth: TemporalPartition, detected: TemporalPartition, t: int, metric: str = "nmi") -> float:
    return partition_score_detail(truth, detected, t, metric).value


def score_table(truth: TemporalPartition, detected: TemporalPartition, metric: str = "nmi",
                delta: int | None = None, window: int | None = None, mode: str = "mse") -> list[dict]:
    """Rows ``{t, delta, metric, value, coverage}`` over every defined timestep.

    Without ``delta`` or ``window`` the rows are static per-snapshot scores
    (delta 0). Timesteps where the score is undefined are skipped.
    """
    rows = []
    if window is not None:
        for t in range(truth.T - window):
            try:
                value = windowed_score(truth, detected, t, window, metric, mode)
                cov = min(transition_score_detail(truth, detected, t, d, metric).coverage
                          for d in range(1, window + 1))
            except EvaluationError:
                continue
            rows.append({"t": t, "delta": window, "metric": f"{metric}_window_{mode}", "value": value, "coverage": cov})
        return rows
    if delta is None:
        for t in range(truth.T):
            try:
                s = partition_score_detail(truth, detected, t, metric)
            except EvaluationError:
                continue
            rows.append({"t": t, "delta": 0, "metric": metric, "value": s.value, "coverage": s.coverage})
        return rows
    for t in range(truth.T - delta):
        try:
            s = transition_score_detail(truth, detected, t, delta, metric)
        except EvaluationError:
            continue
        rows.append({"t": t, "delta": delta, "metric": metric, "value": s.value, "coverage": s.coverage})
    return rows
