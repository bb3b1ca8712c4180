"""Scenario configuration and the community skeleton generator.

A skeleton fixes, for every evolving community, when it is born, how long it
lives and how large it should be at each step of its life. No node exists yet
at this stage.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Mapping, Union

from .errors import ConfigurationError
from .sampling import ROUNDING, DistributionSpec, RngStream, round_half_away, sample, sample_integer

log = logging.getLogger(__name__)


def _default_size():
    return DistributionSpec.normal(50, 20)


def _default_lifetime():
    return DistributionSpec.truncated_normal(5, 2, 3, 7)


def _default_start():
    return DistributionSpec.uniform(0, 1)


def _no_change():
    return DistributionSpec.constant(0)


@dataclass(frozen=True)
class ScenarioConfig:
    """All parameters of one benchmark instance family.

    Defaults reproduce the base configuration used throughout the experiments
    (10 communities over 10 snapshots, sizes N(50, 20) with a floor of 10,
    lifetimes N(5, 2) truncated to [3, 7]). Only the SBM densities have no
    default.
    """

    p_in: float
    p_out: float
    T: int = 10
    n_communities: int = 10
    min_size: int = 10
    size_dist: DistributionSpec = field(default_factory=_default_size)
    lifetime_dist: DistributionSpec = field(default_factory=_default_lifetime)
    start_dist: DistributionSpec = field(default_factory=_default_start)
    size_change_dist: DistributionSpec = field(default_factory=_no_change)
    core_node_ratio: Union[float, DistributionSpec] = 1.0
    lifetime_rounding: str = "ceil"
    migration_chunk: int | None = None
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        for key in ("T", "n_communities", "min_size", "seed"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigurationError(f"must be an integer, got {v!r}", key=key)
        if self.T < 1:
            raise ConfigurationError("must be >= 1", key="T")
        if self.n_communities < 1:
            raise ConfigurationError("must be >= 1", key="n_communities")
        if self.min_size < 1:
            raise ConfigurationError("must be >= 1", key="min_size")
        for key in ("p_in", "p_out"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"must be a probability in [0, 1], got {v!r}", key=key)
        cnr = self.core_node_ratio
        if isinstance(cnr, DistributionSpec):
            pass
        elif isinstance(cnr, bool) or not isinstance(cnr, (int, float)) or not 0.0 < cnr <= 1.0:
            raise ConfigurationError(f"must be in (0, 1], got {cnr!r}", key="core_node_ratio")
        for key in ("size_dist", "lifetime_dist", "start_dist", "size_change_dist"):
            if not isinstance(getattr(self, key), DistributionSpec):
                raise ConfigurationError("must be a distribution", key=key)
        mc = self.migration_chunk
        if mc is not None and (isinstance(mc, bool) or not isinstance(mc, int) or mc < 1):
            raise ConfigurationError(f"must be a positive integer or null, got {mc!r}", key="migration_chunk")
        if self.lifetime_rounding not in ROUNDING:
            raise ConfigurationError(f"expected one of {sorted(ROUNDING)}", key="lifetime_rounding")

    def warnings(self) -> list[str]:
        out = []
        if self.p_out >= self.p_in:
            out.append(f"p_out={self.p_out} >= p_in={self.p_in}: planted communities are not denser than the background")
        return out

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], prefix: str = "") -> "ScenarioConfig":
        if not isinstance(data, Mapping):
            raise ConfigurationError("expected a JSON object", key=prefix.rstrip(".") or None)
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigurationError("unknown key", key=prefix + key)
        for key in ("p_in", "p_out"):
            if key not in data:
                raise ConfigurationError("missing required key", key=prefix + key)
        kwargs = {}
        for key, value in data.items():
            if key in ("size_dist", "lifetime_dist", "start_dist", "size_change_dist") or (
                key == "core_node_ratio" and isinstance(value, Mapping)
            ):
                try:
                    value = DistributionSpec.from_dict(value)
                except ConfigurationError as exc:
                    sub = f".{exc.key}" if exc.key else ""
                    raise ConfigurationError(str(exc).split(": ", 1)[-1], key=prefix + key + sub) from None
            kwargs[key] = value
        try:
            cfg = cls(**kwargs)
        except ConfigurationError as exc:
            if exc.key is not None:
                raise ConfigurationError(str(exc).split(": ", 1)[-1], key=prefix + exc.key) from None
            raise
        for w in cfg.warnings():
            log.warning(w)
        return cfg

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = v.to_dict() if isinstance(v, DistributionSpec) else v
        return out


@dataclass(frozen=True)
class CommunitySkeleton:
    k: int
    birth_t: int
    lifespan: int
    target_sizes: tuple
    core_ratio: float


def generate_skeletons(config: ScenarioConfig, seed: int | None = None) -> list[CommunitySkeleton]:
    """Draw birth, lifespan, per-step target sizes and core ratio for every community.

    The start fraction picks uniformly among the feasible birth steps
    ``0 .. T - lifespan``; size changes are resampled at every step.
    """
    if config.n_communities < 1:
        raise ConfigurationError("must be >= 1", key="n_communities")
    seed = config.seed if seed is None else seed
    r_life = RngStream(seed, "lifetimes")
    r_start = RngStream(seed, "starts")
    r_size = RngStream(seed, "sizes")
    r_change = RngStream(seed, "size_change")
    r_core = RngStream(seed, "core_ratio")
    T = config.T

    skeletons = []
    for k in range(config.n_communities):
        lifespan = sample_integer(config.lifetime_dist, r_life, 1, T, rounding=config.lifetime_rounding)
        window = T - lifespan
        frac = sample(config.start_dist, r_start)
        birth = min(max(math.floor(frac * (window + 1)), 0), window)

        sizes = [sample_integer(config.size_dist, r_size, config.min_size)]
        for _ in range(lifespan - 1):
            s = sample(config.size_change_dist, r_change)
            nxt = sizes[-1] * (1.0 + s)
            sizes.append(max(config.min_size, round_half_away(nxt)))

        if isinstance(config.core_node_ratio, DistributionSpec):
            core = min(max(sample(config.core_node_ratio, r_core), 0.0), 1.0)
        else:
            core = float(config.core_node_ratio)
        skeletons.append(CommunitySkeleton(k, birth, lifespan, tuple(sizes), core))
    return skeletons

