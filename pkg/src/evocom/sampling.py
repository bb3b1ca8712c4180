"""Seeded sampling from the small family of distributions used by scenarios.

Every concern of the generator (lifetimes, sizes, membership, edges, ...) draws
from its own :class:`RngStream`, derived from the master seed and a text label,
so that changing one distribution never perturbs the samples of another.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import ConfigurationError

KINDS = ("constant", "uniform", "normal", "truncated_normal")

_PARAMS = {
    "constant": ("value",),
    "uniform": ("lo", "hi"),
    "normal": ("mu", "sigma"),
    "truncated_normal": ("mu", "sigma", "lo", "hi"),
}

# below this acceptance probability rejection sampling is skipped entirely
_MIN_ACCEPTANCE = 0.05
_MAX_REJECTION_ROUNDS = 50

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class DistributionSpec:
    kind: str
    value: float = 0.0
    lo: float = 0.0
    hi: float = 0.0
    mu: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown distribution kind {self.kind!r}", key="kind")
        for name in _PARAMS[self.kind]:
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigurationError(f"must be a finite number, got {v!r}", key=name)
        if self.kind in ("normal", "truncated_normal") and self.sigma < 0:
            raise ConfigurationError("sigma must be >= 0", key="sigma")
        if self.kind in ("uniform", "truncated_normal") and self.lo > self.hi:
            raise ConfigurationError(f"lo ({self.lo}) must be <= hi ({self.hi})", key="lo")

    @classmethod
    def constant(cls, value: float) -> "DistributionSpec":
        return cls("constant", value=float(value))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "DistributionSpec":
        return cls("uniform", lo=float(lo), hi=float(hi))

    @classmethod
    def normal(cls, mu: float, sigma: float) -> "DistributionSpec":
        return cls("normal", mu=float(mu), sigma=float(sigma))

    @classmethod
    def truncated_normal(cls, mu: float, sigma: float, lo: float, hi: float) -> "DistributionSpec":
        return cls("truncated_normal", mu=float(mu), sigma=float(sigma), lo=float(lo), hi=float(hi))

    @classmethod
    def from_dict(cls, data: Any) -> "DistributionSpec":
        """Parse the textual form, e.g. ``{"kind": "normal", "mu": 50, "sigma": 20}``.

        A bare number is shorthand for a constant distribution.
        """
        if isinstance(data, bool):
            raise ConfigurationError(f"expected a distribution, got {data!r}")
        if isinstance(data, (int, float)):
            return cls.constant(data)
        if not isinstance(data, Mapping):
            raise ConfigurationError(f"expected a distribution object, got {type(data).__name__}")
        if "kind" not in data:
            raise ConfigurationError("missing required key", key="kind")
        kind = data["kind"]
        if kind not in KINDS:
            raise ConfigurationError(f"unknown distribution kind {kind!r}; expected one of {KINDS}", key="kind")
        allowed = set(_PARAMS[kind])
        for key in data:
            if key != "kind" and key not in allowed:
                raise ConfigurationError(f"unknown key for {kind} distribution", key=key)
        missing = [p for p in _PARAMS[kind] if p not in data]
        if missing:
            raise ConfigurationError("missing required key", key=missing[0])
        params = {}
        for p in _PARAMS[kind]:
            v = data[p]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigurationError(f"must be a number, got {v!r}", key=p)
            params[p] = float(v)
        return cls(kind, **params)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        for p in _PARAMS[self.kind]:
            out[p] = getattr(self, p)
        return out


def _label_words(label: str) -> list[int]:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=16).digest()
    return [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]


class RngStream:
    """Independent random stream identified by ``(seed, label)``.

    The underlying generator is numpy's PCG64 seeded through a SeedSequence
    whose entropy is the 64-bit seed followed by a BLAKE2b digest of the
    label, which keeps streams stable across runs and platforms.
    """

    def __init__(self, seed: int, label: str = ""):
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise ConfigurationError(f"seed must be an integer, got {seed!r}", key="seed")
        self.seed = int(seed) & _MASK64
        self.label = label
        entropy = [self.seed & 0xFFFFFFFF, self.seed >> 32, *_label_words(label)]
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def child(self, label: str) -> "RngStream":
        """A sibling stream under the same seed with a nested label."""
        return RngStream(self.seed, f"{self.label}/{label}" if self.label else label)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, label={self.label!r})"


def _truncated_normal(mu, sigma, lo, hi, gen: np.random.Generator, n: int) -> np.ndarray:
    if sigma == 0:
        return np.full(n, min(max(mu, lo), hi))
    a = (lo - mu) / sigma
    b = (hi - mu) / sigma
    cdf_a, cdf_b = float(ndtr(a)), float(ndtr(b))
    if cdf_b - cdf_a >= _MIN_ACCEPTANCE:
        out = np.empty(n)
        filled = 0
        for _ in range(_MAX_REJECTION_ROUNDS):
            need = n - filled
            if need == 0:
                return out
            draw = gen.normal(mu, sigma, size=int(need / (cdf_b - cdf_a)) + 8)
            ok = draw[(draw >= lo) & (draw <= hi)][:need]
            out[filled:filled + ok.size] = ok
            filled += ok.size
        if filled == n:
            return out
        rest = _inverse_cdf(mu, sigma, lo, hi, cdf_a, cdf_b, gen, n - filled)
        out[filled:] = rest
        return out
    return _inverse_cdf(mu, sigma, lo, hi, cdf_a, cdf_b, gen, n)


def _inverse_cdf(mu, sigma, lo, hi, cdf_a, cdf_b, gen, n):
    u = gen.uniform(cdf_a, cdf_b, size=n)
    x = mu + sigma * ndtri(u)
    # ndtri loses precision far in the tails; the clip keeps the contract exact
    return np.clip(x, lo, hi)


def sample(spec: DistributionSpec, rng: RngStream, size: int | None = None):
    """Draw one value (or ``size`` values) from ``spec``."""
    n = 1 if size is None else int(size)
    gen = rng.generator
    if spec.kind == "constant":
        values = np.full(n, spec.value)
    elif spec.kind == "uniform":
        values = gen.uniform(spec.lo, spec.hi, size=n)
    elif spec.kind == "normal":
        values = gen.normal(spec.mu, spec.sigma, size=n)
    elif spec.kind == "truncated_normal":
        values = _truncated_normal(spec.mu, spec.sigma, spec.lo, spec.hi, gen, n)
    else:  # pragma: no cover - guarded by DistributionSpec
        raise ConfigurationError(f"unknown distribution kind {spec.kind!r}")
    if size is None:
        return float(values[0])
    return values


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


ROUNDING = {
    "nearest": round_half_away,
    "ceil": math.ceil,
    "floor": math.floor,
}


def to_integer(x: float, clamp_lo: int, clamp_hi: int | None = None, rounding: str = "nearest") -> int:
    if rounding not in ROUNDING:
        raise ConfigurationError(f"unknown rounding {rounding!r}; expected one of {sorted(ROUNDING)}")
    v = ROUNDING[rounding](x)
    v = max(v, clamp_lo)
    if clamp_hi is not None:
        v = min(v, clamp_hi)
    return int(v)


def sample_integer(spec: DistributionSpec, rng: RngStream, clamp_lo: int,
                   clamp_hi: int | None = None, rounding: str = "nearest") -> int:
    """Sample, round (half away from zero by default) and clamp to ``[clamp_lo, clamp_hi]``.

    ``clamp_hi=None`` leaves the upper side unbounded.
    """
    if clamp_hi is not None and clamp_lo > clamp_hi:
        raise ConfigurationError(f"clamp_lo ({clamp_lo}) must be <= clamp_hi ({clamp_hi})")
    return to_integer(sample(spec, rng), clamp_lo, clamp_hi, rounding)
