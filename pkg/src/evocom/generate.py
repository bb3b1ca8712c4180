"""End-to-end ground truth generation: skeletons, members, then graphs."""

from __future__ import annotations

from .membership import assign_members
from .model import GroundTruth
from .netgen import generate_all
from .sampling import RngStream
from .scenario import ScenarioConfig, generate_skeletons


def generate_ground_truth(config: ScenarioConfig, seed: int | None = None) -> GroundTruth:
    """Build one benchmark instance; ``seed`` overrides ``config.seed``.

    Membership draws do not depend on ``p_in``/``p_out``, so instances that
    share a seed but differ in densities carry identical communities.
    """
    seed = config.seed if seed is None else int(seed)
    skeletons = generate_skeletons(config, seed)
    communities, flows = assign_members(skeletons, config, RngStream(seed, "membership"))
    snapshots = generate_all(communities, config.T, config.p_in, config.p_out, seed)
    return GroundTruth(config, tuple(communities), tuple(snapshots), seed, tuple(flows))
