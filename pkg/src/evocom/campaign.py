"""Batch generation over a parameter grid.

A grid file looks like::

    {
      "master_seed": 7,
      "base": {"T": 10, "n_communities": 10},
      "grid": {"p_in": [0.25, 0.5, 0.75], "p_out": [0.025, 0.05]},
      "matched_seeds": false
    }

Configurations are the cartesian product of the ``grid`` lists, in file
order, applied on top of ``base``. Instance seeds are

    int.from_bytes(blake2b(f"{master_seed}:{config_id}:{instance_id}",
                           digest_size=8).digest(), "little")

with ``config_id`` replaced by 0 when ``matched_seeds`` is set, so that every
configuration sees the same community structures.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .detectors import detect as run_detector
from .errors import ConfigurationError
from .events import event_count_diff, extract_events, ground_truth_events
from .generate import generate_ground_truth
from .io import dump_json, read_json, save_ground_truth, save_partition
from .scenario import ScenarioConfig
from .stats import summary
from .transitions import score_table

log = logging.getLogger(__name__)


def instance_seed(master_seed: int, config_id: int, instance_id: int) -> int:
    key = f"{master_seed}:{config_id}:{instance_id}".encode("ascii")
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


@dataclass(frozen=True)
class CampaignGrid:
    master_seed: int
    configs: tuple
    params: tuple
    matched_seeds: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignGrid":
        if not isinstance(data, dict):
            raise ConfigurationError("expected a JSON object")
        for key in data:
            if key not in ("master_seed", "base", "grid", "matched_seeds"):
                raise ConfigurationError("unknown key", key=key)
        seed = data.get("master_seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigurationError(f"must be an integer, got {seed!r}", key="master_seed")
        base = data.get("base", {})
        grid = data.get("grid", {})
        if not isinstance(base, dict):
            raise ConfigurationError("expected an object", key="base")
        if not isinstance(grid, dict):
            raise ConfigurationError("expected an object", key="grid")
        for key, values in grid.items():
            if not isinstance(values, list) or not values:
                raise ConfigurationError("expected a non-empty list", key=f"grid.{key}")
        keys = list(grid)
        configs, params = [], []
        for i, combo in enumerate(itertools.product(*(grid[k] for k in keys))):
            point = dict(zip(keys, combo))
            merged = {**base, **point}
            configs.append(ScenarioConfig.from_dict(merged, prefix=f"grid[{i}]."))
            params.append(point)
        return cls(seed, tuple(configs), tuple(params), bool(data.get("matched_seeds", False)))

    def seed(self, config_id: int, instance_id: int) -> int:
        return instance_seed(self.master_seed, 0 if self.matched_seeds else config_id, instance_id)


def load_grid(path) -> CampaignGrid:
    return CampaignGrid.from_dict(read_json(path))


def _run_instance(task: tuple) -> dict:
    config, seed, out_dir, with_detection = task
    gt = generate_ground_truth(config, seed)
    out = Path(out_dir)
    save_ground_truth(gt, out)
    report = summary(gt)
    if with_detection:
        truth = gt.partition()
        detected = run_detector(gt, seed=seed)
        save_partition(detected, out / "detected.csv")
        static = [r["value"] for r in score_table(truth, detected, "nmi")]
        trans = [r["value"] for r in score_table(truth, detected, "nmi", delta=1)]
        diff = event_count_diff(ground_truth_events(gt), extract_events(detected))
        report["detection"] = {
            "partition_nmi": float(np.mean(static)) if static else None,
            "transition_nmi": float(np.mean(trans)) if trans else None,
            "event_abs_error": int(np.abs(diff).sum()),
        }
    dump_json(report, out / "summary.json")
    return report


def _mean_of(reports: list[dict], path: tuple) -> float | None:
    vals = []
    for r in reports:
        v: Any = r
        for p in path:
            v = v.get(p) if isinstance(v, dict) else None
        if v is not None:
            vals.append(float(v))
    return float(np.mean(vals)) if vals else None


_AGGREGATES = {
    "lifespan_mean": ("lifespan", "mean"),
    "parallel_communities_mean": ("parallel_communities", "mean"),
    "static_size_mean": ("static_size", "mean"),
    "turnover_ratio_mean": ("dynamics", "turnover_ratio", "mean"),
    "emigrant_ratio_mean": ("dynamics", "emigrant_ratio", "mean"),
    "n_predecessors_mean": ("dynamics", "n_predecessors", "mean"),
    "size_change_mean": ("dynamics", "size_change", "mean"),
    "system_renewal_mean": ("dynamics", "system_renewal", "mean"),
    "diameter_mean": ("network", "diameter", "mean"),
    "avg_shortest_path_mean": ("network", "avg_shortest_path", "mean"),
    "clustering_mean": ("network", "clustering", "mean"),
    "modularity_mean": ("network", "modularity", "mean"),
    "n_nodes_mean": ("network", "n_nodes", "mean"),
    "n_edges_mean": ("network", "n_edges", "mean"),
    "partition_nmi_mean": ("detection", "partition_nmi"),
    "transition_nmi_mean": ("detection", "transition_nmi"),
}


def run_campaign(grid: CampaignGrid, n_instances: int, out_dir, parallelism: int = 1,
                 detect: bool = False) -> dict:
    """Generate ``n_instances`` ground truths per configuration and aggregate their statistics.

    Output is byte-identical for a given grid whatever the parallelism.
    """
    if n_instances < 1:
        raise ConfigurationError("must be >= 1", key="n_instances")
    if parallelism < 1:
        raise ConfigurationError("must be >= 1", key="parallelism")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = []
    for ci, cfg in enumerate(grid.configs):
        for ii in range(n_instances):
            seed = grid.seed(ci, ii)
            tasks.append((cfg, seed, str(out / f"config_{ci:03d}" / f"instance_{ii:03d}"), detect))

    if parallelism == 1:
        reports = [_run_instance(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            reports = list(pool.map(_run_instance, tasks, chunksize=max(1, len(tasks) // (4 * parallelism))))

    index = []
    for ci, cfg in enumerate(grid.configs):
        chunk = reports[ci * n_instances:(ci + 1) * n_instances]
        agg = {name: _mean_of(chunk, path) for name, path in _AGGREGATES.items()}
        cfg_summary = {
            "config_id": ci,
            "params": grid.params[ci],
            "config": cfg.to_dict(),
            "seeds": [grid.seed(ci, ii) for ii in range(n_instances)],
            "n_instances": n_instances,
            "aggregate": agg,
        }
        dump_json(cfg_summary, out / f"config_{ci:03d}" / "summary.json")
        index.append({"config_id": ci, "params": grid.params[ci], "aggregate": agg})
    report = {
        "master_seed": grid.master_seed,
        "matched_seeds": grid.matched_seeds,
        "n_configs": len(grid.configs),
        "n_instances": n_instances,
        "n_ground_truths": len(tasks),
        "configs": index,
    }
    dump_json(report, out / "campaign.json")
    return report


def heatmap_cells(report: dict, row: str, column: str, value: str) -> list[tuple]:
    """(row param, column param, mean aggregate) cells from a campaign report, averaged over other params."""
    acc: dict[tuple, list[float]] = {}
    for entry in report["configs"]:
        params = entry["params"]
        if row not in params or column not in params:
            raise ConfigurationError(f"campaign grid does not vary {row!r} and {column!r}")
        v = entry["aggregate"].get(value)
        if v is not None:
            acc.setdefault((params[row], params[column]), []).append(v)
    return [(r, c, float(np.mean(vs))) for (r, c), vs in sorted(acc.items(), key=lambda kv: (_key(kv[0][0]), _key(kv[0][1])))]


def _key(v):
    return (0, v, "") if isinstance(v, (int, float)) else (1, 0, repr(v))
