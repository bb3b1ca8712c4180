"""Command-line entry point.

Exit codes: 0 on success, 2 on configuration or input errors, 3 when a score
is undefined for the given inputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io
from .campaign import heatmap_cells, load_grid, run_campaign
from .detectors import detect
from .errors import ConfigurationError, EvaluationError
from .events import diff_rows, event_count_diff, extract_events, ground_truth_events
from .generate import generate_ground_truth
from .metrics import METRICS
from .model import validate
from .sankey import emit_sankey
from .stats import community_dynamics, snapshot_table, summary
from .transitions import score_table

log = logging.getLogger("evocom")


def cmd_generate(args) -> int:
    config = io.load_config(args.config)
    gt = generate_ground_truth(config, args.seed)
    problems = validate(gt)
    if problems:
        for p in problems:
            log.error(p)
        raise ConfigurationError(f"generated instance violates {len(problems)} invariants")
    io.save_ground_truth(gt, args.output)
    print(f"wrote {gt.T} snapshots, {len(gt.communities)} communities, {gt.n_nodes()} nodes to {args.output}")
    return 0


def cmd_campaign(args) -> int:
    grid = load_grid(args.grid)
    report = run_campaign(grid, args.instances, args.output, args.jobs, detect=args.detect)
    if args.heatmap:
        parts = args.heatmap.split(",")
        if len(parts) != 3:
            raise ConfigurationError("expected ROW,COLUMN,VALUE", key="--heatmap")
        cells = heatmap_cells(report, *parts)
        io.emit_heatmap_data(cells, Path(args.output) / "heatmap.csv", header=(parts[0], parts[1], parts[2]))
    print(f"{report['n_ground_truths']} ground truths over {report['n_configs']} configurations in {args.output}")
    return 0


def cmd_evaluate(args) -> int:
    gt = io.load_ground_truth(args.truth)
    truth = gt.partition()
    detected = io.load_partition(args.detected, gt.T)
    rows = score_table(truth, detected, args.metric, delta=args.delta, window=args.window, mode=args.mode)
    if not rows:
        raise EvaluationError("no timestep where the requested score is defined")
    if args.output:
        io.write_score_table(rows, args.output)
    else:
        io.write_score_table(rows, sys.stdout)
    return 0


def cmd_events(args) -> int:
    gt = io.load_ground_truth(args.truth)
    truth_log = ground_truth_events(gt, args.threshold)
    out = {"truth": truth_log.to_list()}
    if args.detected:
        detected = io.load_partition(args.detected, gt.T)
        det_log = extract_events(detected, args.threshold)
        out["detected"] = det_log.to_list()
        if args.diff:
            io.emit_heatmap_data(diff_rows(event_count_diff(truth_log, det_log)), args.diff,
                                 header=("kind", "t", "value"))
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_stats(args) -> int:
    gt = io.load_ground_truth(args.truth)
    report = summary(gt)
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        io.dump_json(report, out / "summary.json")
        fields = ("t", "n_nodes", "n_edges", "diameter", "avg_shortest_path", "lcc_size", "clustering", "modularity")
        with (out / "snapshots.csv").open("w", encoding="utf-8") as fh:
            fh.write(",".join(fields) + "\n")
            for rec in snapshot_table(gt):
                fh.write(",".join("" if rec[f] is None else str(rec[f]) for f in fields) + "\n")
        dyn = community_dynamics(gt)
        fields = ("k", "t", "survives", "size_change", "emigrant_ratio", "turnover_ratio", "n_predecessors")
        with (out / "transitions.csv").open("w", encoding="utf-8") as fh:
            fh.write(",".join(fields) + "\n")
            for rec in dyn["transitions"]:
                fh.write(",".join("" if rec[f] is None else str(rec[f]) for f in fields) + "\n")
    return 0


def cmd_detect(args) -> int:
    gt = io.load_ground_truth(args.truth)
    part = detect(gt, args.resolution, args.match_threshold, args.seed)
    io.save_partition(part, args.output)
    return 0


def cmd_sankey(args) -> int:
    gt = io.load_ground_truth(args.truth)
    emit_sankey(gt, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evocom", description="Evolving-community benchmark generator and evaluator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate one ground truth")
    p.add_argument("-c", "--config", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("campaign", help="generate many instances over a parameter grid")
    p.add_argument("-g", "--grid", required=True)
    p.add_argument("-n", "--instances", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("-j", "--jobs", type=int, default=1)
    p.add_argument("--detect", action="store_true", help="also run the built-in detector on every instance")
    p.add_argument("--heatmap", help="ROW,COLUMN,VALUE: write heatmap.csv of an aggregate over two grid parameters")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("evaluate", help="score a detected partition against a ground truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--detected", required=True)
    p.add_argument("--metric", choices=sorted(METRICS), default="nmi")
    p.add_argument("--delta", type=int, default=None, help="score node transitions over this offset")
    p.add_argument("--window", type=int, default=None, help="windowed transition score over offsets 1..W")
    p.add_argument("--mode", choices=("mse", "mean"), default="mse", help="aggregation of windowed scores")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("events", help="extract life-cycle events")
    p.add_argument("--truth", required=True)
    p.add_argument("--detected")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--diff", help="write the detected-minus-truth event count matrix as CSV")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("stats", help="descriptive statistics of a ground truth")
    p.add_argument("--truth", required=True)
    p.add_argument("-o", "--output", help="directory for summary.json and per-snapshot CSVs")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("detect", help="run the built-in Louvain + matching detector")
    p.add_argument("--truth", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--match-threshold", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sankey", help="render community flows as SVG")
    p.add_argument("--truth", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sankey)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 3
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
