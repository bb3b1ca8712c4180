"""File formats.

A ground-truth directory holds::

    config.json        scenario parameters
    meta.json          seed, T, and (k, birth_t, lifespan) of every community
    membership.csv     node,t,community
    flows.csv          t,destination,source,count
    edges/t_<t>.csv    u,v   (one file per snapshot)

Detected partitions use the same ``node,t,community`` CSV, so external
detectors can be evaluated without adapters.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from collections.abc import Iterable
from pathlib import Path

from .errors import ConfigurationError, ParseError
from .events import CommunityEvent, EventLog
from .model import BIRTH, IDLE, EvolvingCommunity, FlowRecord, GroundTruth, Snapshot, StaticCommunity, TemporalPartition
from .scenario import ScenarioConfig

log = logging.getLogger(__name__)

FORMAT = "evocom-ground-truth/1"


def dump_json(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_json(path: Path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError("file not found", path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno) from None


def load_config(path) -> ScenarioConfig:
    """Read a JSON scenario file; unknown keys and bad values name their key path."""
    data = read_json(path)
    return ScenarioConfig.from_dict(data)


def save_config(config: ScenarioConfig, path):
    dump_json(config.to_dict(), Path(path))


def _int(value: str, path, line: int, column: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ParseError(f"column {column!r}: expected an integer, got {value!r}", path, line) from None


def _label(value: str):
    try:
        return int(value)
    except ValueError:
        return value


def _rows(path: Path, header: tuple[str, ...]):
    """Yield ``(line_number, row)`` for a CSV with exactly ``header``."""
    try:
        fh = path.open(newline="", encoding="utf-8")
    except FileNotFoundError:
        raise ParseError("file not found", path) from None
    with fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or tuple(c.strip() for c in first) != header:
            raise ParseError(f"expected header {','.join(header)!r}, got {first!r}", path, 1)
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", path, line)
            yield line, [c.strip() for c in row]


def _write_csv(path: Path, header: Iterable[str], rows: Iterable[Iterable]):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def save_partition(p: TemporalPartition, path):
    rows = []
    for t in range(p.T):
        for v in sorted(p.at(t)):
            rows.append((v, t, p.at(t)[v]))
    _write_csv(Path(path), ("node", "t", "community"), rows)


def load_partition(path, T: int | None = None, source: str = "detected") -> TemporalPartition:
    """Read a ``node,t,community`` CSV; integer-looking labels become ints."""
    path = Path(path)
    per_t: dict[int, dict] = {}
    for line, (node, t, label) in _rows(path, ("node", "t", "community")):
        v, ti = _int(node, path, line, "node"), _int(t, path, line, "t")
        if ti < 0:
            raise ParseError(f"negative timestep {ti}", path, line)
        slot = per_t.setdefault(ti, {})
        if v in slot:
            raise ParseError(f"node {v} labelled twice at t={ti}", path, line)
        slot[v] = _label(label)
    n_t = max(per_t, default=-1) + 1
    if T is not None:
        if n_t > T:
            raise ParseError(f"timestep {n_t - 1} outside T={T}", path)
        n_t = T
    return TemporalPartition(tuple(per_t.get(t, {}) for t in range(n_t)), source)


def save_ground_truth(gt: GroundTruth, directory):
    d = Path(directory)
    (d / "edges").mkdir(parents=True, exist_ok=True)
    save_config(gt.config, d / "config.json")
    dump_json({
        "format": FORMAT,
        "seed": gt.seed,
        "T": gt.T,
        "communities": [{"k": c.k, "birth_t": c.birth_t, "lifespan": c.lifespan} for c in gt.communities],
    }, d / "meta.json")
    save_partition(gt.partition(), d / "membership.csv")
    _write_csv(d / "flows.csv", ("t", "destination", "source", "count"),
               ((f.t, f.destination, src, n) for f in gt.flows for src, n in f.sources.items()))
    for s in gt.snapshots:
        _write_csv(d / "edges" / f"t_{s.t}.csv", ("u", "v"), s.edges)


def load_ground_truth(directory) -> GroundTruth:
    d = Path(directory)
    if not d.is_dir():
        raise ParseError("not a ground-truth directory", d)
    config = load_config(d / "config.json")
    meta = read_json(d / "meta.json")
    try:
        T = int(meta["T"])
        seed = int(meta["seed"])
        spans = [(int(c["k"]), int(c["birth_t"]), int(c["lifespan"])) for c in meta["communities"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed metadata ({exc})", d / "meta.json") from None

    part = load_partition(d / "membership.csv", T, source="ground-truth")
    groups = [part.communities_at(t) for t in range(T)]
    communities = []
    for k, birth, life in spans:
        seq = []
        for t in range(birth, birth + life):
            if not 0 <= t < T or k not in groups[t]:
                raise ParseError(f"community {k} has no members at t={t}", d / "membership.csv")
            seq.append(StaticCommunity(k, t, groups[t][k]))
        communities.append(EvolvingCommunity(k, birth, tuple(seq)))
    known = {(k, t) for k, b, life in spans for t in range(b, b + life)}
    for t in range(T):
        for k in groups[t]:
            if (k, t) not in known:
                raise ParseError(f"community {k} at t={t} is not declared in meta.json", d / "membership.csv")

    flows: dict[tuple[int, int], dict] = {}
    order = []
    fpath = d / "flows.csv"
    for line, (t, dest, src, n) in _rows(fpath, ("t", "destination", "source", "count")):
        key = (_int(t, fpath, line, "t"), _int(dest, fpath, line, "destination"))
        if key not in flows:
            flows[key] = {}
            order.append(key)
        source = src if src in (BIRTH, IDLE) else _int(src, fpath, line, "source")
        flows[key][source] = _int(n, fpath, line, "count")
    flow_records = tuple(FlowRecord(t, k, flows[(t, k)]) for t, k in order)

    snapshots = []
    for t in range(T):
        epath = d / "edges" / f"t_{t}.csv"
        edges = tuple((_int(u, epath, line, "u"), _int(v, epath, line, "v")) for line, (u, v) in _rows(epath, ("u", "v")))
        snapshots.append(Snapshot(t, part.nodes_at(t), edges))
    return GroundTruth(config, tuple(communities), tuple(snapshots), seed, flow_records)


def save_events(log_: EventLog, path):
    dump_json({"T": log_.T, "events": log_.to_list()}, Path(path))


def load_events(path) -> EventLog:
    data = read_json(path)
    try:
        return EventLog(int(data["T"]), tuple(CommunityEvent.from_dict(e) for e in data["events"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed event log ({exc})", path) from None


def write_score_table(rows: list[dict], path_or_file):
    header = ("t", "delta", "metric", "value", "coverage")
    data = [(r["t"], r["delta"], r["metric"], repr(float(r["value"])), repr(float(r["coverage"]))) for r in rows]
    if hasattr(path_or_file, "write"):
        w = csv.writer(path_or_file, lineterminator="\n")
        w.writerow(header)
        w.writerows(data)
    else:
        _write_csv(Path(path_or_file), header, data)


def emit_heatmap_data(cells: Iterable[tuple], path, header=("row", "column", "value")) -> int:
    """Write ``(row key, column key, value)`` triples as long-format CSV.

    Non-finite values are dropped (with a warning) so the file never holds
    NaN. Returns the number of rows written.
    """
    rows = []
    for r, c, v in cells:
        v = float(v)
        if not math.isfinite(v):
            log.warning("dropping non-finite heatmap cell (%s, %s)", r, c)
            continue
        rows.append((r, c, int(v) if v.is_integer() else repr(v)))
    _write_csv(Path(path), header, rows)
    return len(rows)

