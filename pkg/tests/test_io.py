import io as stdio
import json
import math

import pytest

from evocom import io
from evocom.errors import ConfigurationError, ParseError
from evocom.events import ground_truth_events
from evocom.model import TemporalPartition
from evocom.sampling import DistributionSpec


def test_ground_truth_round_trip(tmp_path, stable_gt, changing_gt):
    for gt in (stable_gt, changing_gt):
        d = tmp_path / str(gt.seed)
        io.save_ground_truth(gt, d)
        assert io.load_ground_truth(d) == gt


def test_file_row_counts(tmp_path, changing_gt):
    io.save_ground_truth(changing_gt, tmp_path)
    rows = (tmp_path / "membership.csv").read_text().splitlines()
    assert len(rows) - 1 == sum(s.n_nodes for s in changing_gt.snapshots)
    edge_rows = sum(len((tmp_path / "edges" / f"t_{t}.csv").read_text().splitlines()) - 1
                    for t in range(changing_gt.T))
    assert edge_rows == sum(s.n_edges for s in changing_gt.snapshots)
    assert json.loads((tmp_path / "meta.json").read_text())["format"] == io.FORMAT


def test_load_base_config(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"p_in": 0.5, "p_out": 0.05,
                                "size_change_dist": {"kind": "normal", "mu": 0, "sigma": 0.2}}))
    cfg = io.load_config(path)
    assert (cfg.T, cfg.n_communities, cfg.min_size) == (10, 10, 10)
    assert cfg.size_change_dist == DistributionSpec.normal(0, 0.2)
    io.save_config(cfg, tmp_path / "d.json")
    assert io.load_config(tmp_path / "d.json") == cfg


def test_missing_p_in_names_key(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{"p_out": 0.05}')
    with pytest.raises(ConfigurationError, match="p_in"):
        io.load_config(path)


def test_json_syntax_error_has_line(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{\n"p_in": 0.5,\n"p_out": ,\n}')
    with pytest.raises(ParseError) as err:
        io.load_config(path)
    assert err.value.line == 3 and f"{path}:3:" in str(err.value)


def test_missing_file():
    with pytest.raises(ParseError, match="not found"):
        io.load_config("/nonexistent/c.json")


def test_partition_round_trip_with_string_labels(tmp_path):
    p = TemporalPartition(({1: "a", 2: 5}, {}, {3: "b"}))
    io.save_partition(p, tmp_path / "p.csv")
    assert io.load_partition(tmp_path / "p.csv") == p
    assert io.load_partition(tmp_path / "p.csv", T=5).T == 5


@pytest.mark.parametrize("text,line,fragment", [
    ("node,t,label\n", 1, "header"),
    ("node,t,community\n1,0,a\n2,x,a\n", 3, "integer"),
    ("node,t,community\n1,0,a\n1,0,b\n", 3, "twice"),
    ("node,t,community\n1,0\n", 2, "fields"),
    ("node,t,community\n1,-1,a\n", 2, "negative"),
])
def test_partition_errors_carry_line(tmp_path, text, line, fragment):
    path = tmp_path / "p.csv"
    path.write_text(text)
    with pytest.raises(ParseError) as err:
        io.load_partition(path)
    assert err.value.line == line and fragment in str(err.value)


def test_partition_beyond_horizon(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("node,t,community\n1,9,a\n")
    with pytest.raises(ParseError):
        io.load_partition(path, T=3)


def test_corrupt_ground_truth(tmp_path, stable_gt):
    io.save_ground_truth(stable_gt, tmp_path)
    edges = tmp_path / "edges" / "t_0.csv"
    edges.write_text(edges.read_text() + "1,oops\n")
    with pytest.raises(ParseError) as err:
        io.load_ground_truth(tmp_path)
    assert err.value.line is not None
    with pytest.raises(ParseError):
        io.load_ground_truth(tmp_path / "nope")


def test_undeclared_community_rejected(tmp_path, stable_gt):
    io.save_ground_truth(stable_gt, tmp_path)
    with (tmp_path / "membership.csv").open("a") as fh:
        fh.write("99999,0,77\n")
    with pytest.raises(ParseError, match="not declared"):
        io.load_ground_truth(tmp_path)


def test_events_round_trip(tmp_path, changing_gt):
    log = ground_truth_events(changing_gt)
    io.save_events(log, tmp_path / "e.json")
    assert io.load_events(tmp_path / "e.json") == log


def test_score_table_to_file_object():
    buf = stdio.StringIO()
    io.write_score_table([{"t": 0, "delta": 1, "metric": "nmi", "value": 0.5, "coverage": 1.0}], buf)
    assert buf.getvalue() == "t,delta,metric,value,coverage\n0,1,nmi,0.5,1.0\n"


def test_heatmap_drops_nan(tmp_path):
    n = io.emit_heatmap_data([(0.25, 0.05, 0.9), (0.5, 0.05, math.nan), (0.5, 0.1, 0)], tmp_path / "h.csv")
    assert n == 2
    text = (tmp_path / "h.csv").read_text()
    assert "nan" not in text.lower()
    assert text.splitlines() == ["row,column,value", "0.25,0.05,0.9", "0.5,0.1,0"]


def test_heatmap_grid_of_twelve(tmp_path):
    cells = [(pi, po, pi / po) for pi in (0.25, 0.5, 0.75) for po in (0.025, 0.05, 0.075, 0.1)]
    assert io.emit_heatmap_data(cells, tmp_path / "h.csv") == 12
