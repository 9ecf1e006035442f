import json
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import poset_with_points, posets
from posetreal import io
from posetreal.cli import main
from posetreal.experiments import circle_fixture, hahn_fixture
from posetreal.poset import MonotoneMap, Star, chain, codeleted_prejoin
from posetreal.realization import RPoint
from posetreal.subdivision import Interval, canonical


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(io.jsonable(obj)))
    return str(path)


# -------------------------------------------------------------- round trips

def test_rationals():
    assert io.rational(F(3, 6)) == "1/2" and io.rational(2) == "2"
    assert io.parse_rational("3/4") == F(3, 4)
    with pytest.raises(io.FormatError):
        io.parse_rational(0.5)
    with pytest.raises(io.FormatError):
        io.parse_rational("half")


def test_label_round_trip():
    labels = [
        "a",
        3,
        (1, "x"),
        frozenset({"b", "a"}),
        Interval("a", "b"),
        Interval(Interval("a", "a"), Interval("a", "b")),
        Star("p"),
        Star(Star("p"), 1),
    ]
    for x in labels:
        assert io.decode_label(json.loads(json.dumps(io.encode_label(x)))) == x


@given(posets(max_size=6))
def test_poset_round_trip(P):
    assert io.poset_from_json(io.poset_to_json(P)) == P
    S = canonical(P)
    assert io.poset_from_json(io.poset_to_json(S)) == S


def test_preposet_round_trip():
    K = codeleted_prejoin(chain(2))
    doc = io.poset_to_json(K)
    assert doc["kind"] == "preposet"
    assert io.poset_from_json(doc) == K


@given(poset_with_points(k=1, max_size=6))
def test_point_round_trip(data):
    P, x = data
    assert io.point_from_json(io.point_to_json(x), P) == x


def test_map_metric_cover_round_trip():
    f = MonotoneMap(chain(2), chain(3), {"a": "a", "b": "c"})
    assert io.map_from_json(io.map_to_json(f)) == f
    X, covers = circle_fixture()
    assert io.metric_from_json(io.metric_to_json(X)) == X
    C = covers[1]
    back = io.cover_from_json(io.cover_to_json(C))
    assert dict(back.items()) == dict(C.items())
    X2, covers2 = io.tower_from_json(io.tower_to_json(X, covers))
    assert X2 == X and [dict(c.items()) for c in covers2] == [dict(c.items()) for c in covers]


def test_cover_dict_form():
    C = io.cover_from_json({"kind": "cover", "sets": {"U": ["a", "b"], "V": ["b", "c"]}})
    assert C.ground == {"a", "b", "c"} and C["V"] == {"b", "c"}


def test_sampled_map_round_trip():
    f, Q, _ = hahn_fixture()
    g, Q2 = io.sampled_map_from_json(json.loads(json.dumps(io.sampled_map_to_json(f, Q))))
    assert Q2 == Q and g.values == f.values and (g.gamma, g.delta) == (f.gamma, f.delta)


def test_floats_rejected(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"chain": ["a"], "weights": [1.0]}')
    with pytest.raises(io.FormatError):
        io.read_json(str(path))


# ------------------------------------------------------------------ CLI

def test_validate(tmp_path, capsys):
    good = write(tmp_path, "good.json", io.poset_to_json(chain(3)))
    assert main(["validate", good]) == 0
    assert "valid poset" in capsys.readouterr().out
    cyc = write(tmp_path, "cyc.json", {"kind": "preposet", "elements": ["a", "b"], "relations": [["a", "b"], ["b", "a"]]})
    assert main(["validate", cyc]) == 1
    missing = write(tmp_path, "none.json", {"elements": []})
    assert main(["validate", missing]) == 1


def test_validate_flags_discontinuous_sampled_map(tmp_path):
    f, Q, _ = hahn_fixture()
    doc = io.sampled_map_to_json(f, Q)
    assert main(["validate", write(tmp_path, "ok.json", doc)]) == 0
    # Point 1 jumps to the far vertex while its neighbours stay put.
    doc["values"] = [[i, io.point_to_json(RPoint.vertex(Q, "b" if i == 1 else "a"))] for i in range(4)]
    assert main(["validate", write(tmp_path, "bad.json", doc)]) == 1


def test_op_dist(tmp_path):
    P = chain(2)
    doc = {
        "poset": io.poset_to_json(P),
        "x": io.point_to_json(RPoint.vertex(P, "a")),
        "y": io.point_to_json(RPoint(P, ("a", "b"), (F(1, 2), F(1, 2)))),
    }
    out = tmp_path / "out.json"
    assert main(["op", "dist", "--in", write(tmp_path, "in.json", doc), "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == {"dist": "1/2", "d3_upper": "1/2"}


def test_op_closure_and_homology(tmp_path):
    doc = {"kind": "preposet", "elements": ["a", "b", "c"], "relations": [["a", "b"], ["b", "c"]]}
    out = tmp_path / "c.json"
    assert main(["op", "closure", "--in", write(tmp_path, "p.json", doc), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["kind"] == "poset"
    circle = {"simplices": [[0, 1], [1, 2], [0, 2]]}
    assert main(["op", "homology", "--in", write(tmp_path, "k.json", circle), "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == {"betti_z2": [1, 1]}


def test_op_hahn(tmp_path):
    f, Q, _ = hahn_fixture()
    doc = io.sampled_map_to_json(f, Q)
    doc["n"] = 1
    out = tmp_path / "h.json"
    assert main(["op", "hahn", "--in", write(tmp_path, "f.json", doc), "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["ok"] and [c["distance"] for c in res["certificates"]] == ["0", "1/16", "5/16", "3/8"]


def test_op_failure_exit_code(tmp_path):
    doc = {"kind": "cover", "ground": ["a", "b"], "sets": [["U", ["a"]]]}
    assert main(["op", "nerve", "--in", write(tmp_path, "c.json", doc)]) == 1


def test_verify_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["verify", "chain-formula", "--seed", "3", "--trials", "30", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "wall_time" not in a.read_text()
    c = tmp_path / "c.csv"
    assert main(["verify", "isometry", "--trials", "20", "--format", "csv", "--out", str(c)]) == 0
    assert c.read_text().startswith("suite,check,passed,detail\n")


def test_experiment_exit_codes(tmp_path):
    out = str(tmp_path / "e.json")
    assert main(["experiment", "codeleted", "--n", "1", "--out", out]) == 0
    assert main(["experiment", "pigeonhole", "--n", "5", "--out", out]) == 1
    doc = write(tmp_path, "t.json", io.tower_to_json(*circle_fixture()))
    assert main(["experiment", "tower", "--tower", doc, "--out", out]) == 0


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "posetreal.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout
