import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from pickseq import io
from pickseq.cli import main
from pickseq.core import Instance

from conftest import DATA, instance_and_allocation


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@settings(max_examples=100, deadline=None)
@given(instance_and_allocation())
def test_round_trips(case):
    inst, a = case
    assert io.parse_instance(io.serialize_instance(inst)) == inst
    assert io.parse_allocation(io.serialize_allocation(a), inst) == a


def test_rational_weights_round_trip():
    inst = Instance((("1/3", 2, "0.5"),))
    doc = io.serialize_instance(inst)
    assert json.loads(doc)["weights"] == [["1/3", 2, "1/2"]]
    assert io.parse_instance(doc) == inst


def test_sequence_and_prices_round_trip():
    assert io.parse_sequence(io.serialize_sequence((1, 0, 1))) == (1, 0, 1)
    prices = (Fraction(1, 2), Fraction(1), Fraction(0))
    assert io.prices_to_json(prices) == ["1/2", "1/1", "0/1"]
    assert io.parse_prices(io.prices_to_json(prices)) == prices


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"agents": 2, "objects": 2, "weights": [[1, 2], [3, "x"]]}', "row 2, column 2"),
        ('{"agents": 2, "objects": 2, "weights": [[1, 2], [3, -1]]}', "row 2, column 2"),
        ('{"agents": 2, "objects": 2, "weights": [[1, 2], [3]]}', "row 2"),
        ('{"agents": 0, "objects": 2, "weights": []}', "agents"),
        ('{"agents": 1, "objects": 1, "weights": [[true]]}', "row 1, column 1"),
        ("[1, 2]", "JSON object"),
        ("{", "invalid JSON"),
    ],
)
def test_instance_parse_errors(doc, fragment):
    with pytest.raises(io.ParseError, match=fragment):
        io.parse_instance(doc)


def test_allocation_parse_errors(ex1):
    with pytest.raises(io.ParseError, match="share 1"):
        io.parse_allocation('{"shares": [[0], [1, 2]]}')
    with pytest.raises(io.ParseError):
        io.parse_allocation('{"shares": [[1], [1, 2, 3]]}', ex1)
    with pytest.raises(io.ParseError):
        io.parse_allocation('{"shares": [[1], [2]]}', ex1)
    with pytest.raises(io.ParseError):
        io.parse_sequence('{"picks": [1, 3, 1]}', ex1)


def test_cli_analyze_example6(capsys):
    code, out, _ = run(capsys, "analyze", "--instance", DATA / "example6.json", "--allocation", DATA / "example6_alloc.json")
    assert code == 0
    assert "efficiency: NS, fairness: EF" in out
    assert "frustrating domain: {3,4}" in out
    assert "trading cycle: (2, 3) -> (1, 4) -> (2, 3)" in out
    assert "dominated by: <{4,5}, {1,3}, {2}>" in out


def test_cli_analyze_json(capsys):
    code, out, _ = run(
        capsys, "analyze", "--format", "json",
        "--instance", DATA / "example5.json", "--allocation", DATA / "example5_alloc.json",
    )
    report = json.loads(out)
    assert code == 0
    assert report["efficiency"] == "SnP"
    assert report["sequence"] == [1, 2, 2]
    assert report["dominator"] == [[2, 3], [1]]


def test_cli_analyze_ceei_example(capsys):
    code, out, _ = run(
        capsys, "analyze", "--instance", DATA / "ceei_example.json", "--allocation", DATA / "ceei_example_alloc.json"
    )
    assert code == 0 and "fairness: CEEI" in out and "CEEI prices:" in out


def test_cli_ceei(capsys):
    code, out, err = run(
        capsys, "ceei", "--format", "json", "--dump-system",
        "--instance", DATA / "ceei_example.json", "--allocation", DATA / "ceei_example_alloc.json",
    )
    report = json.loads(out)
    assert code == 0 and report["ceei"] is True and len(report["prices"]) == 4
    assert "d >= 0" in err
    code, out, _ = run(capsys, "ceei", "--instance", DATA / "example6.json", "--allocation", DATA / "example6_alloc.json")
    assert code == 0 and out.strip() == "not CEEI"


def test_cli_sequence(capsys):
    code, out, _ = run(capsys, "sequence", "--instance", DATA / "example1.json", "--sequence", "2,1,2")
    assert code == 0
    assert "generates 2 allocation(s)" in out
    code, out, _ = run(capsys, "sequence", "--format", "json", "--instance", DATA / "example5.json", "--sequence", "1,2,2")
    assert json.loads(out)["allocations"] == [[[1], [2, 3]]]


def test_cli_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--format", "json", "--instance", DATA / "example1.json")
    assert code == 0 and len(json.loads(out)["edges"]) == 10


def test_cli_experiment(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "uniform", "num_agents": 2, "num_objects": 5}))
    code, out, _ = run(
        capsys, "experiment", "--format", "json", "--config", cfg, "--seed", 3,
        "--instances", 5, "--out-dir", tmp_path / "out",
    )
    assert code == 0
    report = json.loads(out)
    total = sum(v for inst in report["instances"] for row in inst["grid"].values() for v in row.values())
    assert total == 5 * 32
    assert (tmp_path / "out" / "uniform_2x5.csv").exists()


def test_cli_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"agents": 1, "objects": 2, "weights": [[1, "q"]]}')
    code, _, err = run(capsys, "enumerate", "--instance", bad)
    assert code == 2 and "row 1, column 2" in err
    code, _, err = run(capsys, "enumerate", "--instance", tmp_path / "missing.json")
    assert code == 2
    code, _, _ = run(capsys, "sequence", "--instance", DATA / "example1.json", "--sequence", "1,2")
    assert code == 2
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"model": "zipf"}')
    code, _, _ = run(capsys, "experiment", "--config", cfg, "--out-dir", tmp_path)
    assert code == 2


def test_cli_capacity_error(capsys, tmp_path):
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"agents": 2, "objects": 21, "weights": [list(range(21))] * 2}))
    code, _, err = run(capsys, "enumerate", "--instance", big)
    assert code == 3 and "error" in err
