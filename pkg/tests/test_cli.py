import json

import pytest

from conftest import LOOP_SOURCES, l5_source
from mphase.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, source in LOOP_SOURCES.items():
        p = tmp_path / f"{name}.loop"
        p.write_text(source)
        paths[name] = str(p)
    for b in (1, 2, 3):
        p = tmp_path / f"L5B{b}.loop"
        p.write_text(l5_source(b))
        paths[f"L5B{b}"] = str(p)

    def tuple_file(name, components):
        p = tmp_path / f"{name}.tuple"
        p.write_text("".join(f"component {c}\n" for c in components))
        return str(p)

    paths["tuple"] = tuple_file
    paths["tmp"] = tmp_path
    return paths


def test_synth_found_exit_zero(files, capsys):
    assert main(["synth", files["L1"], "--max-depth", "3"]) == 0
    out = capsys.readouterr().out
    assert "status: found" in out
    assert "depth: 3" in out


def test_synth_not_found_exit_one(files, capsys):
    assert main(["synth", files["L4"], "--domain", "rat", "--max-depth", "5"]) == 1
    assert "not-found" in capsys.readouterr().out


def test_synth_integer_domain(files, capsys):
    assert main(["synth", files["L4"], "--domain", "int", "--max-depth", "2",
                 "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "found"
    assert report["hull_applied"] is True
    assert report["domain"] == "int"


def test_hull_contains_added_constraint(files, capsys):
    assert main(["hull", files["L4"]]) == 0
    out = capsys.readouterr().out
    assert "x1" in out


def test_check_valid_and_invalid(files, capsys):
    mlrf = files["tuple"]("m", ["z + 1", "y + 1", "x"])
    assert main(["check", files["L1"], "--tuple", mlrf, "--kind", "mlrf"]) == 0
    assert main(["check", files["L1"], "--tuple", mlrf, "--kind", "nested"]) == 1
    out = capsys.readouterr().out
    assert "witness" in out


def test_check_bms_kinds(files, capsys):
    lex = files["tuple"]("lex", ["4y", "4x - 4z + 4"])
    assert main(["check", files["L2"], "--tuple", lex, "--kind", "bms"]) == 0
    assert main(["check", files["L2"], "--tuple", lex, "--kind", "weak-bms"]) == 0
    assert main(["check", files["L2"], "--tuple", lex, "--kind", "mlrf"]) == 1


def test_bound_reference_values(files, capsys):
    tup = files["tuple"]("b", ["y + 1", "x"])
    assert main(["bound", files["L6"], "--tuple", tup, "--x0", "x=3,y=5",
                 "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["bound"]["c"] == ["1", "4"]
    assert report["bound"]["d"] == ["1", "1/2"]
    assert report["bound"]["coefficient"] == "8"
    assert report["bound"]["iterations"] == 48


def test_bound_invalid_tuple_exit_one(files, capsys):
    tup = files["tuple"]("bad", ["x"])
    assert main(["bound", files["L6"], "--tuple", tup]) == 1


def test_simulate_with_trace(files, capsys):
    tup = files["tuple"]("s", ["y + 1", "x"])
    out_csv = str(files["tmp"] / "trace.csv")
    assert main(["simulate", files["L6"], "--x0", "x=1,y=3",
                 "--tuple", tup, "--trace-out", out_csv]) == 0
    out = capsys.readouterr().out
    assert "steps: 8" in out
    lines = open(out_csv).read().strip().splitlines()
    assert lines[0] == "step,x,y,f1,f2"
    assert len(lines) == 10


def test_convert_bms_to_mlrf(files, capsys):
    lex = files["tuple"]("c", ["4y", "4x - 4z + 4"])
    assert main(["convert", files["L2"], "--tuple", lex, "--kind", "bms"]) == 0
    assert "valid" in capsys.readouterr().out


def test_convert_to_nested(files, capsys):
    mlrf = files["tuple"]("n", ["z + 1", "y + 1", "x"])
    assert main(["convert", files["L1"], "--tuple", mlrf, "--to", "nested",
                 "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "valid"
    assert report["depth"] <= 3


def test_usage_errors_exit_two(files, capsys):
    assert main(["synth", "/nonexistent.loop"]) == 2
    assert main(["bogus-command"]) == 2
    assert main(["simulate", files["L6"], "--x0", "x=1"]) == 2  # missing y
    bad = files["tmp"] / "bad.loop"
    bad.write_text("vars x\nguard x >= bogus_var\n")
    assert main(["synth", str(bad)]) == 2


def test_json_reports_round_trip(files, capsys):
    tup = files["tuple"]("rt", ["y + 1", "x"])
    for argv in (
        ["synth", files["L1"], "--max-depth", "3", "--json"],
        ["check", files["L6"], "--tuple", tup, "--kind", "mlrf", "--json"],
        ["bound", files["L6"], "--tuple", tup, "--x0", "x=2,y=9", "--json"],
        ["simulate", files["L6"], "--x0", "x=2,y=2", "--json"],
    ):
        main(argv)
        raw = capsys.readouterr().out.strip()
        assert json.dumps(json.loads(raw)) == raw


def test_exit_codes_table(files):
    tup = files["tuple"]("t", ["z + 1", "y + 1", "x"])
    assert main(["synth", files["L1"], "--max-depth", "3"]) == 0
    assert main(["synth", files["L3"], "--domain", "rat"]) == 1
    assert main(["check", files["L1"], "--tuple", tup]) == 0
    assert main(["synth"]) == 2
