import json

import pytest

from quorumlace.cli import main, parse_script
from quorumlace.simnet import Op


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# --- analyze ------------------------------------------------------------------


def test_analyze_e4_league(capsys, samples):
    code, out, _ = run_cli(capsys, "analyze", samples / "e4.json", "--league", "p1,p2,p3,p4", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["league"]["is_league"] is True
    assert doc["league"]["tolerated"] == [[], ["p1"], ["p4"], ["p1", "p4"]]


def test_analyze_uses_the_file_league_by_default(capsys, samples):
    code, out, _ = run_cli(capsys, "analyze", samples / "e4.json")
    assert code == 0 and "is_league=true" in out


def test_analyze_e1_survivors(capsys, samples):
    code, out, _ = run_cli(capsys, "analyze", samples / "e1.json", "--show", "survivors", "--json")
    assert code == 0
    assert json.loads(out)["survivors"] == {"p1": [["p1"]]}


def test_analyze_show_everything(capsys, samples):
    code, out, _ = run_cli(capsys, "analyze", samples / "e4.json", "--show", "slices,survivors,quorums,tolerated")
    assert code == 0
    assert "slices p1: {{p1,p2}}" in out
    assert "tolerated by {p1,p2,p3,p4}: {{}, {p1}, {p4}, {p1,p4}}" in out


def test_analyze_all_maximal(capsys, samples):
    code, out, _ = run_cli(capsys, "analyze", samples / "disjoint.json", "--league", "all-maximal", "--json")
    assert code == 0
    assert json.loads(out)["maximal_leagues"] == [["a1", "a2", "a3", "a4"], ["b1", "b2", "b3", "b4"]]


def test_analyze_failing_league_exits_one(capsys, samples):
    code, out, _ = run_cli(capsys, "analyze", samples / "disjoint.json", "--league", "a1,b1")
    assert code == 1 and "witness" in out


def test_analyze_capacity_exit_code(capsys, samples):
    code, _, err = run_cli(capsys, "analyze", samples / "e4.json", "--capacity", "2")
    assert code == 3 and "bound is 2" in err


@pytest.mark.parametrize("extra", [["--show", "bogus"], ["--league", "p1,p9"]])
def test_analyze_usage_errors(capsys, samples, extra):
    code, _, err = run_cli(capsys, "analyze", samples / "e4.json", *extra)
    assert code == 2 and err.startswith("error:")


def test_missing_file_is_an_input_error(capsys, tmp_path):
    code, _, err = run_cli(capsys, "analyze", tmp_path / "nope.json")
    assert code == 2


def test_bad_json_reports_location(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"processes": [}', encoding="utf-8")
    code, _, err = run_cli(capsys, "analyze", p)
    assert code == 2 and "bad.json:1:" in err


def test_json_output_is_byte_identical(capsys, samples):
    argv = ("analyze", samples / "e4.json", "--show", "slices,tolerated", "--league", "p1,p2,p3,p4", "--json")
    first = run_cli(capsys, *argv)[1]
    assert run_cli(capsys, *argv)[1] == first


# --- simulate -----------------------------------------------------------------


def test_simulate_broadcast_sweep(capsys, samples):
    code, out, _ = run_cli(
        capsys, "simulate", samples / "e4.json", "--protocol", "broadcast", "--sender", "p1",
        "--faulty", "p1:equivocate@w,p4:lie-empty", "--sweep", "50", "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["runs"] == 50 and doc["violations"] == []


def test_simulate_register_write_then_read(capsys, samples):
    code, out, _ = run_cli(capsys, "simulate", samples / "e4.json", "--protocol", "register", "--writer", "p2", "--value", "a", "--json")
    assert code == 0
    doc = json.loads(out)
    reads = [o for o in doc["outputs"] if o["op"] == "read"]
    assert reads == [{"process": "p1", "op": "read", "index": 1, "value": "a"}]


def test_simulate_trace_replay_is_identical(capsys, samples, tmp_path):
    for name in ("a.jsonl", "b.jsonl"):
        code, _, _ = run_cli(
            capsys, "simulate", samples / "e4.json", "--protocol", "broadcast", "--sender", "p2",
            "--faulty", "p4:crash@6", "--seed", "17", "--trace", tmp_path / name,
        )
        assert code == 0
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_simulate_untolerated_is_skipped_unless_forced(capsys, samples):
    code, out, _ = run_cli(capsys, "simulate", samples / "e4.json", "--protocol", "broadcast", "--faulty", "p2:mute")
    assert code == 0 and "skipped" in out
    code, out, _ = run_cli(capsys, "simulate", samples / "e4.json", "--protocol", "broadcast", "--faulty", "p2:mute", "--force")
    assert code == 0 and "precondition-unsatisfied" in out


@pytest.mark.parametrize(
    "faulty",
    ["p9:mute", "p1", "p1:teleport", "p1:crash@x", "p2:equivocate"],
)
def test_simulate_bad_faulty_specs(capsys, samples, faulty):
    code, _, err = run_cli(capsys, "simulate", samples / "e4.json", "--protocol", "broadcast", "--sender", "p1", "--faulty", faulty)
    assert code == 2


def test_simulate_bad_script(capsys, samples):
    code, _, _ = run_cli(capsys, "simulate", samples / "e4.json", "--protocol", "register", "--script", "x:1")
    assert code == 2


def test_parse_script():
    ops = parse_script("w:a,r:p3,&r:p1,r:p4", "p2")
    assert ops == (
        Op("p2", "write", "a"),
        Op("p3", "read", after=0),
        Op("p1", "read", after=0),
        Op("p4", "read", after=2),
    )


# --- compare ----------------------------------------------------------------------


def test_compare_b3_on_e4_systems(capsys, samples):
    code, out, _ = run_cli(capsys, "compare", samples / "f4-asymmetric.json", "--check", "b3", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["holds"] is False
    assert doc["witness"] == {"i": "p1", "j": "p4", "F_i": ["p3", "p4"], "F_j": ["p1", "p2"], "F_ij": []}


def test_compare_thm1_threshold(capsys, samples):
    code, out, _ = run_cli(capsys, "compare", samples / "threshold4-symmetric.json", "--check", "thm1", "--json")
    assert code == 0 and json.loads(out)["agreement"] is True


def test_compare_q3(capsys, samples):
    code, out, _ = run_cli(capsys, "compare", samples / "threshold4-symmetric.json", "--check", "q3")
    assert code == 0 and "Q3 holds: true" in out


def test_compare_intact_on_fbas(capsys, samples):
    code, out, _ = run_cli(capsys, "compare", samples / "e4-fbas.json", "--check", "intact", "--faulty", "p1,p4", "--json")
    assert code == 0 and json.loads(out)["holds"] is True
    code, out, _ = run_cli(capsys, "compare", samples / "e4-fbas.json", "--check", "intact", "--set", "p1,p2", "--json")
    doc = json.loads(out)
    assert code == 1 and doc["holds"] is False and "witness" in doc


def test_compare_cluster_and_guild(capsys, samples):
    code, _, _ = run_cli(capsys, "compare", samples / "e4-fbas.json", "--check", "cluster", "--faulty", "p1,p4")
    assert code == 0
    code, out, _ = run_cli(capsys, "compare", samples / "f4-asymmetric.json", "--check", "guild", "--faulty", "p1,p4", "--json")
    assert code == 0 and json.loads(out)["guild"] == ["p2", "p3"]


def test_compare_thm2(capsys, samples):
    code, out, _ = run_cli(capsys, "compare", samples / "f4-asymmetric.json", "--check", "thm2", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["b3"] is False and doc["league"] is True


def test_compare_model_mismatch(capsys, samples):
    code, _, err = run_cli(capsys, "compare", samples / "f4-asymmetric.json", "--check", "q3")
    assert code == 2 and "needs a symmetric model" in err


def test_compare_faulty_member_in_candidate(capsys, samples):
    code, _, _ = run_cli(capsys, "compare", samples / "e4-fbas.json", "--check", "intact", "--set", "p1,p2", "--faulty", "p1")
    assert code == 2


# --- fuzz -----------------------------------------------------------------------------


def test_fuzz_zero_instances(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "fuzz", "--instances", "0", "--json", "--out", tmp_path)
    assert code == 0
    assert json.loads(out)["instances"] == 0


def test_fuzz_small_run(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "fuzz", "--processes", "4", "--instances", "5", "--seed", "3", "--properties", "tolerance,blocked-closure", "--out", tmp_path)
    assert code == 0 and "0 counterexample(s)" in out
    assert not any(tmp_path.iterdir())


def test_fuzz_persists_counterexamples(capsys, tmp_path, monkeypatch):
    from quorumlace import league

    monkeypatch.setattr(league, "_meets_outside", lambda a, b, t: bool(a & b))
    code, out, _ = run_cli(capsys, "fuzz", "--processes", "5", "--instances", "12", "--seed", "2", "--properties", "consistency", "--out", tmp_path)
    assert code == 1
    files = sorted(tmp_path.iterdir())
    assert files
    doc = json.loads(files[0].read_text())
    assert doc["property"] == "consistency" and "processes" in doc


@pytest.mark.parametrize("argv", [["--properties", "no-such-property"], ["--processes", "9"]])
def test_fuzz_usage_errors(capsys, tmp_path, argv):
    code, _, _ = run_cli(capsys, "fuzz", "--instances", "1", "--out", tmp_path, *argv)
    assert code == 2


def test_fuzz_oracle_bound_warning(capsys, tmp_path):
    code, _, err = run_cli(capsys, "fuzz", "--instances", "0", "--oracle-bound", "7", "--out", tmp_path)
    assert code == 0 and "warning" in err
