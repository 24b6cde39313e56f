import json
from pathlib import Path

from approxstable.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
PAPER = str(FIXTURES / "paper.smti")
SCRIPT = "m1,m2,m3,m1,m2,m4,m4,m2"


def test_solve(capsys):
    assert main(["solve", "--input", PAPER, "--seed", "0"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("matching\n") and out.count("match m") == 4


def test_solve_is_deterministic(capsys):
    main(["solve", "--input", PAPER, "--policy", "random", "--seed", "4"])
    first = capsys.readouterr().out
    main(["solve", "--input", PAPER, "--policy", "random", "--seed", "4"])
    assert capsys.readouterr().out == first


def test_replay_prints_the_trace(capsys):
    assert main(["replay", "--input", PAPER, "--script", SCRIPT, "--trace"]) == 0
    lines = capsys.readouterr().out.splitlines()
    events = [ln for ln in lines if ln.startswith("EVENT")]
    assert events[0] == "EVENT propose m1 w1 L special"
    assert "EVENT accept m2 w1" not in events
    assert any(ln.startswith("EVENT swap m2 w1 displaced=m1 satellite=w2") for ln in events)
    assert "EVENT propose m1 w1 L retained" in events
    assert "EVENT replace m4 w3 displaced=m2 uneasy" in events
    assert lines[-4:] == ["match m1 w1", "match m2 w4", "match m3 w2", "match m4 w3"]


def test_solve_json_and_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["solve", "--input", PAPER, "--json", "--output", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["type"] == "solve_result" and len(obj["matching"]["pairs"]) == 4


def test_b_matching_engine(tmp_path, capsys):
    inst = tmp_path / "b.smti"
    inst.write_text("smti 1 2\ncap m 1 2\nm 1: w1 w2\nw 1: m1\nw 2: m1\n")
    assert main(["solve", "--input", str(inst), "--b-matching"]) == 0
    assert capsys.readouterr().out == "matching\nmatch m1 w1\nmatch m1 w2\n"


def test_audit_of_empty_matching(capsys):
    code = main(["audit", "--instance", PAPER, "--matching", str(FIXTURES / "empty.match")])
    out = capsys.readouterr().out
    assert code == 1
    assert sum(ln.startswith("blocking m") for ln in out.splitlines()) == 10


def test_audit_of_solver_output(tmp_path, capsys):
    m = tmp_path / "m.match"
    main(["solve", "--input", PAPER, "--output", str(m)])
    assert main(["audit", "--instance", PAPER, "--matching", str(m), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["stable"] is True


def test_oracle(capsys):
    assert main(["oracle", "--instance", PAPER]) == 0
    assert capsys.readouterr().out.startswith("opt_size 4\n")


def test_gen_round_trips_through_solve(tmp_path, capsys):
    f = tmp_path / "g.smti"
    assert main(["gen", "--n-left", "5", "--n-right", "4", "--seed", "3", "--output", str(f)]) == 0
    assert main(["solve", "--input", str(f)]) == 0


def test_bench_csv(capsys):
    assert main(["bench", "--sizes", "200,400", "--repetitions", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("edges,") and len(out) == 3


def test_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.smti"
    bad.write_text("smti 4 4\nm 1: (w1\n")
    assert main(["solve", "--input", str(bad)]) == 2
    assert "unclosed_tie" in capsys.readouterr().err
    assert main(["solve", "--input", str(tmp_path / "missing.smti")]) == 2
    assert main(["replay", "--input", PAPER, "--script", "m1,m1"]) == 2
    assert main(["solve", "--input", PAPER, "--policy", "bogus"]) == 2
    assert main(["audit", "--instance", PAPER, "--matching", PAPER]) == 2
    assert main([]) == 2
    assert main(["oracle", "--instance", PAPER, "--edge-budget", "5"]) == 2
