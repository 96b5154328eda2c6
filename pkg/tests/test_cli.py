import io
import json
from fractions import Fraction as F

import pytest

from schmidtgame.cli import InteractiveBob, main
from schmidtgame.core import GameParams, StayStrategy, check_transcript, loads_transcript, play

PLAY = "play --arena line --alpha 1/16 --beta 1/2 --r0 1/2 --rounds 50 --alice force0 --bob random --seed 1".split()


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_play_writes_transcript_deterministically(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(PLAY + ["--out", a], capsys)[0] == 0
    assert run(PLAY + ["--out", b], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    t = loads_transcript(a.read_text())
    assert len(t.rounds) == 50 and check_transcript(t) == []


def test_play_rejects_large_alpha(capsys):
    argv = [x if x != "1/16" else "1/4" for x in PLAY]
    code, _, err = run(argv, capsys)
    assert code == 2 and "alpha" in err


def test_bad_rational_is_a_configuration_error(capsys):
    argv = [x if x != "1/16" else "0.0625" for x in PLAY]
    assert run(argv, capsys)[0] == 2


def test_frequency_report(tmp_path, capsys):
    t = tmp_path / "t.json"
    run(PLAY + ["--out", t], capsys)
    code, out, _ = run(["analyze", "--input", t, "--report", "frequency", "--digit", "0"], capsys)
    rep = json.loads(out)
    assert code == 0 and {"count", "k", "ledger_bound"} <= rep.keys()
    assert rep["ledger_pass"] is True and rep["count"] >= rep["ledger_bound"]


def test_analyze_error_paths(tmp_path, capsys):
    t = tmp_path / "t.json"
    run(PLAY + ["--out", t], capsys)
    assert run(["analyze", "--input", t, "--report", "branching"], capsys)[0] == 2
    assert run(["analyze", "--input", tmp_path / "missing.json", "--report", "frequency"], capsys)[0] == 2


def test_covering_checks_out_of_range(tmp_path, capsys):
    t, checks = tmp_path / "h.json", tmp_path / "c.json"
    argv = "play --arena hyperspace --alpha 1/8 --beta 1/2 --rounds 4 --alice branching --bob random --seed 2".split()
    assert run(argv + ["--out", t], capsys)[0] == 0
    checks.write_text(json.dumps([{"n": 2, "m": 0, "x": ["1/2"], "R": "1/2"}]))
    code, out, _ = run(["analyze", "--input", t, "--report", "covering", "--checks", checks], capsys)
    assert code == 0 and json.loads(out)["checks"][0]["pass"] is True
    checks.write_text(json.dumps([{"n": 40, "m": 0, "x": ["1/2"], "R": "1/2"}]))
    assert run(["analyze", "--input", t, "--report", "covering", "--checks", checks], capsys)[0] == 2


def test_max_points_refusal(capsys):
    argv = "play --arena hyperspace --alpha 1/8 --beta 1/2 --rounds 40 --alice branching --bob random".split()
    code, _, err = run(argv, capsys)
    assert code == 2 and "rounds" in err


def test_verify_commands(capsys):
    assert run("verify --suite porosity --seed 3 --queries 200".split(), capsys)[0] == 0
    assert run("verify --suite oracle-hausdorff --samples 100".split(), capsys)[0] == 0
    code, out, _ = run("verify --suite moran --samples 5".split(), capsys)
    assert code == 0 and out.startswith("PASS")
    assert run("verify --suite unknown".split(), capsys)[0] == 2


def test_moran_and_porosity(capsys):
    code, out, _ = run(["moran", "--digits", "01" * 20, "--depth", "40"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["slope"] == "1/2" and rep["count"] == 2**20
    assert run("porosity --alpha 1/8 --beta 1/2 --depth 4 --queries 50".split(), capsys)[0] == 0
    assert run("porosity --alpha 1/4 --beta 1/2".split(), capsys)[0] == 2


def test_dimension_on_pointset(tmp_path, capsys):
    pts = tmp_path / "p.json"
    pts.write_text(json.dumps([[f"{i}/64"] for i in range(65)]))
    code, out, _ = run(["dimension", "--input", pts, "--scales", "1..4"], capsys)
    assert code == 0 and json.loads(out)["fit"]["exact"] is True
    code, out, _ = run(["dimension", "--input", pts, "--scales", "1..5", "--report", "local"], capsys)
    assert code == 0 and "assouad_proxy" in json.loads(out)


def test_interactive_bob_reprompts_on_illegal_input():
    stdin = io.StringIO("1/2\n7/8\n1/2\n1/2\n")
    stdout = io.StringIO()
    params = GameParams(F(1, 2), F(1, 2), F(1, 4))
    t = play(params, StayStrategy(), InteractiveBob(stdin, stdout), 2)
    assert check_transcript(t) == []
    assert [r.bob.center for r in t.rounds] == [F(1, 2), F(1, 2)]
    assert "rejected" in stdout.getvalue()
