import io
import json
import shutil
import subprocess
import sys

import pytest

from equicat.cli import SCHEMA, main, parse_context


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def run_json(argv):
    code, text = run(argv + ["--json"])
    return code, json.loads(text), text


def test_h1_inversion_json():
    code, d, _ = run_json(["h1", "--G", "C2", "--Pi", "C3", "--action", "inversion"])
    assert code == 0 and d["ok"] and d["schema"] == SCHEMA
    whole = d["checks"][-1]
    assert whole["classes"] == 1 and whole["components"] == 1
    assert whole["rows"][0]["aut_order"] == 1


def test_h1_frobenius_on_gl():
    code, d, _ = run_json(["h1", "--G", "C2", "--Pi", "GL1F4", "--action", "frobenius"])
    assert code == 0
    assert d["checks"][-1]["classes"] == 1


def test_json_is_deterministic():
    argv = ["h1", "--G", "S3", "--Pi", "C2", "--action", "aut:0", "--json"]
    a, b = run(argv), run(argv)
    assert a == b
    assert "seconds" not in json.loads(a[1])
    _, timed = run(argv + ["--timing"])
    assert "seconds" in json.loads(timed)


def test_table_output():
    code, text = run(["hilbert90", "--p", "2", "--k", "2", "--n", "2"])
    assert code == 0
    assert text.startswith("hilbert90: PASS")
    assert "aut_order=6" in text


@pytest.mark.parametrize("argv", [
    ["verify", "silly", "--G", "S3"],
    ["verify", "cat1", "--G", "C3", "--q", "2"],
    ["verify", "orbit-nerve", "--G", "S3"],
    ["model-sigma", "--G", "C2", "--n", "2"],
    ["model-gl", "--p", "2", "--k", "2", "--n", "1"],
    ["nerve", "--G", "S3", "--q", "3"],
    ["nerve", "--chaotic", "3"],
    ["notformal", "--X", "2", "--Pi", "S3"],
])
def test_passing_commands(argv):
    code, d, _ = run_json(argv)
    assert code == 0 and d["ok"] and d["failed"] == 0


def test_orbit_nerve_reports_difference():
    _, d, _ = run_json(["verify", "orbit-nerve", "--G", "S3", "--q", "2"])
    c = d["checks"][0]
    assert c["unequal_levels"] == [1, 2]
    assert [r["orbits_of_nerve"] for r in c["rows"]] == [1, 3, 11]


def test_nerve_sizes():
    _, d, _ = run_json(["nerve", "--G", "S3", "--q", "3"])
    assert d["checks"][0]["sizes"] == [1, 6, 36, 216] and d["checks"][0]["pi0"] == 1


def test_nerve_from_file(tmp_path):
    from equicat.fincat import chaotic
    p = tmp_path / "c.cat"
    p.write_text(chaotic(2).to_text())
    _, d, _ = run_json(["nerve", "--cat", str(p), "--q", "2"])
    assert d["checks"][0]["sizes"] == [2, 4, 8]


def test_failed_check_exits_one():
    code, d, _ = run_json(["model-sigma", "--G", "S3", "--n", "2", "--copies", "1"])
    assert code == 1 and not d["ok"]
    bad = [c for c in d["checks"] if not c["ok"]]
    assert "needs 2 copies" in bad[0]["error"]


@pytest.mark.parametrize("argv", [
    ["h1", "--G", "Z7", "--Pi", "C2"],
    ["h1", "--G", "C2", "--Pi", "S3", "--action", "inversion"],
    ["h1", "--G", "C3", "--Pi", "C3", "--action", "inversion"],
    ["h1", "--G", "C2", "--Pi", "C3", "--action", "aut:99"],
    ["h1", "--G", "C2", "--Pi", "C3", "--action", "bogus"],
    ["h1", "--G", "C3", "--Pi", "GL1F4", "--action", "frobenius"],
    ["nerve"],
    ["nerve", "--cat", "/nonexistent/file"],
    ["verify", "finlem1", "--max-gamma", "0"],
])
def test_input_errors_exit_two(argv, capsys):
    code, _ = run(argv)
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_parse_context_actions():
    G, P, act = parse_context("C4", "C5", "inversion")
    act.check()
    assert act(1, 1) == P.inverse(1)
    G, P, act = parse_context("C2", "GL2F4", "frobenius")
    assert G.order == 2 and P.order == 180


def test_console_script():
    exe = shutil.which("equicat")
    cmd = [exe] if exe else [sys.executable, "-m", "equicat.cli"]
    r = subprocess.run(cmd + ["verify", "silly", "--G", "C2", "--json"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["ok"]
