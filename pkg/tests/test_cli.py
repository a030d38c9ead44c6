import json

import pytest

from gl3arch.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main
from gl3arch.mellin_barnes import whittaker_gl3, WhittakerSpec


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def _value(doc, k=0):
    v = doc["body"]["reports"][0]["numeric"][k]["value"]
    return complex(v["re"], v["im"])


def test_rep_subset(capsys):
    code, out = run(capsys, "verify", "rep", "--max-ell", "3")
    assert code == EXIT_OK
    assert json.loads(out)["body"]["all_ok"]


def test_rep_corrupted(capsys):
    code, out = run(capsys, "verify", "rep", "--max-ell", "2", "--corrupt-basis", "--format", "text")
    assert code == EXIT_MISMATCH
    assert "[FAIL] so3_action" in out


def test_factorization(capsys):
    assert run(capsys, "verify", "factorization", "--id", "sym2_x_sym2")[0] == EXIT_OK
    assert run(capsys, "verify", "factorization", "--id", "triple_product", "--drop", "1")[0] == EXIT_MISMATCH


def test_barnes_subset(capsys):
    code, out = run(capsys, "verify", "barnes", "--count", "2", "--seed", "5")
    assert code == EXIT_OK
    assert len(json.loads(out)["body"]["reports"]) == 2


def test_eval_whittaker_golden(capsys):
    code, out = run(capsys, "eval", "whittaker", "--ell", "5", "--j", "3,0,2", "--a1", "1", "--a2", "1")
    assert code == EXIT_OK
    want = 1.0350465780471826e-22 + 7.318677322424369e-08j
    assert abs(_value(json.loads(out)) - want) <= 1e-10 * abs(want)


@pytest.mark.parametrize("argv", [
    ["eval", "whittaker", "--ell", "5", "--j", "3,0,2", "--a1", "0", "--a2", "1"],
    ["eval", "whittaker", "--ell", "5", "--j", "3,0,2", "--a1", "1,2", "--a2", "1"],
    ["eval", "whittaker", "--ell", "5", "--j", "3,0,1", "--a1", "1", "--a2", "1"],
    ["verify", "rs-zeta", "--ell", "5"],
    ["verify", "nonsense"],
    ["verify", "factorization", "--id", "nope"],
])
def test_usage_errors(argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_cache_round_trip(capsys, tmp_path):
    argv = ["eval", "whittaker", "--ell", "3", "--j", "2,0,1", "--a1", "1,0.5", "--a2", "1.5,0.3",
            "--cache", "--cache-dir", str(tmp_path), "--grid", "0.1", "--timestamp", "t"]
    code1, first = run(capsys, *argv)
    code2, second = run(capsys, *argv)
    assert code1 == code2 == EXIT_OK
    assert first == second
    assert len(list(tmp_path.glob("*.w3g"))) == 1
    doc = json.loads(first)
    direct = whittaker_gl3(WhittakerSpec("GL3", ell=3, j=(2, 0, 1)), 1.0, 1.5)
    # interpolation error is controlled relative to the grid maximum; W decays
    # fast, so pointwise relative accuracy at step 0.1 is only a few 1e-6 here
    assert abs(_value(doc) - direct) <= 1e-5 * abs(direct)


def test_out_file_and_config_echo(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "factorization", "--out", str(out), "--T", "50", "--nodes", "2000"]) == EXIT_OK
    cfg = json.loads(out.read_text())["body"]["config"]
    assert cfg["T"] == 50.0 and cfg["nodes"] == 2000 and "backend" in cfg
