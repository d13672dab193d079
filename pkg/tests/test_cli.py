import json

import pytest

from qcoha.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", "--quiver", "jordan", "--dim", "2", "--prime", "2", "--kind", "M")
    assert code == 0
    assert json.loads(out) == {"raw": "88", "stack": {"num": "44", "den": "3"}}


def test_count_identical_across_thread_counts(capsys):
    outs = {run(capsys, "count", "--quiver", "a2", "--dim", "[2,2]", "--prime", "3", "--threads", str(n))[1]
            for n in (1, 2, 4)}
    assert len(outs) == 1


def test_count_csv_and_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "count", "--quiver", "jordan", "--dim", "1", "--prime", "3", "--format", "csv",
                       "--output", str(target))
    assert code == 0 and out == ""
    header, row = target.read_text().splitlines()
    assert header == "dim,prime,kind,raw,stack" and row.split(",")[-2:] == ["9", "9/2"]


def test_quiver_file(capsys, tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"vertices": ["i"], "arrows": [{"src": "i", "tgt": "i"}]}))
    code, out, _ = run(capsys, "count", "--quiver", str(path), "--dim", "1", "--prime", "3")
    assert code == 0 and json.loads(out)["raw"] == "9"


def test_kac_a2(capsys):
    code, out, _ = run(capsys, "kac", "--quiver", "a2", "--vmax", "[1,1]", "--format", "pretty")
    assert code == 0
    assert out.splitlines() == ["A_[0, 1](t) = 1", "A_[1, 0](t) = 1", "A_[1, 1](t) = 1"]


def test_coha_cross_check(capsys):
    code, out, _ = run(capsys, "coha", "--quiver", "jordan", "--vmax", "2", "--primes", "2,3", "--cross-check")
    assert code == 0
    assert all(r["equal"] for r in json.loads(out)["cross_check"])


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "count", "--quiver", "loop:3", "--dim", "4", "--prime", "5", "--budget", "10")
    assert code == 3
    diag = json.loads(err)
    assert diag["error"] == "budget exceeded" and int(diag["required"]) > 10


@pytest.mark.parametrize("argv", [
    ["count", "--quiver", "nosuch", "--dim", "1", "--prime", "3"],
    ["count", "--quiver", "a2", "--dim", "[1]", "--prime", "3"],
    ["count", "--quiver", "a2", "--dim", "[1,1]", "--prime", "4"],
    ["shuffle", "member", "x1", "--nvars", "2"],
    ["strata", "eval", "--formula", "nope", "--args", "{}"],
    ["strata", "eval", "--formula", "hecke_dim", "--args", "[1]"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_shuffle_commands(capsys):
    code, out, _ = run(capsys, "shuffle", "mult", "1", "1", "--fvars", "1", "--gvars", "1")
    assert code == 0 and json.loads(out)["nvars"] == 2
    code, out, _ = run(capsys, "shuffle", "member", "x1+x2", "--cap", "2")
    res = json.loads(out)
    assert res["status"] == "member" and set(res["certificate"]) == {"D0*D2", "D2*D0"}
    code, out, _ = run(capsys, "shuffle", "wheel", "1", "--nvars", "2")
    assert json.loads(out)["vacuous"] is True


def test_strata_commands(capsys):
    code, out, _ = run(capsys, "strata", "eval", "--formula", "hecke_dim", "--args", '{"v1":1,"v2":1,"w":1}')
    assert code == 0 and json.loads(out)["value"] == "3"
    code, out, _ = run(capsys, "strata", "eval", "--formula", "lambda_flag_dim", "--args", '{"g":2,"v":2,"nu":[1,1]}')
    assert json.loads(out)["value"] == "7"
    code, out, _ = run(capsys, "strata", "scan", "--format", "csv")
    assert code == 0 and out.startswith("g,v1,l,w,nu,n1,n2,d,d00,ok")
    code, out, _ = run(capsys, "strata", "lift", "--trials", "20")
    assert code == 0 and json.loads(out)["passed"] == 20


def test_check_quick(capsys):
    code, out, _ = run(capsys, "check", "--suite", "quick", "--format", "pretty")
    assert code == 0 and all(line.startswith("[PASS]") for line in out.splitlines())
