import csv
import io
import json

import pytest

from helpers import G2, G2_NEG, ZERO_RHO
from tropgame.cli import CSV_HEADER, run_cli
from tropgame.game import StochasticGame, generate_random_game, serialize_game


def run(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(argv, stdin=io.StringIO(stdin_text), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def g2_path(tmp_path):
    p = tmp_path / "g2.json"
    p.write_text(serialize_game(G2))
    return str(p)


def test_solve_g2(g2_path):
    code, out, _ = run(["solve", g2_path])
    rep = json.loads(out)
    assert code == 0 and rep["winner"] == "MaxWins" and rep["iterations"] == 4
    assert rep["final_u"] == ["7/2", "1/2"]


def test_solve_min_wins():
    code, out, _ = run(["solve", "-"], serialize_game(G2_NEG))
    assert code == 1 and json.loads(out)["winner"] == "MinWins"


def test_solve_inconclusive_and_perturbed():
    code, _, _ = run(["solve", "-", "--max-iters", "30"], serialize_game(ZERO_RHO))
    assert code == 2
    code, out, _ = run(["solve", "-", "--perturbed"], serialize_game(ZERO_RHO))
    assert code == 0 and json.loads(out)["extra"] == {"perturbed": True}


def test_solve_float_and_dual(g2_path):
    code, out, _ = run(["solve", g2_path, "--mode", "float", "--epsilon", "1/100"])
    assert code == 0 and json.loads(out)["epsilon"] == "1/100"
    code, out, _ = run(["solve", g2_path, "--dual"])
    assert code == 1


def test_certify(g2_path):
    code, out, _ = run(["certify", g2_path, "--vector", "3,0", "--mu", "1/2"])
    assert code == 0 and json.loads(out)["pass"] is True
    code, out, _ = run(["certify", g2_path, "--vector", "3,0", "--mu", "1"])
    assert code == 1 and json.loads(out)["pass"] is False
    # entries starting with "-" need the --vector=... spelling
    code, out, _ = run(["certify", g2_path, "--vector=-inf,0", "--mu", "0", "--dual"])
    assert code == 1 and json.loads(out)["vector"] == ["-inf", "0"]     # cw_upper(F*) < 0


def test_gen_pipeline():
    code, game, _ = run(["gen", "--n", "2", "--m", "2", "--q", "2", "--M", "2", "--W", "5", "--seed", "7"])
    assert code == 0
    code, _, _ = run(["solve", "-"], game)
    assert code in (0, 1, 2)


def test_gen_is_deterministic():
    a = run(["gen", "--seed", "3", "--density", "0.5"])[1]
    assert a == run(["gen", "--seed", "3", "--density", "0.5"])[1]


def test_oracle_condition_duality(g2_path):
    code, out, _ = run(["oracle", g2_path])
    sol = json.loads(out)
    assert code == 0 and sol["rho"] == "1/2" and sol["bias_seminorm"] == "3"
    code, out, _ = run(["condition", g2_path])
    rep = json.loads(out)
    assert code == 0 and rep["cond"] == "2" and rep["bound_cond"] == 4
    code, out, _ = run(["duality", g2_path])
    assert code == 0 and json.loads(out)["passed"] is True


def test_duality_without_hypotheses():
    g = StochasticGame.from_lists([[0], [None]], [[1], [2]], [[1]])
    code, out, err = run(["duality", "-"], serialize_game(g))
    assert code == 65 and json.loads(out)["hypotheses_met"] is False


def test_reports_are_deterministic(g2_path):
    assert run(["condition", g2_path])[1] == run(["condition", g2_path])[1]


def test_out_flag(g2_path, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(["solve", g2_path, "--out", str(target)])
    assert code == 0 and out == "" and json.loads(target.read_text())["winner"] == "MaxWins"


def test_bench_csv():
    code, out, _ = run(["bench", "--count", "3", "--n", "2", "--m", "2", "--q", "2", "--M", "2", "--seed", "4"])
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == CSV_HEADER and len(rows) == 4
    again = list(csv.reader(io.StringIO(run(["bench", "--count", "3", "--n", "2", "--m", "2", "--q", "2",
                                            "--M", "2", "--seed", "4"])[1])))
    assert [r[:-1] for r in rows] == [r[:-1] for r in again]    # elapsed_ms is wall-clock


def test_bench_parallel_matches_serial():
    args = ["bench", "--count", "4", "--n", "2", "--m", "2", "--q", "2", "--seed", "9"]
    serial = [r[:-1] for r in csv.reader(io.StringIO(run(args)[1]))]
    parallel = [r[:-1] for r in csv.reader(io.StringIO(run(args + ["--jobs", "2"])[1]))]
    assert serial == parallel


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["solve"],
    ["solve", "x.json", "--bogus"],
    ["solve", "x.json", "--mode", "quad"],
    ["certify", "x.json", "--vector", "1"],
    ["gen", "--n", "0"],
])
def test_usage_errors(argv):
    assert run(argv)[0] == 64


def test_epsilon_requires_float_mode(g2_path):
    assert run(["solve", g2_path, "--epsilon", "1/10"])[0] == 64


@pytest.mark.parametrize("text", [
    "{",
    '{"m":1,"n":1,"q":1,"A":[[0]],"B":[[1]],"P":[["1/3"]]}',
    '{"m":1,"n":1,"q":1,"A":[[null]],"B":[[1]],"P":[["1"]]}',
])
def test_data_errors(text):
    code, _, err = run(["solve", "-"], text)
    assert code == 65 and "data error" in err


def test_missing_file():
    assert run(["oracle", "/nonexistent/game.json"])[0] == 65


def test_bad_vector(g2_path):
    assert run(["certify", g2_path, "--vector", "1,x", "--mu", "0"])[0] == 65
    assert run(["certify", g2_path, "--vector", "1,2,3", "--mu", "0"])[0] == 65


def test_budget_exceeded():
    g = generate_random_game(4, 4, 4, density=1, seed=0)
    code, _, err = run(["oracle", "-", "--budget", "5"], serialize_game(g))
    assert code == 69 and "budget" in err


def test_help_exits_zero():
    assert run(["--help"])[0] == 0
