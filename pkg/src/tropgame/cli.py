"""Command-line front end.

Exit codes: ``solve`` returns 0 (MaxWins), 1 (MinWins) or 2 (Inconclusive);
``certify`` and ``duality`` return 0 on pass and 1 on failure.  Usage errors
give 64, malformed or invalid data 65, an exceeded oracle budget 69.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import report
from .condition import check_certificate, condition_numbers, duality_report
from .game import (GameFormatError, InvalidGameError, StochasticGame, game_stats, generate_random_game,
                   parse_game, require_valid, serialize_game)
from .oracle import DEFAULT_BUDGET, BudgetExceeded, OracleError, bias_seminorm, solve_operator
from .shapley import build_operator, conjugate
from .tropical import scalar
from .value_iteration import (VIConfig, Winner, default_epsilon, predict_bounds, run_exact,
                              run_finite_precision, run_perturbed_rescaled)

EX_USAGE, EX_DATAERR, EX_UNAVAILABLE = 64, 65, 69
VERDICT_CODES = {Winner.MAX: 0, Winner.MIN: 1, Winner.INCONCLUSIVE: 2}
CSV_HEADER = ["n", "m", "q", "M", "W", "k", "rho", "cond", "N_vi", "bound_nits", "bound_total", "elapsed_ms"]


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropgame", description="Exact diagnostics for stochastic mean-payoff games.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def game_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("game", help="game JSON file, or - for standard input")
        sp.add_argument("--out", help="write the report here instead of standard output")
        sp.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET,
                        help="maximum number of strategies the oracle may consider")
        return sp

    sp = game_cmd("solve", "decide the sign of the mean payoff by value iteration")
    sp.add_argument("--mode", choices=["exact", "float"], default="exact")
    sp.add_argument("--epsilon", type=_fraction, help="per-step precision in float mode (default 1/(3mu))")
    sp.add_argument("--max-iters", type=_positive_int, default=100_000)
    sp.add_argument("--perturbed", action="store_true", help="iterate 1 + F_{2mu} instead of F")
    sp.add_argument("--dual", action="store_true", help="iterate the dual operator")

    game_cmd("condition", "Collatz-Wielandt numbers, condition numbers and bounds")
    sp = game_cmd("oracle", "exact values, optimal strategies and Blackwell bias")
    sp.add_argument("--dual", action="store_true")
    game_cmd("duality", "check the duality identities between F and its dual")
    sp = game_cmd("certify", "check F(z) >= mu + z for a supplied z and mu")
    sp.add_argument("--vector", required=True, help="comma-separated entries, -inf allowed; write --vector=-1,2 when the first entry is negative")
    sp.add_argument("--mu", required=True, type=_fraction)
    sp.add_argument("--dual", action="store_true")

    sp = sub.add_parser("gen", help="generate a random valid game")
    _gen_flags(sp)
    sp.add_argument("--a-rows-finite", action="store_true")
    sp.add_argument("--diagonal-free", action="store_true")
    sp.add_argument("--out")

    sp = sub.add_parser("bench", help="CSV of statistics and iteration counts for random games")
    _gen_flags(sp)
    sp.add_argument("--count", type=_positive_int, default=10)
    sp.add_argument("--jobs", type=_positive_int, default=1)
    sp.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    sp.add_argument("--out")
    return p


def _gen_flags(sp):
    sp.add_argument("--n", type=_positive_int, default=3)
    sp.add_argument("--m", type=_positive_int, default=3)
    sp.add_argument("--q", type=_positive_int, default=3)
    sp.add_argument("--M", type=_positive_int, default=1)
    sp.add_argument("--W", type=int, default=5)
    sp.add_argument("--density", type=float, default=1.0)
    sp.add_argument("--seed", type=int, default=0)


def _read_game(path: str, stdin) -> StochasticGame:
    if path == "-":
        text = stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc.strerror}") from None
    g = parse_game(text)
    require_valid(g)
    return g


def _parse_vector(text: str) -> tuple:
    try:
        return tuple(scalar(v) for v in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise DataError(f"malformed vector {text!r}") from None


def _operator(g, dual: bool):
    F = build_operator(g)
    if dual:
        try:
            return conjugate(F, "dual")
        except ValueError as exc:
            raise DataError(str(exc)) from None
    return F


# -- commands ---------------------------------------------------------------------

def cmd_solve(args, g):
    if args.perturbed:
        if args.dual or args.mode == "float":
            raise UsageError("--perturbed works with the exact mode on the primal game only")
        rep = run_perturbed_rescaled(g, VIConfig(max_iters=args.max_iters))
    elif args.mode == "float":
        eps = args.epsilon if args.epsilon is not None else default_epsilon(g)
        if eps <= 0:
            raise UsageError("--epsilon must be positive")
        rep = run_finite_precision(_operator(g, args.dual), VIConfig("finite_precision", eps, args.max_iters))
        rep.bounds = predict_bounds(g)
    else:
        if args.epsilon is not None:
            raise UsageError("--epsilon only applies to --mode float")
        rep = run_exact(_operator(g, args.dual), VIConfig(max_iters=args.max_iters))
        rep.bounds = predict_bounds(g)
    return report.jsonable(rep), VERDICT_CODES[rep.winner]


def cmd_condition(args, g):
    return report.jsonable(condition_numbers(g, args.budget)), 0


def cmd_oracle(args, g):
    sol = solve_operator(_operator(g, args.dual), args.budget)
    out = report.jsonable(sol)
    out["bias_seminorm"] = report.jsonable(bias_seminorm(sol))
    return out, 0


def cmd_duality(args, g):
    rep = duality_report(g, args.budget)
    code = EX_DATAERR if not rep.hypotheses_met else (0 if rep.passed else 1)
    out = report.jsonable(rep)
    out["passed"] = rep.passed
    return out, code


def cmd_certify(args, g):
    F = _operator(g, args.dual)
    z = _parse_vector(args.vector)
    if len(z) != F.in_dim:
        raise DataError(f"vector has {len(z)} entries, operator expects {F.in_dim}")
    ok = check_certificate(F, z, args.mu)
    return {"pass": ok, "vector": report.jsonable(z), "mu": report.rational_str(args.mu),
            "dual": args.dual}, 0 if ok else 1


def _generate(args, seed):
    try:
        return generate_random_game(args.n, args.m, args.q, M=args.M, W_max=args.W, density=args.density,
                                    seed=seed, a_rows_finite=getattr(args, "a_rows_finite", False),
                                    diagonal_free=getattr(args, "diagonal_free", False))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


@dataclass(frozen=True)
class BenchTask:
    n: int
    m: int
    q: int
    M: int
    W: int
    density: float
    seed: int
    budget: int


def bench_row(task: BenchTask) -> list:
    t0 = time.perf_counter()
    g = generate_random_game(task.n, task.m, task.q, M=task.M, W_max=task.W, density=task.density,
                             seed=task.seed)
    s = game_stats(g)
    F = build_operator(g)
    sol = solve_operator(F, task.budget)
    b = predict_bounds(g, sol)
    vi = run_exact(F)
    if sol.rho is not None:
        rho = report.rational_str(sol.rho)
        cond = report.rational_str(math.inf if sol.rho == 0 else 1 / abs(sol.rho))
    else:
        rho, cond = "nonconstant", report.rational_str(math.inf if sol.cw_upper == 0 else 1 / abs(sol.cw_upper))
    n_vi = vi.iterations if vi.winner is not Winner.INCONCLUSIVE else f">{vi.iterations}"
    nits = "" if b.nits_iterations is None else b.nits_iterations
    elapsed = round((time.perf_counter() - t0) * 1000)
    return [g.n, g.m, g.q, s.M, s.W, s.k, rho, cond, n_vi, nits, b.total_bound, elapsed]


def cmd_bench(args):
    tasks = [BenchTask(args.n, args.m, args.q, args.M, args.W, args.density, args.seed + i, args.budget)
             for i in range(args.count)]
    _generate(args, args.seed)      # surfaces bad generator parameters as a usage error
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(bench_row, tasks))
    else:
        rows = [bench_row(t) for t in tasks]
    keyed = sorted(zip((t.seed for t in tasks), rows))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(row for _, row in keyed)
    return buf.getvalue()


# -- entry point --------------------------------------------------------------------

COMMANDS = {"solve": cmd_solve, "condition": cmd_condition, "oracle": cmd_oracle,
            "duality": cmd_duality, "certify": cmd_certify}


def _emit(text: str, out_path, stdout):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def run_cli(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:       # --help
            return int(exc.code or 0)
        if args.command == "gen":
            _emit(serialize_game(_generate(args, args.seed)) + "\n", args.out, stdout)
            return 0
        if args.command == "bench":
            _emit(cmd_bench(args), args.out, stdout)
            return 0
        g = _read_game(args.game, stdin)
        payload, code = COMMANDS[args.command](args, g)
        _emit(report.dumps(payload) + "\n", args.out, stdout)
        return code
    except UsageError as exc:
        print(f"tropgame: usage error: {exc}", file=stderr)
        return EX_USAGE
    except (GameFormatError, InvalidGameError, DataError) as exc:
        print(f"tropgame: data error: {exc}", file=stderr)
        return EX_DATAERR
    except BudgetExceeded as exc:
        print(f"tropgame: budget exceeded: {exc}", file=stderr)
        return EX_UNAVAILABLE
    except OracleError as exc:
        print(f"tropgame: oracle failure: {exc}", file=stderr)
        return 70


def main() -> None:
    sys.exit(run_cli())
