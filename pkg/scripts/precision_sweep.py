"""How coarse can the per-step precision get before an adversary flips the verdict?

Runs the finite-precision iteration with eps = c / (3 mu) for several c, the
adversary always pushing against the true sign, and counts wrong verdicts.

    python scripts/precision_sweep.py --games 150
"""
from __future__ import annotations

import argparse
import random
from dataclasses import dataclass, fields
from fractions import Fraction

from tropgame.game import game_stats, generate_random_game
from tropgame.oracle import solve_game
from tropgame.shapley import build_operator
from tropgame.value_iteration import VIConfig, Winner, run_finite_precision


@dataclass
class SweepConfig:
    games: int = 150
    max_dim: int = 3
    seed: int = 2
    max_iters: int = 20_000


FACTORS = (1, 2, 3, 6, 12)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SweepConfig):
        p.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    cfg = SweepConfig(**vars(p.parse_args(argv)))
    rng = random.Random(cfg.seed)
    wrong = {c: 0 for c in FACTORS}
    undecided = {c: 0 for c in FACTORS}
    used = 0
    for i in range(cfg.games):
        g = generate_random_game(rng.randint(1, cfg.max_dim), rng.randint(1, cfg.max_dim),
                                 rng.randint(1, cfg.max_dim), M=rng.randint(1, 3), density=0.75,
                                 seed=cfg.seed * 100_000 + i)
        sol = solve_game(g)
        if not sol.rho:
            continue
        used += 1
        mu = game_stats(g).mu
        push = -1 if sol.rho > 0 else 1
        truth = Winner.MAX if sol.rho > 0 else Winner.MIN
        for c in FACTORS:
            eps = Fraction(c, 3 * mu)
            rep = run_finite_precision(build_operator(g), VIConfig("finite_precision", eps, cfg.max_iters),
                                       lambda l, u: [push] * len(u))
            if rep.winner is Winner.INCONCLUSIVE:
                undecided[c] += 1
            elif rep.winner is not truth:
                wrong[c] += 1
    print(f"{used} games with nonzero value")
    for c in FACTORS:
        print(f"  eps = {c}/(3 mu): wrong {wrong[c]}, inconclusive {undecided[c]}")


if __name__ == "__main__":
    main()
