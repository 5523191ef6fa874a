"""Duality identities between a game operator and its dual over many random games.

    python scripts/duality_sweep.py --games 1000
"""
from __future__ import annotations

import argparse
import collections
import random
import time
from dataclasses import dataclass, fields

from tropgame.condition import duality_report
from tropgame.game import generate_random_game


@dataclass
class SweepConfig:
    games: int = 500
    max_dim: int = 4
    max_M: int = 3
    max_W: int = 5
    seed: int = 1


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SweepConfig):
        p.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    cfg = SweepConfig(**vars(p.parse_args(argv)))
    rng = random.Random(cfg.seed)
    failures = collections.Counter()
    regimes = collections.Counter()
    t0 = time.perf_counter()
    for i in range(cfg.games):
        g = generate_random_game(rng.randint(1, cfg.max_dim), rng.randint(1, cfg.max_dim),
                                 rng.randint(1, cfg.max_dim), M=rng.randint(1, cfg.max_M),
                                 W_max=rng.randint(1, cfg.max_W), density=rng.choice([0.5, 0.75, 1.0]),
                                 seed=cfg.seed * 100_000 + i, a_rows_finite=True)
        rep = duality_report(g)
        for it in rep.items:
            failures[it.name] += not it.passed
        regimes[("P_R(F)" if rep.primal.PR_feasible else "P(F*)" if rep.dual.P_feasible else "?")] += 1
    print(f"{cfg.games} games in {time.perf_counter() - t0:.1f}s")
    for name, bad in sorted(failures.items()):
        print(f"  {name}: {bad} failures")
    print("  feasible side of the alternative:", dict(regimes))


if __name__ == "__main__":
    main()
