"""Reference games and seeded samplers shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from tropgame.game import StochasticGame, generate_random_game
from tropgame.oracle import solve_game

N = None
HALF = "1/2"

# two Min states, each owning one Max state; uniform nature: F(x) = (s + 2, s - 1), s = (x1 + x2)/2
G2 = StochasticGame.from_lists([[0, N], [N, 0]], [[2, N], [N, -1]], [[HALF, HALF], [HALF, HALF]])
G2_NEG = StochasticGame.from_lists([[0, N], [N, 0]], [[-2, N], [N, -1]], [[HALF, HALF], [HALF, HALF]])
ZERO_RHO = StochasticGame.from_lists([[0, N], [N, 0]], [[1, N], [N, -1]], [[HALF, HALF], [HALF, HALF]])
# deterministic: F_j(x) = max(x1 - 1, x2, x3 - 1) for every j
BALL_EXAMPLE = StochasticGame.from_lists([[0, 0, 0]], [[-1, 0, -1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
# decoupled self-loops with cycle means 1 and -1
SPLIT = StochasticGame.from_lists([[0, N], [N, 0]], [[1, N], [N, -1]], [[1, 0], [0, 1]])
# 2-cycle with rewards 3 and -1
TWO_CYCLE = StochasticGame.from_lists([[0, N], [N, 0]], [[3, N], [N, -1]], [[0, 1], [1, 0]])


def translation(w) -> StochasticGame:
    """Single state: F(x) = x + w."""
    return StochasticGame.from_lists([[0]], [[w]], [[1]])


def random_params(seed: int, max_dim: int = 4, max_M: int = 3, max_W: int = 5):
    r = random.Random(seed)
    return dict(n=r.randint(1, max_dim), m=r.randint(1, max_dim), q=r.randint(1, max_dim),
                M=r.randint(1, max_M), W_max=r.randint(1, max_W), density=r.choice([0.5, 0.75, 1.0]))


@lru_cache(maxsize=None)
def sample_game(seed: int, a_rows_finite: bool = True, **overrides) -> StochasticGame:
    params = random_params(seed)
    params.update(overrides)
    return generate_random_game(seed=seed, a_rows_finite=a_rows_finite, **params)


@lru_cache(maxsize=None)
def solved(seed: int, **overrides):
    g = sample_game(seed, **overrides)
    return g, solve_game(g)


def manufacture_zero_rho(g: StochasticGame, rho: Fraction) -> StochasticGame:
    """Scale payments by the denominator of rho and make Min pay its numerator more: value 0."""
    rho = Fraction(rho)
    return g.scaled(rho.denominator, shift_a=-rho.numerator)


def hilbert_ball_samples(z, r, count: int, rng: random.Random):
    """Points x with ||x - z||_H <= r: all 0/r corner patterns first, then random interior points."""
    n = len(z)
    r = Fraction(r)
    out = []
    for mask in range(min(2 ** n, count)):
        out.append(tuple(zj + (r if mask >> j & 1 else 0) for j, zj in enumerate(z)))
    while len(out) < count:
        shift = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
        d = [r * Fraction(rng.randint(0, 60), 60) for _ in range(n)]
        lo = min(d)
        out.append(tuple(zj + dj - lo + shift for zj, dj in zip(z, d)))
    return out
