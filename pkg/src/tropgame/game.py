"""Stochastic mean-payoff game data ``(A, B, P)``.

Min moves from ``j in [n]`` to ``i`` with ``A_ij`` finite and pays ``-A_ij``;
Max moves from ``i in [m]`` to ``k`` with ``B_ik`` finite and receives
``B_ik``; nature moves from ``k in [q]`` to ``l`` with probability ``P_kl``.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .tropical import NEG_INF, TropMatrix


class InvalidGameError(ValueError):
    pass


class GameFormatError(ValueError):
    pass


@dataclass(frozen=True)
class StochasticGame:
    A: TropMatrix
    B: TropMatrix
    P: tuple

    def __post_init__(self):
        m, n = self.A.shape
        mb, q = self.B.shape
        if mb != m:
            raise ValueError(f"A has {m} rows but B has {mb}")
        if len(self.P) != q or any(len(row) != n for row in self.P):
            raise ValueError(f"P must be {q}x{n}")

    @classmethod
    def from_lists(cls, A, B, P) -> "StochasticGame":
        return cls(TropMatrix.from_rows(A), TropMatrix.from_rows(B),
                   tuple(tuple(Fraction(p) for p in row) for row in P))

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def q(self) -> int:
        return self.B.shape[1]

    def scaled(self, c, shift_a=0) -> "StochasticGame":
        """Game with payments multiplied by ``c`` and ``shift_a`` subtracted from finite ``A`` entries."""
        return StochasticGame(self.A.map_finite(lambda a: c * a - shift_a),
                              self.B.map_finite(lambda b: c * b), self.P)

    def shift_max_payments(self, delta) -> "StochasticGame":
        """Add ``delta`` to every Max payment; the mean payoff moves by ``delta``."""
        return StochasticGame(self.A, self.B.map_finite(lambda b: b + delta), self.P)


@dataclass
class ValidationReport:
    b_rows_finite: bool
    a_cols_finite: bool
    p_stochastic: bool
    integral_payments: bool
    a_rows_finite: bool
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.b_rows_finite and self.a_cols_finite and self.p_stochastic and self.integral_payments


def validate_game(g: StochasticGame) -> ValidationReport:
    errors = []
    b_rows = all(g.B.support(i) for i in range(g.m))
    if not b_rows:
        errors.append("some row of B has no finite entry")
    At = g.A.T
    a_cols = all(At.support(j) for j in range(g.n))
    if not a_cols:
        errors.append("some column of A has no finite entry")
    a_rows = all(g.A.support(i) for i in range(g.m))
    stoch = all(all(0 <= p <= 1 for p in row) and sum(row) == 1 for row in g.P)
    if not stoch:
        errors.append("P is not row-stochastic")
    integral = all(a.denominator == 1 for a in g.A.finite_entries() + g.B.finite_entries())
    if not integral:
        errors.append("finite entries of A and B must be integers")
    return ValidationReport(b_rows, a_cols, stoch, integral, a_rows, errors)


def require_valid(g: StochasticGame) -> None:
    rep = validate_game(g)
    if not rep.ok:
        raise InvalidGameError("; ".join(rep.errors))


@dataclass(frozen=True)
class GameStats:
    W: int
    M: int
    k: int
    mu: int
    rows_of_A_finite: bool
    n: int

    @property
    def exponent(self) -> int:
        return min(self.k, self.n - 1)

    @property
    def deterministic(self) -> bool:
        return self.M == 1


def common_denominator(P) -> int:
    return reduce(math.lcm, (Fraction(p).denominator for row in P for p in row), 1)


def nondeterministic_rows(P) -> int:
    return sum(1 for row in P if sum(1 for p in row if p > 0) >= 2)


def game_stats(g: StochasticGame) -> GameStats:
    require_valid(g)
    W = 0
    for i in range(g.m):
        for a in (g.A[i, j] for j in g.A.support(i)):
            for b in (g.B[i, h] for h in g.B.support(i)):
                W = max(W, abs(int(a - b)))
    M = common_denominator(g.P)
    k = nondeterministic_rows(g.P)
    mu = g.n * M ** min(k, g.n - 1)
    return GameStats(W, M, k, mu, validate_game(g).a_rows_finite, g.n)


# -- random instances -------------------------------------------------------

def random_distribution(rng: random.Random, n: int, M: int) -> tuple:
    """Row of ``n`` probabilities, each a multiple of ``1/M``."""
    counts = [0] * n
    for _ in range(M):
        counts[rng.randrange(n)] += 1
    return tuple(Fraction(c, M) for c in counts)


def _random_tropical(rng, rows, cols, W_max, density):
    return [[rng.randint(-W_max, W_max) if rng.random() < density else None for _ in range(cols)]
            for _ in range(rows)]


def generate_random_game(n: int, m: int, q: int, M: int = 1, W_max: int = 5, density: float = 1.0,
                         seed=None, a_rows_finite: bool = False,
                         diagonal_free: bool = False, max_tries: int = 1000) -> StochasticGame:
    """Random valid game; deterministic given ``seed``.

    ``a_rows_finite`` additionally forces a finite entry in every row of ``A``.
    ``diagonal_free`` removes nature transitions that would let ``F_j`` depend
    on ``x_j`` and retries until every nature row keeps some successor.
    """
    if min(n, m, q, M) < 1 or W_max < 0 or not 0 < density <= 1:
        raise ValueError("invalid generator parameters")
    if diagonal_free and n < 2:
        raise ValueError("a diagonal-free game needs at least two Min states")
    rng = random.Random(seed)
    for _ in range(max_tries):
        A = _random_tropical(rng, m, n, W_max, density)
        B = _random_tropical(rng, m, q, W_max, density)
        for j in range(n):
            if all(A[i][j] is None for i in range(m)):
                A[rng.randrange(m)][j] = rng.randint(-W_max, W_max)
        if a_rows_finite:
            for i in range(m):
                if all(a is None for a in A[i]):
                    A[i][rng.randrange(n)] = rng.randint(-W_max, W_max)
        for i in range(m):
            if all(b is None for b in B[i]):
                B[i][rng.randrange(q)] = rng.randint(-W_max, W_max)
        if not diagonal_free:
            P = [random_distribution(rng, n, M) for _ in range(q)]
            return StochasticGame.from_lists(A, B, P)
        # nature state k must not lead back to any Min state that can reach it
        forbidden = [set() for _ in range(q)]
        for j in range(n):
            for i in range(m):
                if A[i][j] is None:
                    continue
                for k in range(q):
                    if B[i][k] is not None:
                        forbidden[k].add(j)
        allowed = [[l for l in range(n) if l not in forbidden[k]] for k in range(q)]
        if any(not a for a in allowed):
            continue
        P = []
        for k in range(q):
            row = [Fraction(0)] * n
            sub = random_distribution(rng, len(allowed[k]), M)
            for l, p in zip(allowed[k], sub):
                row[l] = p
            P.append(row)
        return StochasticGame.from_lists(A, B, P)
    raise ValueError("could not generate a diagonal-free game with these parameters")


# -- JSON -------------------------------------------------------------------

def _int_entry(v, where):
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise GameFormatError(f"{where}: expected integer or null, got {v!r}")
    try:
        f = Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise GameFormatError(f"{where}: {exc}") from None
    if f.denominator != 1:
        raise GameFormatError(f"{where}: payments must be integers, got {v!r}")
    return int(f)


def _prob_entry(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise GameFormatError(f"{where}: probabilities must be 'p/q' strings, got {v!r}")
    try:
        f = Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise GameFormatError(f"{where}: {exc}") from None
    if f < 0:
        raise GameFormatError(f"{where}: negative probability")
    return f


def parse_game(text: str) -> StochasticGame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise GameFormatError("top-level JSON value must be an object")
    try:
        m, n, q = (data[key] for key in ("m", "n", "q"))
        A, B, P = (data[key] for key in ("A", "B", "P"))
    except KeyError as exc:
        raise GameFormatError(f"missing key {exc}") from None
    if not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in (m, n, q)):
        raise GameFormatError("m, n, q must be positive integers")

    def rows_of(name, mat, r, c):
        if not isinstance(mat, list) or len(mat) != r or any(not isinstance(row, list) or len(row) != c for row in mat):
            raise GameFormatError(f"{name} must be a {r}x{c} array")
        return mat

    A = [[_int_entry(v, f"A[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(rows_of("A", A, m, n))]
    B = [[_int_entry(v, f"B[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(rows_of("B", B, m, q))]
    P = [[_prob_entry(v, f"P[{k}][{l}]") for l, v in enumerate(row)] for k, row in enumerate(rows_of("P", P, q, n))]
    for k, row in enumerate(P):
        if sum(row) != 1:
            raise GameFormatError(f"row {k} of P sums to {sum(row)}, not 1")
    return StochasticGame.from_lists(A, B, P)


def game_to_dict(g: StochasticGame) -> dict:
    def ints(M):
        return [[None if a is None else int(a) if a.denominator == 1 else str(a) for a in row] for row in M.to_lists()]

    return {"m": g.m, "n": g.n, "q": g.q, "A": ints(g.A), "B": ints(g.B),
            "P": [[str(p) for p in row] for row in g.P]}


def serialize_game(g: StochasticGame) -> str:
    return json.dumps(game_to_dict(g))
