"""Ground-truth solver for small games given as layered Shapley operators.

A positional strategy of a player fixes one choice at every output state of
every layer that player owns (``Adjoint`` layers for Min, ``MaxPlus`` layers
for Max).  A pair of strategies turns one application of ``F`` into a Markov
chain ``(T, r)`` on the input states.

Discounted values ``v_α = (I - αT)^{-1} r`` are handled exactly as rational
functions of ``ε = 1 - α`` (numerator polynomials over a common positive
denominator ``det(I - αT)``), ordered by their sign as ``ε → 0+``.  Strategy
iteration in that ordered field yields Blackwell-optimal strategies; the
resulting pair is then certified by comparing it against every single-player
deviation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Sequence

from . import chains, linalg
from .game import StochasticGame, require_valid
from .shapley import Adjoint, MaxPlus, ShapleyOperator, Stochastic, apply, build_operator
from .tropical import hilbert_seminorm

MIN, MAX = "min", "max"
DEFAULT_BUDGET = 200_000


class OracleError(RuntimeError):
    pass


class BudgetExceeded(OracleError):
    pass


def _owner(layer):
    if isinstance(layer, Adjoint):
        return MIN
    if isinstance(layer, MaxPlus):
        return MAX
    return None


def player_layers(F: ShapleyOperator, player: str) -> list[int]:
    return [t for t, L in enumerate(F.layers) if _owner(L) == player]


def strategy_count(F: ShapleyOperator, player: str) -> int:
    count = 1
    for t in player_layers(F, player):
        L = F.layers[t]
        for o in range(L.out_dim):
            count *= len(L.options(o))
    return count


def strategy_space(F: ShapleyOperator, player: str, budget: int = DEFAULT_BUDGET) -> list[dict]:
    """All positional strategies of ``player`` as ``{layer_index: choices}``."""
    count = strategy_count(F, player)
    if count == 0:
        raise OracleError(f"{player} has a state without moves")
    if count > budget:
        raise BudgetExceeded(f"{count} {player} strategies exceed the budget of {budget}")
    layers = player_layers(F, player)
    per_layer = [list(itertools.product(*(F.layers[t].options(o) for o in range(F.layers[t].out_dim))))
                 for t in layers]
    return [dict(zip(layers, combo)) for combo in itertools.product(*per_layer)]


def first_strategy(F: ShapleyOperator, player: str) -> dict:
    out = {}
    for t in player_layers(F, player):
        L = F.layers[t]
        choices = []
        for o in range(L.out_dim):
            opts = L.options(o)
            if not opts:
                raise OracleError(f"{player} has no move at state {o} of layer {t}")
            choices.append(opts[0])
        out[t] = tuple(choices)
    return out


def enumerate_strategies(g: StochasticGame, budget: int = DEFAULT_BUDGET) -> tuple[list, list]:
    """All Min strategies ``σ: [n] → [m]`` and Max strategies ``τ: [m] → [q]`` of a game."""
    require_valid(g)
    F = build_operator(g)
    return ([s[0] for s in strategy_space(F, MIN, budget)],
            [s[1] for s in strategy_space(F, MAX, budget)])


# -- chains -----------------------------------------------------------------

@dataclass(frozen=True)
class ChainModel:
    T: tuple
    r: tuple


def chain_of(F: ShapleyOperator, smin: dict, smax: dict) -> ChainModel:
    """Per-round transition matrix and expected reward of a strategy pair."""
    n0 = F.out_dim
    R = [[Fraction(int(i == j)) for j in range(n0)] for i in range(n0)]
    r = [Fraction(0)] * n0
    for t, L in enumerate(F.layers):
        owner = _owner(L)
        if owner is None:
            R = linalg.matmul(R, [[Fraction(p) for p in row] for row in L.P])
            continue
        choice = (smin if owner == MIN else smax)[t]
        rew = [L.reward(o, choice[o]) for o in range(L.out_dim)]
        r = [ri + sum((p * rw for p, rw in zip(row, rew) if p), Fraction(0)) for ri, row in zip(r, R)]
        newR = [[Fraction(0)] * L.in_dim for _ in R]
        for a, row in enumerate(R):
            for o, p in enumerate(row):
                if p:
                    newR[a][choice[o]] += p
        R = newR
    return ChainModel(tuple(map(tuple, R)), tuple(r))


def chain_model(g: StochasticGame, sigma: Sequence[int], tau: Sequence[int]) -> ChainModel:
    """``T_jl = P_{τ(σ(j)) l}`` and ``r_j = -A_{σ(j) j} + B_{σ(j) τ(σ(j))}``."""
    for j, i in enumerate(sigma):
        if g.A[i, j] == float("-inf"):
            raise ValueError(f"sigma({j}) = {i} is not a legal move")
    for i, k in enumerate(tau):
        if g.B[i, k] == float("-inf"):
            raise ValueError(f"tau({i}) = {k} is not a legal move")
    T = tuple(tuple(g.P[tau[sigma[j]]]) for j in range(g.n))
    r = tuple(-g.A[sigma[j], j] + g.B[sigma[j], tau[sigma[j]]] for j in range(g.n))
    return ChainModel(T, r)


def evaluate_pair(g: StochasticGame, sigma, tau) -> list[Fraction]:
    """Exact mean payoff ``g(σ, τ)`` from every Min state."""
    c = chain_model(g, sigma, tau)
    return chains.average_reward(c.T, c.r)


# -- discounted values as rational functions of ε = 1 - α ----------------------

@dataclass
class Laurent:
    """``v(ε) = num(ε) / den(ε)`` with ``den > 0`` on ``(0, 1]``."""
    den: list
    num: list
    gain: list
    offset: list


def laurent(T, r) -> Laurent:
    n = len(T)
    pts = tuple(Fraction(1, s + 1) for s in range(n + 1))
    dT = chains.lcm_denominator(v for row in T for v in row)
    dr = chains.lcm_denominator(r)
    Ti = [[int(v * dT) for v in row] for row in T]
    ri = [int(v * dr) for v in r]
    dets, nums = [], [[] for _ in range(n)]
    for s in range(n + 1):
        # (s+1)·dT·(I - αT) with α = s/(s+1) is an integer matrix
        c = (s + 1) * dT
        K = [[(c if i == j else 0) - s * Ti[i][j] for j in range(n)] for i in range(n)]
        x, det = linalg.bareiss_solve(K, ri)
        scale = Fraction(det, c ** n)          # det(I - αT)
        dets.append(scale)
        for j in range(n):
            nums[j].append(x[j] * c * scale / dr)
    den = linalg.interpolate_fixed(pts, dets)
    num = [linalg.interpolate_fixed(pts, ys) for ys in nums]
    d = linalg.order(den)
    if not d:
        raise OracleError("det(I - T) must vanish for a stochastic T")
    red = den[d:]
    gain, offset = [], []
    for p in num:
        s = linalg.series_quotient(p, red, d + 1)
        if any(s[:d - 1]):
            raise OracleError("pole of order greater than one")
        gain.append(s[d - 1])
        offset.append(s[d])
    return Laurent(den, num, gain, offset)


def _cmp(num1, den1, num0, den0) -> int:
    """Sign of ``num1/den1 - num0/den0`` near ``ε = 0+``."""
    return linalg.sign_at_zero_plus(linalg.psub(linalg.pmul(num1, den0), linalg.pmul(num0, den1)))


def _level_values(F: ShapleyOperator, smin: dict, smax: dict, lau: Laurent) -> list:
    """Numerators (over ``lau.den``) at the input side of each layer."""
    p = len(F.layers)
    vals = [None] * p
    cur = [linalg.pmul([Fraction(1), Fraction(-1)], nj) for nj in lau.num]  # (1 - ε) v
    for t in range(p - 1, -1, -1):
        vals[t] = cur
        L = F.layers[t]
        owner = _owner(L)
        if owner is None:
            cur = [sum_polys([linalg.pscale(Fraction(pk), cur[l]) for l, pk in enumerate(row) if pk])
                   for row in L.P]
        else:
            choice = (smin if owner == MIN else smax)[t]
            cur = [linalg.padd(linalg.pscale(L.reward(o, choice[o]), lau.den), cur[choice[o]])
                   for o in range(L.out_dim)]
    return vals


def sum_polys(ps):
    out: list = []
    for q in ps:
        out = linalg.padd(out, q)
    return out


class _Evaluator:
    def __init__(self, F):
        self.F = F
        self.cache = {}

    def __call__(self, smin, smax) -> Laurent:
        key = (tuple(sorted(smin.items())), tuple(sorted(smax.items())))
        lau = self.cache.get(key)
        if lau is None:
            c = chain_of(self.F, smin, smax)
            lau = laurent(c.T, c.r)
            self.cache[key] = lau
        return lau


def _improve(F, player, strat, smin, smax, lau) -> tuple[dict, bool]:
    vals = _level_values(F, smin, smax, lau)
    want = 1 if player == MAX else -1
    new, changed = {}, False
    for t in player_layers(F, player):
        L = F.layers[t]
        below = vals[t]
        choices = list(strat[t])
        for o in range(L.out_dim):
            def value(c):
                return linalg.padd(linalg.pscale(L.reward(o, c), lau.den), below[c])
            best = choices[o]
            best_val = value(best)
            for c in L.options(o):
                v = value(c)
                if linalg.sign_at_zero_plus(linalg.psub(v, best_val)) == want:
                    best, best_val = c, v
            if best != choices[o]:
                choices[o] = best
                changed = True
        new[t] = tuple(choices)
    return new, changed


def blackwell_strategy_iteration(F: ShapleyOperator, max_rounds: int = 10_000):
    """Blackwell-optimal strategy pair by nested strategy iteration (Max inner, Min outer)."""
    ev = _Evaluator(F)
    smin, smax = first_strategy(F, MIN), first_strategy(F, MAX)
    for _ in range(max_rounds):
        for _ in range(max_rounds):
            smax, changed = _improve(F, MAX, smax, smin, smax, ev(smin, smax))
            if not changed:
                break
        else:
            raise OracleError("Max strategy iteration did not converge")
        smin, changed = _improve(F, MIN, smin, smin, smax, ev(smin, smax))
        if not changed:
            return smin, smax, ev
    raise OracleError("Min strategy iteration did not converge")


def _dominates(a: Laurent, b: Laurent) -> bool:
    """``a ≥ b`` componentwise in the Blackwell order."""
    return all(_cmp(na, a.den, nb, b.den) >= 0 for na, nb in zip(a.num, b.num))


def reachable_states(F: ShapleyOperator, fixed_player: str, fixed: dict) -> list[set]:
    """Output states of each layer that some play can visit when ``fixed_player`` plays ``fixed``."""
    reach = set(range(F.out_dim))
    out = []
    for t, L in enumerate(F.layers):
        out.append(reach)
        owner = _owner(L)
        if owner is None:
            reach = {l for o in reach for l, p in enumerate(L.P[o]) if p}
        elif owner == fixed_player:
            reach = {fixed[t][o] for o in reach}
        else:
            reach = {c for o in reach for c in L.options(o)}
    return out


def deviations(F: ShapleyOperator, player: str, base: dict, opponent: dict, budget: int = DEFAULT_BUDGET):
    """Every strategy of ``player`` that differs from ``base`` only at reachable states.

    Choices at states no play can visit (against the opponent's fixed
    strategy) do not affect any value, so this covers all deviations.
    """
    reach = reachable_states(F, MIN if player == MAX else MAX, opponent)
    slots = [(t, o) for t in player_layers(F, player) for o in sorted(reach[t])]
    count = 1
    for t, o in slots:
        count *= len(F.layers[t].options(o))
    if count > budget:
        raise BudgetExceeded(f"{count} {player} deviations exceed the budget of {budget}")
    for combo in itertools.product(*(F.layers[t].options(o) for t, o in slots)):
        strat = {t: list(c) for t, c in base.items()}
        for (t, o), c in zip(slots, combo):
            strat[t][o] = c
        yield {t: tuple(c) for t, c in strat.items()}


def certify_saddle(F, smin, smax, ev=None, budget: int = DEFAULT_BUDGET) -> bool:
    """Exhaustive check against all single-player deviations in the Blackwell order."""
    ev = ev or _Evaluator(F)
    star = ev(smin, smax)
    for t in deviations(F, MAX, smax, smin, budget):
        if not _dominates(star, ev(smin, t)):
            return False
    for s in deviations(F, MIN, smin, smax, budget):
        if not _dominates(ev(s, smax), star):
            return False
    return True


def blackwell_by_enumeration(F: ShapleyOperator, budget: int = DEFAULT_BUDGET):
    """Blackwell saddle found by brute force over all strategy pairs."""
    mins, maxs = strategy_space(F, MIN, budget), strategy_space(F, MAX, budget)
    if len(mins) * len(maxs) > budget:
        raise BudgetExceeded(f"{len(mins) * len(maxs)} strategy pairs exceed the budget of {budget}")
    ev = _Evaluator(F)
    # Min's choice: the σ whose best-response value is least
    best_min, best_min_val = None, None
    for s in mins:
        resp = maxs[0]
        for t in maxs[1:]:
            if _dominates(ev(s, t), ev(s, resp)):
                resp = t
        if best_min is None or _dominates(best_min_val, ev(s, resp)):
            best_min, best_min_val = s, ev(s, resp)
    best_max, best_max_val = None, None
    for t in maxs:
        resp = mins[0]
        for s in mins[1:]:
            if _dominates(ev(resp, t), ev(s, t)):
                resp = s
        if best_max is None or _dominates(ev(resp, t), best_max_val):
            best_max, best_max_val = t, ev(resp, t)
    return best_min, best_max, ev


def mean_payoff_by_enumeration(F: ShapleyOperator, budget: int = DEFAULT_BUDGET) -> tuple[list, list]:
    """Componentwise ``min_σ max_τ g`` and ``max_τ min_σ g`` from exact chain averages."""
    mins, maxs = strategy_space(F, MIN, budget), strategy_space(F, MAX, budget)
    if len(mins) * len(maxs) > budget:
        raise BudgetExceeded("too many strategy pairs")
    table = {}
    for a, s in enumerate(mins):
        for b, t in enumerate(maxs):
            c = chain_of(F, s, t)
            table[a, b] = chains.average_reward(c.T, c.r)
    n = F.out_dim
    minmax = [min(max(table[a, b][j] for b in range(len(maxs))) for a in range(len(mins))) for j in range(n)]
    maxmin = [max(min(table[a, b][j] for a in range(len(mins))) for b in range(len(maxs))) for j in range(n)]
    return minmax, maxmin


# -- solution ---------------------------------------------------------------

@dataclass
class OracleSolution:
    chi: list
    min_strategy: dict
    max_strategy: dict
    offset: list
    rho: Fraction | None = None
    blackwell_bias: list | None = None
    pair_gain: list = field(default_factory=list)

    @property
    def constant(self) -> bool:
        return len(set(self.chi)) == 1

    @property
    def bias(self):
        return self.blackwell_bias

    @property
    def sigma(self):
        return self.min_strategy.get(0)

    @property
    def tau(self):
        return self.max_strategy.get(1)

    @property
    def cw_upper(self) -> Fraction:
        return max(self.chi)

    @property
    def cw_lower(self) -> Fraction:
        return min(self.chi)


def solve_operator(F: ShapleyOperator, budget: int = DEFAULT_BUDGET, method: str = "iteration") -> OracleSolution:
    """Values, Blackwell-optimal saddle, ergodic constant and Blackwell bias of ``F``."""
    if not F.is_self_map:
        raise ValueError("the oracle needs a self-map")
    for player in (MIN, MAX):
        if strategy_count(F, player) > budget:
            raise BudgetExceeded(f"{strategy_count(F, player)} {player} strategies exceed the budget of {budget}")
    if method == "iteration":
        smin, smax, ev = blackwell_strategy_iteration(F)
    elif method == "enumerate":
        smin, smax, ev = blackwell_by_enumeration(F, budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not certify_saddle(F, smin, smax, ev, budget):
        raise OracleError("candidate strategies failed the saddle certification")
    c = chain_of(F, smin, smax)
    gain, offset = chains.gain_and_bias(c.T, c.r)
    lau = ev(smin, smax)
    if gain != lau.gain or offset != lau.offset:
        raise OracleError("chain decomposition and Laurent expansion disagree")
    sol = OracleSolution(chi=gain, min_strategy=smin, max_strategy=smax, offset=offset, pair_gain=gain)
    if sol.constant:
        sol.rho = gain[0]
        if tuple(apply(F, offset)) != tuple(sol.rho + v for v in offset):
            raise OracleError("Blackwell bias fails the ergodic equation")
        sol.blackwell_bias = offset
    return sol


def solve_game(g: StochasticGame, budget: int = DEFAULT_BUDGET, method: str = "iteration") -> OracleSolution:
    return solve_operator(build_operator(g), budget, method)


def blackwell_bias(g: StochasticGame, sigma, tau) -> tuple[Fraction, list]:
    """``(ρ, D r)`` for a Blackwell-optimal pair of a game with constant value."""
    F = build_operator(g)
    smin, smax = {0: tuple(sigma)}, {1: tuple(tau)}
    if not certify_saddle(F, smin, smax):
        raise OracleError("strategy pair is not Blackwell optimal")
    c = chain_model(g, sigma, tau)
    gain, h = chains.gain_and_bias(c.T, c.r)
    if len(set(gain)) != 1:
        raise OracleError("value is not constant: no bias")
    return gain[0], h


def bias_seminorm(sol: OracleSolution) -> Fraction | None:
    return None if sol.blackwell_bias is None else hilbert_seminorm(sol.blackwell_bias)


# -- invariant half-lines -----------------------------------------------------

@total_ordering
class Ray:
    """``offset + β·slope`` as ``β → ∞``; compared lexicographically by (slope, offset)."""

    __slots__ = ("slope", "offset")

    def __init__(self, slope, offset):
        self.slope = slope
        self.offset = offset

    def _key(self):
        return (self.slope, self.offset)

    def __eq__(self, other):
        return isinstance(other, Ray) and self._key() == other._key()

    def __lt__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def __add__(self, other):
        if isinstance(other, Ray):
            return Ray(self.slope + other.slope, self.offset + other.offset)
        return Ray(self.slope, self.offset + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Ray):
            return Ray(self.slope - other.slope, self.offset - other.offset)
        return Ray(self.slope, self.offset - other)

    def __rsub__(self, other):
        return Ray(-self.slope, other - self.offset)

    def __mul__(self, c):
        return Ray(c * self.slope, c * self.offset)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Ray({self.slope}, {self.offset})"


def verify_invariant_halfline(F: ShapleyOperator, z: Sequence, w: Sequence) -> bool:
    """True iff ``F(z + βw) = z + (β + 1)w`` for all large enough ``β``.

    ``F`` is piecewise affine, so along the ray it is eventually affine in
    ``β``.  Evaluating it on (slope, offset) pairs ordered lexicographically
    yields that eventual affine piece exactly, which settles both the identity
    and the stability of the cell containing the tail of the half-line.
    """
    z = [Fraction(v) for v in z]
    w = [Fraction(v) for v in w]
    if len(z) != F.in_dim or len(w) != F.in_dim:
        raise ValueError("dimension mismatch")
    out = apply(F, tuple(Ray(wj, zj) for zj, wj in zip(z, w)))
    return all(isinstance(o, Ray) and o.slope == wj and o.offset == zj + wj for o, zj, wj in zip(out, z, w))
