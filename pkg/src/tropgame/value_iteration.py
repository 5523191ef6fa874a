"""Value iteration as a decision procedure for the sign of the mean payoff.

``run_exact`` iterates ``u ← F(u)`` from ``u = 0`` while ``t(u) ≥ 0`` and
``b(u) ≤ 0``; leaving the loop through ``b(u) > 0`` means every state has a
positive value, leaving through ``t(u) < 0`` means every state has a negative
value.  ``run_finite_precision`` runs the same loop on an inexact evaluator and
widens both tests by ``ℓε``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .game import StochasticGame, game_stats, require_valid
from .oracle import OracleSolution, bias_seminorm
from .shapley import ShapleyOperator, apply, apply_approx, build_operator, shift
from .tropical import bottom, is_finite, top


class Winner(str, enum.Enum):
    MAX = "MaxWins"
    MIN = "MinWins"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class VIConfig:
    mode: str = "exact"
    epsilon: Fraction = Fraction(0)
    max_iters: int = 100_000

    def __post_init__(self):
        if self.mode not in ("exact", "finite_precision"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.mode == "finite_precision" and self.epsilon <= 0:
            raise ValueError("finite precision mode needs epsilon > 0")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass(frozen=True)
class BoundSet:
    """Iteration bounds; ``nits_bound`` is ``‖v*‖_H / |ρ|`` and needs oracle data."""
    total_bound: int
    perturbed_bound: int
    approx_bound: int
    det_bound: Optional[int] = None
    nits_bound: Optional[Fraction] = None

    @property
    def nits_iterations(self) -> Optional[int]:
        """Iteration budget implied by ``nits_bound``: its ceiling plus one."""
        return None if self.nits_bound is None else math.ceil(self.nits_bound) + 1


@dataclass
class VIReport:
    winner: Winner
    iterations: int
    final_u: tuple
    exit_condition: str
    epsilon: Fraction = Fraction(0)
    bounds: Optional[BoundSet] = None
    extra: dict = field(default_factory=dict)

    def recheck(self) -> bool:
        """Re-derive the verdict from ``final_u``, ``iterations`` and ``epsilon``."""
        slack = self.iterations * self.epsilon
        t, b = top(self.final_u), bottom(self.final_u)
        if self.winner is Winner.MAX:
            return -slack + b >= 0 if self.epsilon else b > 0
        if self.winner is Winner.MIN:
            return slack + t <= 0 if self.epsilon else t < 0
        return slack + t >= 0 and -slack + b <= 0


def _check_finite(u):
    if not all(is_finite(v) for v in u):
        raise ValueError("value iteration left the finite vectors; is the operator a valid game operator?")


def run_exact(F: ShapleyOperator, cfg: VIConfig = VIConfig()) -> VIReport:
    if not F.is_self_map:
        raise ValueError("value iteration needs a self-map")
    u = tuple(Fraction(0) for _ in range(F.in_dim))
    ell = 0
    while top(u) >= 0 and bottom(u) <= 0:
        if ell >= cfg.max_iters:
            return VIReport(Winner.INCONCLUSIVE, ell, u, "max_iters")
        u = apply(F, u)
        _check_finite(u)
        ell += 1
    if bottom(u) > 0:
        return VIReport(Winner.MAX, ell, u, "b(u) > 0")
    return VIReport(Winner.MIN, ell, u, "t(u) < 0")


Noise = Callable[[int, tuple], Sequence]


def run_finite_precision(F: ShapleyOperator, cfg: VIConfig, noise: Noise | None = None) -> VIReport:
    """Value iteration on an evaluator with sup-error at most ``cfg.epsilon`` per step.

    ``noise(step, exact_value)`` may return a vector in ``[-1, 1]^n`` that is
    scaled by ``epsilon`` and added to the exact value; without it the values
    are rounded to double precision.
    """
    if not F.is_self_map:
        raise ValueError("value iteration needs a self-map")
    eps = Fraction(cfg.epsilon)
    if eps <= 0:
        raise ValueError("finite precision mode needs epsilon > 0")
    u = tuple(Fraction(0) for _ in range(F.in_dim))
    ell = 0
    while ell * eps + top(u) >= 0 and -ell * eps + bottom(u) <= 0:
        if ell >= cfg.max_iters:
            return VIReport(Winner.INCONCLUSIVE, ell, u, "max_iters", eps)
        nz = None if noise is None else noise(ell, u)
        u = apply_approx(F, u, eps, nz)
        _check_finite(u)
        ell += 1
    if -ell * eps + bottom(u) >= 0:
        return VIReport(Winner.MAX, ell, u, "-l*eps + b(u) >= 0", eps)
    return VIReport(Winner.MIN, ell, u, "l*eps + t(u) <= 0", eps)


def perturbed_operator(g: StochasticGame) -> ShapleyOperator:
    """``1 + F_{2μ}``: payments scaled by ``2μ``, then a unit shift, so ``ρ = 1 + 2μρ(F)``."""
    mu = game_stats(g).mu
    G = build_operator(g.scaled(2 * mu))
    return shift(G, [Fraction(1)] * g.n)


def run_perturbed_rescaled(g: StochasticGame, cfg: VIConfig = VIConfig()) -> VIReport:
    """Exact value iteration on ``1 + F_{2μ}``.

    MaxWins means Max wins the original game (``ρ ≥ 0``); MinWins means Min
    wins it strictly.
    """
    require_valid(g)
    rep = run_exact(perturbed_operator(g), cfg)
    rep.bounds = predict_bounds(g)
    rep.extra["perturbed"] = True
    return rep


def predict_bounds(g: StochasticGame, oracle: OracleSolution | None = None) -> BoundSet:
    s = game_stats(g)
    n, W, M, e = g.n, s.W, s.M, s.exponent
    nits = None
    if oracle is not None and oracle.rho is not None and oracle.rho != 0:
        nits = bias_seminorm(oracle) / abs(oracle.rho)
    return BoundSet(
        total_bound=10 * n ** 3 * W * M ** (2 * e),
        perturbed_bound=21 * n ** 4 * W * M ** (3 * e),
        approx_bound=30 * n ** 3 * W * M ** (2 * e),
        det_bound=2 * n ** 2 * W if s.deterministic else None,
        nits_bound=nits,
    )


def default_epsilon(g: StochasticGame) -> Fraction:
    """``1/(3μ)``, the coarsest precision for which the verdict is guaranteed."""
    return Fraction(1, 3 * game_stats(g).mu)
