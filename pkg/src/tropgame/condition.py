"""Collatz–Wielandt numbers, condition numbers, feasibility and the duality report.

``cw̄(F)`` is the largest state value and ``cw̲(F)`` the smallest.  The exact
values come from the oracle; :func:`collatz_wielandt_approx` brackets them
from iterates alone.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .game import StochasticGame, game_stats, require_valid, validate_game
from .oracle import DEFAULT_BUDGET, OracleError, OracleSolution, bias_seminorm, solve_operator
from .shapley import (ShapleyOperator, apply, build_operator, conjugate, dependence_sets,
                      structurally_diagonal_free)
from .tropical import NEG_INF, POS_INF, bottom, top


def _inv_abs(x: Fraction):
    return POS_INF if x == 0 else 1 / abs(Fraction(x))


# -- Collatz–Wielandt numbers ----------------------------------------------

@dataclass(frozen=True)
class CWApprox:
    k: int
    top_avg: Fraction         # t(F^k(0)) / k
    bottom_avg: Fraction      # b(F^k(0)) / k
    upper: Fraction           # min over steps of t(F^{j+1}(0) - F^j(0)) >= cw_upper
    lower: Fraction           # max over steps of b(F^{j+1}(0) - F^j(0)) <= cw_lower


def collatz_wielandt_approx(F: ShapleyOperator, k_max: int) -> CWApprox:
    """Averages ``t(F^k(0))/k``, ``b(F^k(0))/k`` and an outer bracket ``lower ≤ cw̲ ≤ cw̄ ≤ upper``.

    Any finite ``x`` gives ``b(F(x) - x) ≤ cw̲`` and ``t(F(x) - x) ≥ cw̄``, so
    the increments of the orbit of ``0`` bracket the pair from outside.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    u = tuple(Fraction(0) for _ in range(F.in_dim))
    upper, lower = POS_INF, NEG_INF
    avg = None
    for k in range(1, k_max + 2):
        nxt = apply(F, u)
        d = [a - b for a, b in zip(nxt, u)]
        upper, lower = min(upper, top(d)), max(lower, bottom(d))
        u = nxt
        if k == k_max:
            avg = (top(u) / k, bottom(u) / k)
    return CWApprox(k_max, avg[0], avg[1], upper, lower)


def collatz_wielandt_exact(F: ShapleyOperator, budget: int = DEFAULT_BUDGET,
                           sol: OracleSolution | None = None) -> tuple[Fraction, Fraction]:
    """``(cw̄, cw̲) = (max χ, min χ)``."""
    sol = sol or solve_operator(F, budget)
    return sol.cw_upper, sol.cw_lower


# -- certificates ------------------------------------------------------------

def check_certificate(F: ShapleyOperator, z: Sequence, mu) -> bool:
    """``z ≠ 𝟘`` and ``F(z) ≥ μ + z`` entrywise (``z`` may contain ``-inf``)."""
    if len(z) != F.in_dim:
        raise ValueError("dimension mismatch")
    if all(v == NEG_INF for v in z):
        return False
    Fz = apply(F, tuple(z))
    return all(a >= mu + b for a, b in zip(Fz, z))


def halfline_point(F: ShapleyOperator, sol: OracleSolution, max_doublings: int = 64) -> tuple:
    """A finite ``z = h + Kχ`` with ``F(z) = z + χ``, so ``b(F(z) - z) = cw̲`` exactly."""
    chi, h = sol.chi, sol.offset
    K = 0
    for _ in range(max_doublings):
        z = tuple(hj + K * cj for hj, cj in zip(h, chi))
        if tuple(apply(F, z)) == tuple(a + c for a, c in zip(z, chi)):
            return z
        K = 2 * K if K else 1
    raise OracleError("no point of the invariant half-line found")


def top_class_certificate(F: ShapleyOperator, sol: OracleSolution) -> tuple:
    """Offset restricted to the states of largest value, ``-inf`` elsewhere: ``F(z) ≥ cw̄ + z``."""
    cmax = sol.cw_upper
    return tuple(hj if cj == cmax else NEG_INF for hj, cj in zip(sol.offset, sol.chi))


@dataclass
class FeasibilityReport:
    cw_upper: Fraction
    cw_lower: Fraction
    P_feasible: bool
    PR_feasible: bool
    certificate_z: Optional[tuple] = None
    certificate_mu: Optional[Fraction] = None
    real_certificate_z: Optional[tuple] = None
    real_certificate_mu: Optional[Fraction] = None
    verified: bool = True


def feasibility_status(F: ShapleyOperator, sol: OracleSolution | None = None,
                       budget: int = DEFAULT_BUDGET) -> FeasibilityReport:
    """``𝒫(F)`` is feasible iff ``cw̄ ≥ 0``; ``𝒫_ℝ(F)`` iff ``cw̲ > 0``.

    Certificates are re-checked with :func:`check_certificate`: for ``𝒫`` a
    vector in ``𝕋^n`` with ``F(z) ≥ cw̄ + z``, for ``𝒫_ℝ`` a finite vector with
    ``F(z) ≥ cw̲ + z``.
    """
    sol = sol or solve_operator(F, budget)
    rep = FeasibilityReport(sol.cw_upper, sol.cw_lower, sol.cw_upper >= 0, sol.cw_lower > 0)
    if rep.P_feasible:
        z = top_class_certificate(F, sol)
        rep.certificate_z, rep.certificate_mu = z, sol.cw_upper
        rep.verified &= check_certificate(F, z, sol.cw_upper)
    if rep.PR_feasible:
        z = halfline_point(F, sol)
        rep.real_certificate_z, rep.real_certificate_mu = z, sol.cw_lower
        rep.verified &= check_certificate(F, z, sol.cw_lower)
    if not rep.verified:
        raise OracleError("feasibility certificate failed its recheck")
    return rep


# -- inner radius ----------------------------------------------------------------

def probe_diagonal_dependence(F: ShapleyOperator, trials: int = 20, seed: int = 0,
                              span: int = 10) -> list[bool]:
    """``found[i]`` is True if some probe changed ``F_i`` by moving only ``x_i``."""
    rng = random.Random(seed)
    n = F.in_dim
    found = [False] * n
    for _ in range(trials):
        x = [Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(n)]
        base = apply(F, tuple(x))
        for i in range(n):
            for delta in (Fraction(-3 * span), Fraction(-1, 2), Fraction(1, 2), Fraction(3 * span)):
                y = list(x)
                y[i] += delta
                if apply(F, tuple(y))[i] != base[i]:
                    found[i] = True
    return found


@dataclass
class InnerRadius:
    radius: Fraction
    witness_center: tuple
    diagonal_free: bool
    probe_found_dependence: list = field(default_factory=list)

    @property
    def radius_certified(self) -> bool:
        """The radius is the supremum of feasible ball radii only for diagonal-free maps."""
        return self.diagonal_free


def inner_radius(F: ShapleyOperator, sol: OracleSolution | None = None,
                 budget: int = DEFAULT_BUDGET, probes: int = 20) -> InnerRadius:
    """``max(0, cw̲)`` with a center ``z`` satisfying ``b(F(z) - z) = cw̲``.

    Every ball ``B_H(z, r)`` with ``r ≤ b(F(z) - z)`` lies in
    ``𝒮(F) = {x : x ≤ F(x)}``; for diagonal-free maps no larger radius fits.
    """
    sol = sol or solve_operator(F, budget)
    z = halfline_point(F, sol)
    structural = structurally_diagonal_free(F)
    probe = probe_diagonal_dependence(F, probes)
    if structural and any(probe):
        raise AssertionError("probe found a dependence the structural analysis ruled out")
    return InnerRadius(max(Fraction(0), sol.cw_lower), z, structural, probe)


def outside_point(F: ShapleyOperator, z: Sequence, r) -> Optional[tuple]:
    """For a diagonal-free ``F`` and ``r > b(F(z) - z)``: a point of ``B_H(z, r)`` outside ``𝒮(F)``.

    Raising the coordinate ``i`` where ``F(z) - z`` is smallest by ``r`` leaves
    ``F_i`` unchanged, so ``x_i > F_i(x)``.
    """
    d = [a - b for a, b in zip(apply(F, tuple(z)), z)]
    i = min(range(len(d)), key=lambda j: d[j])
    x = list(z)
    x[i] += Fraction(r)
    x = tuple(x)
    Fx = apply(F, x)
    return x if any(a > b for a, b in zip(x, Fx)) else None


# -- condition numbers -------------------------------------------------------------

@dataclass
class ConditionReport:
    cw_upper: Fraction
    cw_lower: Fraction
    approx: CWApprox
    cond: object                  # Fraction or +inf
    cond_R: object
    rho: Optional[Fraction]
    bias_seminorm: Optional[Fraction]
    inner_radius: Fraction
    witness_center: tuple
    diagonal_free: bool
    bound_cond: int
    bound_R_det: Optional[Fraction]


def condition_numbers(g: StochasticGame, budget: int = DEFAULT_BUDGET, k_approx: int = 32,
                      sol: OracleSolution | None = None) -> ConditionReport:
    """``cond = |cw̄|⁻¹`` and ``cond_ℝ = |cw̲|⁻¹`` with ``0⁻¹ = +∞``, plus the closed-form bounds."""
    require_valid(g)
    F = build_operator(g)
    sol = sol or solve_operator(F, budget)
    s = game_stats(g)
    ir = inner_radius(F, sol)
    bound_R = None
    if s.deterministic and sol.rho is not None:
        bound_R = (g.n - 1) * (abs(sol.rho) + s.W)
    return ConditionReport(
        cw_upper=sol.cw_upper, cw_lower=sol.cw_lower,
        approx=collatz_wielandt_approx(F, k_approx),
        cond=_inv_abs(sol.cw_upper), cond_R=_inv_abs(sol.cw_lower),
        rho=sol.rho, bias_seminorm=bias_seminorm(sol),
        inner_radius=ir.radius, witness_center=ir.witness_center, diagonal_free=ir.diagonal_free,
        bound_cond=g.n * s.M ** s.exponent, bound_R_det=bound_R,
    )


# -- duality -----------------------------------------------------------------------

@dataclass
class DualityItem:
    name: str
    passed: Optional[bool]
    detail: dict = field(default_factory=dict)


@dataclass
class DualityReport:
    hypotheses_met: bool
    reason: str = ""
    items: list = field(default_factory=list)
    primal: Optional[FeasibilityReport] = None
    dual: Optional[FeasibilityReport] = None

    @property
    def passed(self) -> bool:
        return self.hypotheses_met and all(it.passed for it in self.items)


def dual_operator(g: StochasticGame) -> ShapleyOperator:
    return conjugate(build_operator(g), "dual")


def duality_report(g: StochasticGame, budget: int = DEFAULT_BUDGET) -> DualityReport:
    """Checks (a) ``cw̄(F*) = -cw̲(F)``, (b) ``cond_ℝ(F) = cond(F*)``,
    (c) ``𝒫(F*)`` or ``𝒫_ℝ(F)`` is feasible, (d) ``𝒫_ℝ(F)`` and ``𝒫_ℝ(F*)`` are not both feasible."""
    v = validate_game(g)
    if not v.ok:
        return DualityReport(False, "; ".join(v.errors))
    if not v.a_rows_finite:
        return DualityReport(False, "some row of A has no finite entry")
    F = build_operator(g)
    Fs = conjugate(F, "dual")
    p = feasibility_status(F, budget=budget)
    d = feasibility_status(Fs, budget=budget)
    items = [
        DualityItem("a: cw_upper(F*) = -cw_lower(F)", d.cw_upper == -p.cw_lower,
                    {"cw_upper_dual": d.cw_upper, "cw_lower": p.cw_lower}),
        DualityItem("b: cond_R(F) = cond(F*)", _inv_abs(p.cw_lower) == _inv_abs(d.cw_upper),
                    {"cond_R": _inv_abs(p.cw_lower), "cond_dual": _inv_abs(d.cw_upper)}),
        DualityItem("c: P(F*) or P_R(F) feasible", d.P_feasible or p.PR_feasible,
                    {"P_dual": d.P_feasible, "PR_primal": p.PR_feasible,
                     "witness_z": d.certificate_z if d.P_feasible else p.real_certificate_z}),
        DualityItem("d: not both P_R(F) and P_R(F*) feasible", not (p.PR_feasible and d.PR_feasible),
                    {"PR_primal": p.PR_feasible, "PR_dual": d.PR_feasible}),
    ]
    return DualityReport(True, "", items, p, d)
