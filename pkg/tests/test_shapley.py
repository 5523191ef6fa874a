from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import BALL_EXAMPLE, G2, N, translation
from tropgame.game import StochasticGame, generate_random_game
from tropgame.oracle import solve_operator
from tropgame.shapley import (Adjoint, MaxPlus, ShapleyOperator, Stochastic, apply, apply_approx, apply_float,
                              build_operator, conjugate, dependence_sets, recession, shift,
                              structurally_diagonal_free)
from tropgame.tropical import NEG_INF, TropMatrix, leq, sup_norm

F2 = build_operator(G2)


def v(*xs):
    return tuple(Fraction(x) for x in xs)


def g2_formula(x):
    s = (x[0] + x[1]) / 2
    return (s + 2, s - 1)


class TestApply:
    def test_g2(self):
        assert apply(F2, v(0, 0)) == v(2, -1)
        assert apply(F2, v(3, 0)) == v("7/2", "1/2")

    @given(st.tuples(st.fractions(-9, 9), st.fractions(-9, 9)))
    def test_g2_closed_form(self, x):
        assert apply(F2, x) == g2_formula(x)

    def test_translation(self):
        F = build_operator(translation(5))
        assert apply(F, v(-2)) == v(3)

    def test_ball_example(self):
        F = build_operator(BALL_EXAMPLE)
        assert apply(F, v(0, 3, 0)) == v(3, 3, 3)
        assert apply(F, v(4, 1, 2)) == v(3, 3, 3)

    def test_bottom_propagates(self):
        assert apply(F2, (Fraction(0), NEG_INF)) == (NEG_INF, NEG_INF)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply(F2, v(1, 2, 3))

    def test_incompatible_layers(self):
        with pytest.raises(ValueError):
            ShapleyOperator((MaxPlus(TropMatrix.identity(2)), Stochastic(((Fraction(1),),))))

    def test_float_evaluation(self):
        assert apply_float(F2, [3.0, 0.0]) == (3.5, 0.5)


class TestApprox:
    def test_zero_budget_is_exact(self):
        assert apply_approx(F2, v("1/3", 0), 0) == apply(F2, v("1/3", 0))

    def test_within_budget(self):
        out = apply_approx(F2, v(0, 0), Fraction(1, 100))
        assert all(abs(a - b) <= Fraction(1, 100) for a, b in zip(out, v(2, -1)))

    def test_rounding_error_within_budget(self):
        x = v("1/3", "1/7")
        eps = Fraction(1, 10 ** 12)
        out = apply_approx(F2, x, eps)
        assert sup_norm([a - b for a, b in zip(out, apply(F2, x))]) <= eps

    @given(st.lists(st.fractions(-1, 1), min_size=2, max_size=2))
    def test_adversarial(self, noise):
        eps = Fraction(1, 10)
        out = apply_approx(F2, v(1, 1), eps, noise)
        assert sup_norm([a - b for a, b in zip(out, apply(F2, v(1, 1)))]) <= eps

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            apply_approx(F2, v(0, 0), -1)
        with pytest.raises(ValueError):
            apply_approx(F2, v(0, 0), 1, [2, 0])


class TestConjugates:
    def test_g2_dual(self):
        Fs = conjugate(F2, "dual")
        for y in (v(0, 0), v(4, -2), v("1/3", 5)):
            s = (y[0] + y[1]) / 2
            assert apply(Fs, y) == (s - 2, s + 1)

    def test_dual_needs_row_finite_a(self):
        g = StochasticGame.from_lists([[0], [N]], [[1], [2]], [[1]])
        with pytest.raises(ValueError):
            conjugate(build_operator(g), "dual")

    def test_swap_translation(self):
        F = conjugate(build_operator(translation(3)), "swap")
        assert apply(F, v(10)) == v(7)

    def test_cyclic_acts_on_max_states(self):
        g = generate_random_game(2, 3, 2, seed=1)
        assert conjugate(build_operator(g), "cyclic").in_dim == 3

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            conjugate(F2, "mirror")


def games():
    return st.builds(lambda n, m, q, M, d, s: generate_random_game(n, m, q, M=M, W_max=6, density=d, seed=s),
                     st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 3),
                     st.sampled_from([0.4, 0.7, 1.0]), st.integers(0, 10 ** 6))


def vecs(n, lo=-10, hi=10):
    return st.lists(st.fractions(lo, hi, max_denominator=5), min_size=n, max_size=n).map(tuple)


@settings(max_examples=80)
@given(games(), st.data())
def test_operator_properties(g, data):
    F = build_operator(g)
    x = data.draw(vecs(g.n))
    y = data.draw(vecs(g.n))
    d = data.draw(vecs(g.n, 0, 4))
    alpha = data.draw(st.fractions(-5, 5, max_denominator=7))
    xd = tuple(a + b for a, b in zip(x, d))
    Fx, Fy = apply(F, x), apply(F, y)
    assert leq(Fx, apply(F, xd))                                              # order-preserving
    assert apply(F, tuple(alpha + a for a in x)) == tuple(alpha + a for a in Fx)  # homogeneous
    assert sup_norm([a - b for a, b in zip(Fx, Fy)]) <= sup_norm([a - b for a, b in zip(x, y)])
    swap = conjugate(F, "swap")
    assert apply(swap, x) == tuple(-a for a in apply(F, tuple(-a for a in x)))
    assert apply(conjugate(swap, "swap"), x) == Fx


@settings(max_examples=40)
@given(games(), st.data())
def test_recession_is_the_limit(g, data):
    F = build_operator(g)
    x = data.draw(vecs(g.n))
    s = Fraction(10 ** 6)
    R = apply(recession(F), x)
    scaled = apply(F, tuple(s * a for a in x))
    bound = (2 * 6 + 1) / s      # payments are at most 6 in absolute value
    assert all(abs(a / s - b) <= bound for a, b in zip(scaled, R))
    # recession of the pipeline is the pipeline of layer recessions
    layers = [recession(ShapleyOperator((L,))).layers[0] for L in F.layers]
    assert apply(ShapleyOperator(tuple(layers)), x) == R


def test_recession_examples():
    F = recession(build_operator(BALL_EXAMPLE))
    assert apply(F, v(1, -2, 5)) == v(5, 5, 5)
    assert apply(recession(build_operator(translation(9))), v(4)) == v(4)
    x = v(3, -1)
    assert apply(recession(F2), x) == v(1, 1)


def test_shift_adds_vector():
    F = shift(F2, v(1, -1))
    assert apply(F, v(0, 0)) == v(3, -2)


def test_escape_rate_transfer():
    """chi(A# o H) is the recession of the Min layer applied to chi(H o A#)."""
    for seed in range(25):
        g = generate_random_game(3, 3, 3, M=2, density=0.6, seed=seed)
        F = build_operator(g)
        chi = solve_operator(F).chi
        chi_cyc = solve_operator(conjugate(F, "cyclic")).chi
        G_hat = recession(ShapleyOperator(F.layers[:1]))
        assert list(apply(G_hat, tuple(chi_cyc))) == list(chi)


class TestDependence:
    def test_g2_depends_on_itself(self):
        assert dependence_sets(F2) == [{0, 1}, {0, 1}]
        assert not structurally_diagonal_free(F2)

    def test_translation(self):
        assert not structurally_diagonal_free(build_operator(translation(1)))

    def test_swap_of_states(self):
        g = StochasticGame.from_lists([[0, N], [N, 0]], [[1, N], [N, 2]], [[0, 1], [1, 0]])
        assert structurally_diagonal_free(build_operator(g))
