import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropgame.chains import (ReducibleChain, average_reward, cesaro_average, cesaro_limit, deviation_matrix,
                             gain_and_bias, is_irreducible, recurrent_classes, stationary_distribution)
from tropgame.game import nondeterministic_rows, random_distribution
from tropgame.linalg import matmul

H = Fraction(1, 2)


def test_uniform_chain():
    pi, lcm = stationary_distribution([[H, H], [H, H]])
    assert pi == [H, H] and lcm == 2


def test_deterministic_two_cycle():
    pi, lcm = stationary_distribution([[0, 1], [1, 0]])
    assert pi == [H, H] and lcm == 2


def test_lopsided_chain():
    pi, lcm = stationary_distribution([[0, 1], [H, H]])
    assert pi == [Fraction(1, 3), Fraction(2, 3)] and lcm == 3


def test_reducible_rejected():
    with pytest.raises(ReducibleChain):
        stationary_distribution([[1, 0], [0, 1]])


def test_recurrent_classes_and_transients():
    T = [[0, H, H], [0, 1, 0], [0, 0, 1]]
    assert recurrent_classes(T) == [[1], [2]]
    assert not is_irreducible(T)
    assert average_reward(T, [10, 4, -2]) == [1, 4, -2]


def test_cycle_mean():
    assert average_reward([[0, 1], [1, 0]], [3, -1]) == [1, 1]


def test_absorbing_reward():
    T = [[0, 1, 0], [0, 0, 1], [0, 0, 1]]
    assert average_reward(T, [5, 6, 7]) == [7, 7, 7]


def random_chain(rng, n, M):
    return [list(random_distribution(rng, n, M)) for _ in range(n)]


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_cesaro_and_deviation_identities(n, M, seed):
    rng = random.Random(seed)
    T = random_chain(rng, n, M)
    Ts = cesaro_limit(T)
    assert matmul(T, Ts) == Ts == matmul(Ts, T)
    assert matmul(Ts, Ts) == Ts
    D = deviation_matrix(T)
    assert matmul(Ts, D) == [[0] * n for _ in range(n)]
    r = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
    g, h = gain_and_bias(T, r)
    # g + h = r + T h, the average-reward evaluation equations
    Th = [sum(p * x for p, x in zip(row, h)) for row in T]
    assert [a + b for a, b in zip(g, h)] == [a + b for a, b in zip(r, Th)]


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_cesaro_simulation_converges(n, M, seed):
    rng = random.Random(seed)
    T = random_chain(rng, n, M)
    r = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
    g, h = gain_and_bias(T, r)
    # (1/N) sum_{p<N} T^p r = g + (h - T^N h)/N, so the error is at most 2 max|h| / N
    C = 2 * max(abs(x) for x in h)
    for N in (2 ** 8, 2 ** 10):
        avg = cesaro_average(T, r, N)
        assert max(abs(a - b) for a, b in zip(avg, g)) <= C / N


@settings(max_examples=100)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_denominator_lemma(n, M, seed):
    T = random_chain(random.Random(seed), n, M)
    if not is_irreducible(T):
        return
    pi, lcm = stationary_distribution(T)
    assert all(p > 0 for p in pi) and sum(pi) == 1
    assert lcm <= n * M ** min(nondeterministic_rows(T), n - 1)
