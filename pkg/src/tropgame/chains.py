"""Exact analysis of finite Markov chains with rational transition matrices."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Sequence

import networkx as nx

from . import linalg


class ReducibleChain(ValueError):
    pass


def support_graph(T) -> nx.DiGraph:
    G = nx.DiGraph()
    n = len(T)
    G.add_nodes_from(range(n))
    G.add_edges_from((i, j) for i in range(n) for j in range(n) if T[i][j])
    return G


def recurrent_classes(T) -> list[list[int]]:
    """Closed communicating classes, each sorted, ordered by smallest member."""
    C = nx.condensation(support_graph(T))
    closed = [sorted(C.nodes[c]["members"]) for c in C.nodes if C.out_degree(c) == 0]
    return sorted(closed)


def is_irreducible(T) -> bool:
    return nx.is_strongly_connected(support_graph(T))


def _class_stationary(T, cls: list[int]) -> list[Fraction]:
    s = len(cls)
    rows = []
    for jj in range(s - 1):
        j = cls[jj]
        rows.append([Fraction(T[i][j]) - (1 if i == j else 0) for i in cls])
    rows.append([Fraction(1)] * s)
    pi, _ = linalg.solve(rows, [Fraction(0)] * (s - 1) + [Fraction(1)])
    return pi


def lcm_denominator(xs) -> int:
    return reduce(math.lcm, (Fraction(x).denominator for x in xs), 1)


def stationary_distribution(T) -> tuple[list[Fraction], int]:
    """Invariant probability of an irreducible chain and the lcm of its denominators."""
    if not is_irreducible(T):
        raise ReducibleChain("chain is not irreducible")
    pi = _class_stationary(T, list(range(len(T))))
    return pi, lcm_denominator(pi)


def cesaro_limit(T) -> list[list[Fraction]]:
    """``T° = lim (1/N) Σ_{p<N} T^p`` from the recurrent-class decomposition."""
    n = len(T)
    classes = recurrent_classes(T)
    recurrent = {j for c in classes for j in c}
    transient = [j for j in range(n) if j not in recurrent]
    Tstar = [[Fraction(0)] * n for _ in range(n)]
    pis = []
    for c in classes:
        pi = _class_stationary(T, c)
        pis.append(pi)
        for j in c:
            for l, p in zip(c, pi):
                Tstar[j][l] = p
    if transient:
        idx = {j: a for a, j in enumerate(transient)}
        I_minus_Q = [[Fraction(int(a == b)) - Fraction(T[i][jj]) for b, jj in enumerate(transient)]
                     for a, i in enumerate(transient)]
        for c, pi in zip(classes, pis):
            rhs = [sum((Fraction(T[i][l]) for l in c), Fraction(0)) for i in transient]
            absorb, _ = linalg.solve(I_minus_Q, rhs)
            for i in transient:
                x = absorb[idx[i]]
                if x:
                    for l, p in zip(c, pi):
                        Tstar[i][l] += x * p
    return Tstar


def average_reward(T, r: Sequence) -> list[Fraction]:
    """Exact long-run average reward ``T° r`` from every start state."""
    return linalg.matvec(cesaro_limit(T), r)


def deviation_matrix(T) -> list[list[Fraction]]:
    """``D = (I - T + T°)^{-1} (I - T°)``."""
    n = len(T)
    Ts = cesaro_limit(T)
    I = linalg.identity(n)
    Z = [[I[i][j] - Fraction(T[i][j]) + Ts[i][j] for j in range(n)] for i in range(n)]
    cols = [[I[i][j] - Ts[i][j] for i in range(n)] for j in range(n)]
    Dcols = linalg.solve_many(Z, cols)
    return [[Dcols[j][i] for j in range(n)] for i in range(n)]


def gain_and_bias(T, r: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """``(T° r, D r)``: long-run average and the bias of the deviation matrix."""
    n = len(T)
    Ts = cesaro_limit(T)
    g = linalg.matvec(Ts, r)
    Z = [[Fraction(int(i == j)) - Fraction(T[i][j]) + Ts[i][j] for j in range(n)] for i in range(n)]
    rhs = [Fraction(r[i]) - g[i] for i in range(n)]
    h, _ = linalg.solve(Z, rhs)
    return g, h


def cesaro_average(T, r: Sequence, N: int) -> list[Fraction]:
    """``(1/N) Σ_{p<N} T^p r`` by exact repeated multiplication."""
    x = [Fraction(v) for v in r]
    acc = list(x)
    for _ in range(N - 1):
        x = linalg.matvec(T, x)
        acc = [a + b for a, b in zip(acc, x)]
    return [a / N for a in acc]
