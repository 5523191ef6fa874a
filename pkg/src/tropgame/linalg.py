"""Small exact linear algebra over ``Fraction`` and univariate polynomial helpers.

Matrices here are at most a handful of rows, so plain Gauss-Jordan on lists of
Fractions beats converting to a CAS.  Polynomials are coefficient lists in
increasing degree.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence


class SingularMatrix(ArithmeticError):
    pass


def solve(M: Sequence[Sequence], b: Sequence) -> tuple[list, Fraction]:
    """Solve ``M x = b`` exactly; returns ``(x, det(M))``."""
    n = len(M)
    a = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(M, b)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det *= p
        row_c = a[c]
        inv = 1 / p
        for k in range(c, n + 1):
            row_c[k] *= inv
        for r in range(n):
            if r == c:
                continue
            f = a[r][c]
            if f:
                row_r = a[r]
                for k in range(c, n + 1):
                    row_r[k] -= f * row_c[k]
    return [a[r][n] for r in range(n)], det


def bareiss_solve(K: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[list, int]:
    """Solve an integer system with fraction-free elimination; returns ``(x, det(K))``."""
    n = len(K)
    a = [list(row) + [bi] for row, bi in zip(K, b)]
    sign, prev = 1, 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        pc = a[c][c]
        row_c = a[c]
        for r in range(c + 1, n):
            row_r = a[r]
            f = row_r[c]
            for k in range(c + 1, n + 1):
                row_r[k] = (pc * row_r[k] - f * row_c[k]) // prev
            row_r[c] = 0
        prev = pc
    det = sign * a[n - 1][n - 1]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = Fraction(a[r][n]) - sum((a[r][k] * x[k] for k in range(r + 1, n)), Fraction(0))
        x[r] = acc / a[r][r]
    return x, det


def solve_many(M: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    """Solve ``M X = B`` column by column (``B`` given as a list of columns)."""
    return [solve(M, col)[0] for col in B]


def matmul(A, B):
    return [[sum((a * B[k][j] for k, a in enumerate(row) if a), Fraction(0)) for j in range(len(B[0]))] for row in A]


def matvec(A, x):
    return [sum((a * xj for a, xj in zip(row, x) if a), Fraction(0)) for row in A]


def identity(n: int):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


# -- polynomials ------------------------------------------------------------

def ptrim(p: list) -> list:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def padd(p, q):
    n = max(len(p), len(q))
    return ptrim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def psub(p, q):
    return padd(p, [-c for c in q])


def pscale(c, p):
    return ptrim([c * a for a in p])


def pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return ptrim(out)


def pshift(p):
    """Multiply by the variable."""
    return [Fraction(0)] + list(p) if p else []


def order(p) -> int | None:
    """Index of the lowest nonzero coefficient (``None`` for the zero polynomial)."""
    for i, c in enumerate(p):
        if c:
            return i
    return None


def sign_at_zero_plus(p) -> int:
    """Sign of ``p(e)`` for all sufficiently small ``e > 0``."""
    i = order(p)
    if i is None:
        return 0
    return 1 if p[i] > 0 else -1


@lru_cache(maxsize=None)
def _vandermonde_inverse(xs: tuple) -> tuple:
    n = len(xs)
    V = [[x ** k for k in range(n)] for x in xs]
    cols = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    inv_cols = solve_many(V, cols)
    return tuple(tuple(inv_cols[j][i] for j in range(n)) for i in range(n))


def interpolate_fixed(xs: tuple, ys: Sequence) -> list:
    """Same as :func:`interpolate` with a cached inverse Vandermonde matrix for ``xs``."""
    Vinv = _vandermonde_inverse(tuple(xs))
    return ptrim([sum((c * y for c, y in zip(row, ys) if c and y), Fraction(0)) for row in Vinv])


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list:
    """Coefficients of the unique polynomial of degree < len(xs) through the points."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    # Newton divided differences
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly: list = [coef[-1]]
    for i in range(n - 2, -1, -1):
        poly = padd(pmul(poly, [-xs[i], Fraction(1)]), [coef[i]])
    return ptrim(poly)


def series_quotient(num, den, terms: int) -> list:
    """First ``terms`` power-series coefficients of ``num / den`` with ``den[0] != 0``."""
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator must have a nonzero constant term")
    out = []
    rem = list(num) + [Fraction(0)] * terms
    for k in range(terms):
        c = rem[k] / den[0]
        out.append(c)
        if c:
            for j, d in enumerate(den):
                if k + j < len(rem):
                    rem[k + j] -= c * d
    return out
