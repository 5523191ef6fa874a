"""Exact max-plus / min-plus scalars, matrices and Hilbert-seminorm utilities.

Finite entries are :class:`fractions.Fraction`.  The tropical zero is the
float ``-inf`` and the top of the completed min-plus semiring is ``+inf``;
Python compares both against ``Fraction`` correctly, so vectors may mix them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

NEG_INF = float("-inf")
POS_INF = float("inf")

Scalar = Union[Fraction, float]
Vector = tuple


def is_finite(a) -> bool:
    return not (isinstance(a, float) and (a == NEG_INF or a == POS_INF))


def scalar(x) -> Scalar:
    """Coerce ``x`` to a tropical scalar; ``None`` is the tropical zero."""
    if x is None:
        return NEG_INF
    if isinstance(x, float):
        if x == NEG_INF or x == POS_INF:
            return x
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("-inf", "null", "none", "-oo"):
            return NEG_INF
        if s in ("inf", "+inf", "oo", "+oo"):
            return POS_INF
        return Fraction(s)
    return Fraction(x)


def vector(xs: Iterable) -> Vector:
    return tuple(scalar(x) for x in xs)


def ext_add(a: Scalar, b: Scalar) -> Scalar:
    """Multiplication of the completed min-plus semiring: ``(-inf) + (+inf) = +inf``."""
    if a == POS_INF or b == POS_INF:
        return POS_INF
    return a + b


@dataclass(frozen=True)
class TropMatrix:
    """Dense matrix over the max-plus semifield (entries ``Fraction`` or ``-inf``)."""

    rows: tuple

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "TropMatrix":
        return cls(tuple(tuple(scalar(a) for a in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "TropMatrix":
        return cls(tuple(tuple(Fraction(0) if i == j else NEG_INF for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def T(self) -> "TropMatrix":
        return TropMatrix(tuple(zip(*self.rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def support(self, i: int) -> list[int]:
        """Column indices of the finite entries of row ``i``."""
        return [j for j, a in enumerate(self.rows[i]) if a != NEG_INF]

    def map_finite(self, fn) -> "TropMatrix":
        return TropMatrix(tuple(tuple(a if a == NEG_INF else fn(a) for a in r) for r in self.rows))

    def finite_entries(self):
        return [a for r in self.rows for a in r if a != NEG_INF]

    def to_lists(self):
        return [[None if a == NEG_INF else a for a in r] for r in self.rows]


def maxplus_matvec(A: TropMatrix, x: Sequence) -> Vector:
    """``(A ⊙ x)_i = max_j (A_ij + x_j)``; tropical-zero entries of ``A`` contribute nothing."""
    m, n = A.shape
    if len(x) != n:
        raise ValueError(f"dimension mismatch: matrix has {n} columns, vector has {len(x)} entries")
    out = []
    for row in A.rows:
        best = NEG_INF
        for a, xj in zip(row, x):
            if a == NEG_INF or xj == NEG_INF:
                continue
            v = a + xj
            if best == NEG_INF or v > best:
                best = v
        out.append(best)
    return tuple(out)


def adjoint_apply(A: TropMatrix, y: Sequence) -> Vector:
    """Residuated map ``A♯(y)_j = min_i (y_i - A_ij)`` over finite ``A_ij``.

    An empty minimum yields ``+inf``.  Skipping the tropical-zero entries is the
    same as using the convention ``(+inf) + (-inf) = +inf`` of the completed
    min-plus semiring, since those terms are ``+inf`` and never win the min.
    """
    m, n = A.shape
    if len(y) != m:
        raise ValueError(f"dimension mismatch: matrix has {m} rows, vector has {len(y)} entries")
    out = []
    for j in range(n):
        best = POS_INF
        for i in range(m):
            a = A.rows[i][j]
            if a == NEG_INF:
                continue
            yi = y[i]
            if yi == POS_INF:
                continue
            v = NEG_INF if yi == NEG_INF else yi - a
            if best == POS_INF or v < best:
                best = v
        out.append(best)
    return tuple(out)


def stochastic_matvec(P: Sequence[Sequence[Fraction]], x: Sequence) -> Vector:
    """Ordinary product ``P x`` restricted to positive entries of ``P``.

    A tropical-zero coordinate reached with positive probability makes the
    whole entry the tropical zero.
    """
    out = []
    for row in P:
        if len(row) != len(x):
            raise ValueError("dimension mismatch in stochastic layer")
        acc = None
        bottom = top = False
        for p, xl in zip(row, x):
            if not p:
                continue
            if xl == NEG_INF:
                bottom = True
            elif xl == POS_INF:
                top = True
            else:
                term = p * xl
                acc = term if acc is None else acc + term
        if bottom and top:
            raise ValueError("stochastic layer received both -inf and +inf")
        out.append(NEG_INF if bottom else POS_INF if top else acc)
    return tuple(out)


@dataclass(frozen=True)
class HilbertStats:
    top: Fraction
    bottom: Fraction

    @property
    def seminorm(self) -> Fraction:
        return self.top - self.bottom


def top(x: Sequence) -> Scalar:
    return max(x)


def bottom(x: Sequence) -> Scalar:
    return min(x)


def hilbert_stats(x: Sequence) -> HilbertStats:
    if not x:
        raise ValueError("empty vector")
    if any(not is_finite(a) for a in x):
        raise ValueError("Hilbert seminorm needs finite entries")
    return HilbertStats(max(x), min(x))


def hilbert_seminorm(x: Sequence) -> Fraction:
    return hilbert_stats(x).seminorm


def hilbert_ball_contains(z: Sequence, r, x: Sequence) -> bool:
    """True iff ``x`` lies in the Hilbert ball of center ``z`` and radius ``r``."""
    if len(z) != len(x):
        raise ValueError("dimension mismatch")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return hilbert_seminorm([a - b for a, b in zip(x, z)]) <= r


def leq(x: Sequence, y: Sequence) -> bool:
    """Entrywise order."""
    return all(a <= b for a, b in zip(x, y))


def add_scalar(alpha, x: Sequence) -> Vector:
    return tuple(a if a == NEG_INF or a == POS_INF else alpha + a for a in x)


def sup_norm(x: Sequence) -> Fraction:
    return max(abs(a) for a in x)
