"""Shapley operators as pipelines of layers.

``ShapleyOperator((L0, L1, ..., Lp))`` is the composition ``L0 ∘ L1 ∘ ... ∘ Lp``,
so ``Lp`` sees the input first.  Game-wise the layer order is the order of
play: from an output state of ``L0`` the owner of ``L0`` moves first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .game import StochasticGame, require_valid
from .tropical import (NEG_INF, POS_INF, TropMatrix, adjoint_apply, maxplus_matvec,
                       stochastic_matvec)


@dataclass(frozen=True)
class Adjoint:
    """Min layer ``y ↦ A♯(y)``: output ``j`` picks ``i`` with ``A_ij`` finite and pays ``-A_ij``."""
    A: TropMatrix

    @property
    def in_dim(self):
        return self.A.shape[0]

    @property
    def out_dim(self):
        return self.A.shape[1]

    def apply(self, y):
        return adjoint_apply(self.A, y)

    def options(self, out: int) -> list[int]:
        return [i for i in range(self.A.shape[0]) if self.A[i, out] != NEG_INF]

    def reward(self, out: int, choice: int):
        return -self.A[choice, out]


@dataclass(frozen=True)
class MaxPlus:
    """Max layer ``x ↦ B ⊙ x``: output ``i`` picks ``k`` with ``B_ik`` finite and receives ``B_ik``."""
    B: TropMatrix

    @property
    def in_dim(self):
        return self.B.shape[1]

    @property
    def out_dim(self):
        return self.B.shape[0]

    def apply(self, x):
        return maxplus_matvec(self.B, x)

    def options(self, out: int) -> list[int]:
        return self.B.support(out)

    def reward(self, out: int, choice: int):
        return self.B[out, choice]


@dataclass(frozen=True)
class Stochastic:
    """Nature layer ``x ↦ P x`` with a row-stochastic rational ``P``."""
    P: tuple

    @property
    def in_dim(self):
        return len(self.P[0])

    @property
    def out_dim(self):
        return len(self.P)

    def apply(self, x):
        return stochastic_matvec(self.P, x)


Layer = Union[Adjoint, MaxPlus, Stochastic]


@dataclass(frozen=True)
class ShapleyOperator:
    layers: tuple

    def __post_init__(self):
        if not self.layers:
            raise ValueError("operator needs at least one layer")
        for outer, inner in zip(self.layers, self.layers[1:]):
            if outer.in_dim != inner.out_dim:
                raise ValueError(f"incompatible layers: {outer.in_dim} != {inner.out_dim}")

    @property
    def in_dim(self) -> int:
        return self.layers[-1].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[0].out_dim

    @property
    def is_self_map(self) -> bool:
        return self.in_dim == self.out_dim

    def __call__(self, x):
        return apply(self, x)


def build_operator(g: StochasticGame) -> ShapleyOperator:
    """``F = A♯ ∘ B ∘ P``."""
    require_valid(g)
    return ShapleyOperator((Adjoint(g.A), MaxPlus(g.B), Stochastic(g.P)))


def apply(F: ShapleyOperator, x: Sequence):
    if len(x) != F.in_dim:
        raise ValueError(f"dimension mismatch: operator expects {F.in_dim} entries, got {len(x)}")
    for layer in reversed(F.layers):
        x = layer.apply(x)
    return x


def iterate(F: ShapleyOperator, x, k: int):
    for _ in range(k):
        x = apply(F, x)
    return x


def apply_float(F: ShapleyOperator, x: Sequence[float]) -> tuple:
    """Evaluate ``F`` in IEEE double arithmetic."""
    x = tuple(float(v) for v in x)
    for layer in reversed(F.layers):
        if isinstance(layer, Adjoint):
            A = layer.A
            x = tuple(min((x[i] - float(A[i, j]) for i in range(A.shape[0]) if A[i, j] != NEG_INF),
                          default=POS_INF) for j in range(A.shape[1]))
        elif isinstance(layer, MaxPlus):
            B = layer.B
            x = tuple(max((float(B[i, k]) + x[k] for k in B.support(i)), default=NEG_INF)
                      for i in range(B.shape[0]))
        else:
            x = tuple(sum(float(p) * v for p, v in zip(row, x) if p) for row in layer.P)
    return x


def apply_approx(F: ShapleyOperator, x: Sequence, eps, noise: Sequence | None = None) -> tuple:
    """A value within ``eps`` (sup-norm) of ``F(x)``, returned as exact rationals.

    Without ``noise`` the exact value is rounded to double precision, falling
    back to the exact value if rounding alone would exceed ``eps``.  With
    ``noise`` (entries in ``[-1, 1]``) the result is ``F(x) + eps * noise``,
    which lets a harness play the adversary.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    y = apply(F, tuple(v if v in (NEG_INF, POS_INF) else Fraction(v) for v in x))
    if noise is not None:
        if len(noise) != len(y) or any(abs(Fraction(e)) > 1 for e in noise):
            raise ValueError("noise must have entries in [-1, 1]")
        return tuple(v + eps * Fraction(e) for v, e in zip(y, noise))
    rounded = tuple(Fraction(float(v)) for v in y)
    if all(abs(a - b) <= eps for a, b in zip(rounded, y)):
        return rounded
    return y


# -- structural rewrites ----------------------------------------------------

def _swap_layer(layer: Layer) -> Layer:
    if isinstance(layer, Adjoint):
        return MaxPlus(layer.A.T)
    if isinstance(layer, MaxPlus):
        return Adjoint(layer.B.T)
    return layer


def standard_parts(F: ShapleyOperator):
    """``(A, B, P)`` if ``F`` has the form ``A♯ ∘ B ∘ P``."""
    if (len(F.layers) == 3 and isinstance(F.layers[0], Adjoint) and isinstance(F.layers[1], MaxPlus)
            and isinstance(F.layers[2], Stochastic)):
        return F.layers[0].A, F.layers[1].B, F.layers[2].P
    raise ValueError("operator is not of the form A♯ ∘ B ∘ P")


def conjugate(F: ShapleyOperator, kind: str) -> ShapleyOperator:
    """``cyclic``: ``B ∘ P ∘ A♯``; ``swap``: ``x ↦ -F(-x)``; ``dual``: ``(Bᵀ)♯ ∘ P ∘ Aᵀ``."""
    if kind == "cyclic":
        return ShapleyOperator(F.layers[1:] + F.layers[:1])
    if kind == "swap":
        # -A♯(-y) = Aᵀ ⊙ y and -(B ⊙ (-x)) = (Bᵀ)♯(x), layer by layer
        return ShapleyOperator(tuple(_swap_layer(L) for L in F.layers))
    if kind == "dual":
        A, B, P = standard_parts(F)
        if not all(A.support(i) for i in range(A.shape[0])):
            raise ValueError("the dual operator needs a finite entry in every row of A")
        return ShapleyOperator((Adjoint(B.T), Stochastic(P), MaxPlus(A.T)))
    raise ValueError(f"unknown conjugation {kind!r}")


def _zeroed(layer: Layer) -> Layer:
    if isinstance(layer, Adjoint):
        return Adjoint(layer.A.map_finite(lambda a: Fraction(0)))
    if isinstance(layer, MaxPlus):
        return MaxPlus(layer.B.map_finite(lambda b: Fraction(0)))
    return layer


def recession(F: ShapleyOperator) -> ShapleyOperator:
    """``x ↦ lim F(sx)/s``: every finite payment becomes 0."""
    return ShapleyOperator(tuple(_zeroed(L) for L in F.layers))


def shift(F: ShapleyOperator, u: Sequence) -> ShapleyOperator:
    """``x ↦ u + F(x)``, encoded as an extra single-choice Min layer."""
    n = F.out_dim
    if len(u) != n:
        raise ValueError("dimension mismatch")
    D = TropMatrix(tuple(tuple(-Fraction(u[i]) if i == j else NEG_INF for j in range(n)) for i in range(n)))
    return ShapleyOperator((Adjoint(D),) + F.layers)


# -- dependence structure ---------------------------------------------------

def dependence(layer: Layer) -> list[set]:
    """``dep[o]`` = input coordinates output ``o`` can depend on."""
    if isinstance(layer, (Adjoint, MaxPlus)):
        return [set(layer.options(o)) for o in range(layer.out_dim)]
    return [{l for l, p in enumerate(row) if p} for row in layer.P]


def dependence_sets(F: ShapleyOperator) -> list[set]:
    dep = [{o} for o in range(F.out_dim)]
    for layer in F.layers:
        d = dependence(layer)
        dep = [set().union(*(d[o] for o in s)) if s else set() for s in dep]
    return dep


def structurally_diagonal_free(F: ShapleyOperator) -> bool:
    return all(i not in s for i, s in enumerate(dependence_sets(F)))
