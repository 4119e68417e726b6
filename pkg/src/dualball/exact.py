"""Exact rational scalar/vector/matrix arithmetic and lattice rounding.

Everything downstream is bit-exact: scalars are `fractions.Fraction` (stored
in lowest terms with positive denominator), rational vectors are tuples of
Fraction/int, lattice vectors are tuples of int. Euclidean norms are never
materialized as reals; all metric comparisons use squared norms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatchError

Rational = Fraction
RatVec = tuple  # tuple of Fraction or int
LatVec = tuple  # tuple of int
IntMatrix = tuple  # tuple of LatVec rows


def ratvec(coords: Iterable) -> RatVec:
    """Coerce an iterable of numbers into a tuple of exact rationals."""
    return tuple(Fraction(c) for c in coords)


def latvec(coords: Iterable) -> LatVec:
    """Coerce into a tuple of ints; reject non-integer entries."""
    out = []
    for c in coords:
        f = Fraction(c)
        if f.denominator != 1:
            raise ValueError(f"not a lattice coordinate: {c}")
        out.append(int(f))
    return tuple(out)


def check_dim(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise DimensionMismatchError(f"dimension mismatch: {len(x)} vs {len(y)}")


def dot(x: Sequence, y: Sequence):
    """Exact inner product <x, y>."""
    check_dim(x, y)
    return sum(a * b for a, b in zip(x, y))


def vec_add(x: Sequence, y: Sequence) -> tuple:
    check_dim(x, y)
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Sequence, y: Sequence) -> tuple:
    check_dim(x, y)
    return tuple(a - b for a, b in zip(x, y))


def vec_neg(x: Sequence) -> tuple:
    return tuple(-a for a in x)


def vec_scale(t, x: Sequence) -> tuple:
    return tuple(t * a for a in x)


def norm_sq(x: Sequence):
    """Exact squared Euclidean norm."""
    return sum(a * a for a in x)


def is_zero(x: Sequence) -> bool:
    return all(a == 0 for a in x)


def mat_vec(rows: Sequence[Sequence], x: Sequence) -> tuple:
    """Apply a row-major matrix to a vector, exactly."""
    return tuple(dot(row, x) for row in rows)


def nearest_lattice(p: Sequence) -> LatVec:
    """Componentwise nearest lattice point; exact halves round toward +inf.

    Every coordinate of the result q satisfies |p_i - q_i| <= 1/2 exactly.
    """
    return tuple(math.floor(Fraction(c) + Fraction(1, 2)) for c in p)


def primitive(v: Sequence[int]) -> LatVec:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    if all(c == 0 for c in v):
        raise ValueError("primitive of zero vector is undefined")
    g = 0
    for c in v:
        g = math.gcd(g, abs(c))
    return tuple(c // g for c in v)


def clear_denominators(p: Sequence) -> tuple[LatVec, int]:
    """Return (g, q) with q > 0 minimal such that q*p = g is integral."""
    fr = [Fraction(c) for c in p]
    q = 1
    for c in fr:
        q = q * c.denominator // math.gcd(q, c.denominator)
    return tuple(int(c * q) for c in fr), q


def as_int_vec(p: Sequence) -> LatVec | None:
    """The vector as a tuple of ints, or None if any entry is non-integral."""
    out = []
    for c in p:
        if isinstance(c, int):
            out.append(c)
            continue
        f = Fraction(c)
        if f.denominator != 1:
            return None
        out.append(int(f))
    return tuple(out)


def scale_to_primitive(w: Sequence) -> tuple[LatVec, Fraction]:
    """Scale a nonzero rational vector by the unique mu > 0 making it a
    primitive integer vector; returns (mu*w, mu)."""
    g, q = clear_denominators(w)  # g = q*w integral, q > 0
    k = 0
    for c in g:
        k = math.gcd(k, abs(c))
    if k == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(c // k for c in g), Fraction(q, k)
