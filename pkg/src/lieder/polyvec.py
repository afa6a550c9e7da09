"""Exact arithmetic on polynomial vector fields over R^n.

A field is a finite rational combination of monomial fields c * x^a * d/dx^i,
kept in a canonical sorted form so that structural equality is mathematical
equality.  Degrees follow the Euler grading: a field with homogeneous
polynomial coefficients of total degree k has degree k - 1, so constant fields
sit in degree -1 and the Euler field E = sum_i x^i d/dx^i in degree 0, with
[E, X] = d * X characterising the degree-d homogeneous fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class DimensionMismatch(ValueError):
    """A multi-index or field does not match the ambient dimension."""


class BadDirection(ValueError):
    """A coordinate direction lies outside 1..n."""


Rational = Fraction | int


@dataclass(frozen=True)
class MonomialField:
    """A single term coeff * x^exponents * d/dx^direction (direction is 1-based)."""

    coeff: Fraction
    exponents: tuple[int, ...]
    direction: int

    @property
    def degree(self) -> int:
        """Euler degree: total polynomial degree minus one."""
        return sum(self.exponents) - 1

    def key(self) -> tuple:
        """Canonical position: (total degree, exponents lexicographic, direction)."""
        return (sum(self.exponents), self.exponents, self.direction)


@dataclass(frozen=True)
class PolyVectorField:
    """Polynomial vector field on R^n in canonical form.

    ``terms`` is sorted by :meth:`MonomialField.key` and holds distinct
    (exponents, direction) pairs with nonzero coefficients; the zero field is
    the empty tuple but still remembers ``n``.  Build instances through
    :func:`make_field` (or the arithmetic operators), never by hand.
    """

    n: int
    terms: tuple[MonomialField, ...]

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({t.degree for t in self.terms}) <= 1

    def degree(self) -> int:
        """Degree of a nonzero homogeneous field."""
        degs = {t.degree for t in self.terms}
        if len(degs) != 1:
            raise ValueError("degree is defined only for nonzero homogeneous fields")
        return degs.pop()

    def sort_key(self) -> tuple:
        """Deterministic total order on canonical fields."""
        return tuple(
            (t.key(), (t.coeff.numerator, t.coeff.denominator)) for t in self.terms
        )

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        if self.n != other.n:
            raise DimensionMismatch(f"cannot add fields on R^{self.n} and R^{other.n}")
        return _canonical(
            self.n,
            [(t.coeff, t.exponents, t.direction) for t in self.terms + other.terms],
        )

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return self + (-other)

    def __neg__(self) -> "PolyVectorField":
        return _canonical(
            self.n, [(-t.coeff, t.exponents, t.direction) for t in self.terms]
        )

    def __mul__(self, scalar: Rational) -> "PolyVectorField":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        c = Fraction(scalar)
        return _canonical(
            self.n, [(c * t.coeff, t.exponents, t.direction) for t in self.terms]
        )

    __rmul__ = __mul__


@dataclass(frozen=True)
class HomogeneousPart:
    """A homogeneous slice of a field: every term has this Euler degree."""

    degree: int
    field: PolyVectorField


def _canonical(
    n: int, items: Iterable[tuple[Fraction, tuple[int, ...], int]]
) -> PolyVectorField:
    merged: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for coeff, exps, direction in items:
        key = (exps, direction)
        acc = merged.get(key, Fraction(0)) + coeff
        if acc:
            merged[key] = acc
        else:
            merged.pop(key, None)
    terms = tuple(
        sorted(
            (MonomialField(c, exps, d) for (exps, d), c in merged.items()),
            key=MonomialField.key,
        )
    )
    return PolyVectorField(n, terms)


def make_field(
    n: int, terms: Iterable[tuple[Rational, Iterable[int], int]]
) -> PolyVectorField:
    """Build the canonical field sum(coeff * x^exponents * d/dx^direction).

    Like terms are merged and zero terms dropped; raises DimensionMismatch for
    a multi-index of the wrong length and BadDirection for a direction outside
    1..n.
    """
    if n < 1:
        raise DimensionMismatch(f"ambient dimension must be positive, got {n}")
    prepared = []
    for coeff, exps, direction in terms:
        exps = tuple(exps)
        if len(exps) != n:
            raise DimensionMismatch(
                f"multi-index {exps} has length {len(exps)}, expected {n}"
            )
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in multi-index {exps}")
        if not 1 <= direction <= n:
            raise BadDirection(f"direction {direction} outside 1..{n}")
        prepared.append((Fraction(coeff), exps, direction))
    return _canonical(n, prepared)


def zero_field(n: int) -> PolyVectorField:
    return make_field(n, [])


def euler(n: int) -> PolyVectorField:
    """The Euler field sum_i x^i d/dx^i."""
    if n < 1:
        raise DimensionMismatch(f"ambient dimension must be positive, got {n}")
    unit = lambda i: tuple(1 if j == i else 0 for j in range(n))
    return make_field(n, [(1, unit(i), i + 1) for i in range(n)])


def _directional_action(
    xs: tuple[MonomialField, ...], ys: tuple[MonomialField, ...]
) -> list[tuple[Fraction, tuple[int, ...], int]]:
    # sum_i X^i dY^j/dx^i for term lists: differentiate each Y-term by the
    # direction of each X-term and multiply the coefficients.
    out = []
    for xt in xs:
        i = xt.direction - 1
        for yt in ys:
            e = yt.exponents[i]
            if e == 0:
                continue
            exps = list(xt.exponents)
            for k, b in enumerate(yt.exponents):
                exps[k] += b
            exps[i] -= 1
            out.append((xt.coeff * yt.coeff * e, tuple(exps), yt.direction))
    return out


def bracket(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """Lie bracket [X, Y] = (X^i dY^j/dx^i - Y^i dX^j/dx^i) d/dx^j."""
    if x.n != y.n:
        raise DimensionMismatch(f"cannot bracket fields on R^{x.n} and R^{y.n}")
    items = _directional_action(x.terms, y.terms)
    items.extend((-c, e, d) for c, e, d in _directional_action(y.terms, x.terms))
    return _canonical(x.n, items)


def homogeneous_parts(x: PolyVectorField) -> list[HomogeneousPart]:
    """Split into homogeneous parts, sorted by degree; empty for the zero field."""
    buckets: dict[int, list[MonomialField]] = {}
    for t in x.terms:
        buckets.setdefault(t.degree, []).append(t)
    return [
        HomogeneousPart(d, PolyVectorField(x.n, tuple(ts)))
        for d, ts in sorted(buckets.items())
    ]


def is_diagonal_linear(x: PolyVectorField) -> bool:
    """True iff every term is a multiple of x^i d/dx^i."""
    for t in x.terms:
        expected = tuple(1 if j == t.direction - 1 else 0 for j in range(x.n))
        if t.exponents != expected:
            return False
    return True


def constant_field(n: int, direction: int) -> PolyVectorField:
    """d/dx^direction (direction is 1-based)."""
    return make_field(n, [(1, (0,) * n, direction)])


def diagonal_field(n: int, direction: int) -> PolyVectorField:
    """x^direction d/dx^direction (direction is 1-based)."""
    exps = tuple(1 if j == direction - 1 else 0 for j in range(n))
    return make_field(n, [(1, exps, direction)])
