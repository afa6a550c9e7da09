from fractions import Fraction

import pytest

from lieder import (
    BadDirection,
    DimensionMismatch,
    bracket,
    constant_field,
    diagonal_field,
    euler,
    homogeneous_parts,
    is_diagonal_linear,
    make_field,
    zero_field,
)
from util import mono


def test_make_field_single_term():
    f = make_field(2, [(1, (0, 0), 1)])
    assert len(f.terms) == 1
    assert f == constant_field(2, 1)


def test_make_field_builds_euler():
    f = make_field(2, [(1, (1, 0), 1), (1, (0, 1), 2)])
    assert f == euler(2)


def test_make_field_cancellation():
    f = make_field(1, [(1, (2,), 1), (-1, (2,), 1)])
    assert f.is_zero()
    assert f.n == 1


def test_make_field_merges_like_terms():
    f = make_field(2, [(1, (1, 0), 1), (Fraction(1, 2), (1, 0), 1)])
    assert len(f.terms) == 1
    assert f.terms[0].coeff == Fraction(3, 2)


def test_make_field_errors():
    with pytest.raises(DimensionMismatch):
        make_field(2, [(1, (0, 0, 0), 1)])
    with pytest.raises(BadDirection):
        make_field(2, [(1, (0, 0), 3)])
    with pytest.raises(BadDirection):
        make_field(2, [(1, (0, 0), 0)])
    with pytest.raises(ValueError):
        make_field(2, [(1, (-1, 0), 1)])


def test_canonical_term_order():
    f = mono(2, 1, (1, 0), 1) + mono(2, 1, (0, 1), 2) + mono(2, 1, (0, 0), 1)
    keys = [t.key() for t in f.terms]
    assert keys == sorted(keys)
    assert f.terms[0].exponents == (0, 0)


def test_bracket_translation_and_dilation():
    dx = constant_field(2, 1)
    xdx = diagonal_field(2, 1)
    assert bracket(dx, xdx) == dx


def test_bracket_euler_eigenvalue():
    x2dx = mono(2, 1, (2, 0), 1)
    assert bracket(euler(2), x2dx) == x2dx


def test_bracket_two_shears():
    # [y dx, x dy] = y dy - x dx, by expanding the bracket formula termwise
    ydx = mono(2, 1, (0, 1), 1)
    xdy = mono(2, 1, (1, 0), 2)
    expected = diagonal_field(2, 2) - diagonal_field(2, 1)
    assert bracket(ydx, xdy) == expected


def test_bracket_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        bracket(constant_field(2, 1), constant_field(3, 1))


def test_euler_fields():
    assert euler(1) == mono(1, 1, (1,), 1)
    assert euler(2) == diagonal_field(2, 1) + diagonal_field(2, 2)
    e3 = euler(3)
    assert len(e3.terms) == 3
    assert all(t.coeff == 1 for t in e3.terms)


def test_homogeneous_parts_split():
    f = constant_field(2, 1) + mono(2, 1, (2, 0), 1)
    parts = homogeneous_parts(f)
    assert [p.degree for p in parts] == [-1, 1]
    assert parts[0].field == constant_field(2, 1)
    assert parts[1].field == mono(2, 1, (2, 0), 1)
    assert sum((p.field for p in parts), zero_field(2)) == f


def test_homogeneous_parts_euler():
    parts = homogeneous_parts(euler(2))
    assert len(parts) == 1
    assert parts[0].degree == 0


def test_homogeneous_parts_zero():
    assert homogeneous_parts(zero_field(2)) == []


def test_is_diagonal_linear():
    assert is_diagonal_linear(diagonal_field(2, 1) - 3 * diagonal_field(2, 2))
    assert not is_diagonal_linear(mono(2, 1, (1, 0), 2))
    assert is_diagonal_linear(euler(2))
    assert is_diagonal_linear(zero_field(2))


def test_field_arithmetic_round_trip():
    f = mono(2, Fraction(3, 4), (1, 2), 1) - mono(2, 2, (0, 0), 2)
    again = make_field(2, [(t.coeff, t.exponents, t.direction) for t in f.terms])
    assert again == f


def test_degree_of_mixed_field_raises():
    f = constant_field(2, 1) + mono(2, 1, (2, 0), 1)
    with pytest.raises(ValueError):
        f.degree()
    with pytest.raises(ValueError):
        zero_field(2).degree()
