from fractions import Fraction

import pytest

from lieder import (
    AlgebraSpec,
    CapExceeded,
    MissingConstants,
    MissingEuler,
    NotInAlgebra,
    Subspace,
    algebra_span_in_ambient,
    centralizer_in_truncated_ambient,
    close_and_grade,
    constant_field,
    derived_data,
    diagonal_field,
    euler,
    normalizer_in_truncated_ambient,
    quotient_dim,
    truncated_ambient_basis,
)
from lieder.polyvec import bracket
from util import mono, unit


def test_closure_adjoins_dilation(pentad2):
    # [dx, x^2 dx] = 2 x dx forces x dx into the span: dimension 5
    assert pentad2.dim == 5
    assert sum(pentad2.adjoined) == 1
    adjoined = [b for b, a in zip(pentad2.basis, pentad2.adjoined) if a]
    assert adjoined == [diagonal_field(2, 1)]


def test_diag2_shape(diag2):
    assert diag2.dim == 4
    assert {d: len(r) for d, r in diag2.grading.items()} == {-1: 2, 0: 2}
    assert diag2.flags.diagonal_equals_p0
    assert diag2.flags.is_separated
    assert not diag2.flags.h0_subset_p0


def test_closure_with_extra_shear_stays_dim5():
    gens = (
        constant_field(2, 1),
        constant_field(2, 2),
        diagonal_field(2, 1),
        diagonal_field(2, 2),
        mono(2, 1, (0, 1), 1),  # y dx
    )
    a = close_and_grade(AlgebraSpec(2, gens, degree_cap=6))
    assert a.dim == 5
    assert sum(a.adjoined) == 0


def test_closure_fixpoint(diag2):
    again = close_and_grade(AlgebraSpec(2, diag2.basis, diag2.degree_cap))
    assert again.basis == diag2.basis
    assert sum(again.adjoined) == 0


def test_cap_exceeded():
    # dx, E, x^2 dx, x^3 dx generate arbitrarily high degrees
    gens = (
        constant_field(2, 1),
        constant_field(2, 2),
        euler(2),
        mono(2, 1, (2, 0), 1),
        mono(2, 1, (3, 0), 1),
    )
    with pytest.raises(CapExceeded) as err:
        close_and_grade(AlgebraSpec(2, gens, degree_cap=5))
    assert err.value.degree == 6


def test_missing_standing_hypotheses():
    with pytest.raises(MissingEuler):
        close_and_grade(
            AlgebraSpec(2, (constant_field(2, 1), constant_field(2, 2)))
        )
    with pytest.raises(MissingConstants):
        close_and_grade(AlgebraSpec(2, (constant_field(2, 1), euler(2))))
    a = close_and_grade(
        AlgebraSpec(2, (constant_field(2, 1), euler(2))), allow_nonstandard=True
    )
    assert not a.flags.contains_all_constants


def test_coordinates(diag2):
    for k, b in enumerate(diag2.basis):
        assert diag2.coordinates(b) == tuple(unit(4, k))
    e = diag2.coordinates(euler(2))
    assert sorted(e) == [0, 0, 1, 1]
    with pytest.raises(NotInAlgebra):
        diag2.coordinates(mono(2, 1, (2, 0), 2))


def test_structure_constants_reproduce_brackets(diag2, shear3):
    for a in (diag2, shear3):
        for i in range(a.dim):
            for j in range(a.dim):
                expected = bracket(a.basis[i], a.basis[j])
                assert a.field_of(a.sc(i, j)) == expected


def test_grading_law(tower2):
    for i in range(tower2.dim):
        for j in range(tower2.dim):
            rng = tower2.indices_of_degree(
                tower2.degrees[i] + tower2.degrees[j]
            )
            for l, v in enumerate(tower2.sc(i, j)):
                if v:
                    assert l in rng


def test_derived_data_diag2(diag2):
    dd = derived_data(diag2)
    pm1 = Subspace.from_vectors(4, [unit(4, k) for k in diag2.indices_of_degree(-1)])
    assert dd.derived == pm1
    assert dd.p0_complement.dim == 2
    assert dd.p1_p_minus1.dim == 0
    assert dd.hypothesis_a


def test_derived_data_euler2(euler2):
    dd = derived_data(euler2)
    assert dd.derived.dim == 2  # the constants
    assert dd.p0_complement.dim == 1  # all of P0 = <E>
    e_idx = list(euler2.indices_of_degree(0))[0]
    assert dd.p0_complement.contains(unit(3, e_idx))


def test_derived_data_shear3(shear3):
    dd = derived_data(shear3)
    # [P1, P-1] = <x dz> is not inside [P0, P0]
    assert dd.p1_p_minus1.dim == 1
    assert not dd.hypothesis_a


def test_derived_data_tower2(tower2):
    dd = derived_data(tower2)
    assert dd.hypothesis_a
    # P0 meets [P,P] in <y dx>, leaving a 2-dimensional complement
    assert dd.p0_complement.dim == 2


def test_truncated_ambient_basis_counts():
    monos = truncated_ambient_basis(2, 1)
    # degrees -1, 0, 1: 2 + 4 + 6 monomial fields
    assert len(monos) == 12
    keys = [(t.degree, t.exponents, t.direction) for m in monos for t in m.terms]
    assert keys == sorted(keys)


def test_centralizer_zero(diag2, shear2, euler2, shear3):
    for a in (diag2, shear2, euler2, shear3):
        assert centralizer_in_truncated_ambient(a, a.max_degree + 3).dim == 0


def test_centralizer_cap_validation(diag2):
    with pytest.raises(ValueError):
        centralizer_in_truncated_ambient(diag2, -1)


def test_normalizer_contains_algebra(diag2, shear2):
    for a in (diag2, shear2):
        cap = a.max_degree + 2
        norm = normalizer_in_truncated_ambient(a, cap)
        span = algebra_span_in_ambient(a, cap)
        assert norm.contains_subspace(span)


def test_normalizer_quotient_matches_h1(diag2, shear2, euler2, pentad2, shear3):
    # dim N/P equals dim Der/ad (frozen from two independent computations)
    from lieder import inner_derivations, solve_derivations

    cases = [(diag2, 0), (shear2, 1), (euler2, 3), (pentad2, 0), (shear3, 4)]
    for a, h1 in cases:
        cap = a.max_degree + 2
        norm = normalizer_in_truncated_ambient(a, cap)
        span = algebra_span_in_ambient(a, cap)
        assert quotient_dim(norm, span) == h1
        der = solve_derivations(a)
        ad = inner_derivations(a)
        assert der.space.dim - ad.space.dim == h1


def test_normalizer_small_cap_is_algebra(diag2):
    # nothing of degree <= 0 outside the span normalizes the algebra
    norm = normalizer_in_truncated_ambient(diag2, 0)
    span = algebra_span_in_ambient(diag2, 0)
    assert norm == span
