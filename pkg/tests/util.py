"""Shared helpers for the test suite: field shortcuts, random algebras,
and direct verification that solution vectors satisfy their defining equations.
"""

from __future__ import annotations

import random
from fractions import Fraction

from lieder import (
    AlgebraSpec,
    CapExceeded,
    Endo,
    GradedAlgebra,
    SolutionSpace,
    close_and_grade,
    constant_field,
    diagonal_field,
    make_field,
    mderivation_check,
)
from lieder.derspaces import (
    CENTROID,
    DER,
    GENDER_TRIPLE,
    MDER_MINUS2,
    QCENTROID,
    QDER_PAIR,
)


def mono(n, coeff, exps, direction):
    return make_field(n, [(coeff, tuple(exps), direction)])


def unit(dim, k):
    v = [Fraction(0)] * dim
    v[k] = Fraction(1)
    return v


def basis_index(algebra: GradedAlgebra, field) -> int:
    coords = algebra.coordinates(field)
    support = [k for k, v in enumerate(coords) if v]
    assert len(support) == 1 and coords[support[0]] == 1, "not a basis element"
    return support[0]


# -- random separated algebras -------------------------------------------------


def random_generators(rng: random.Random, n: int, extras: int):
    gens = [constant_field(n, i + 1) for i in range(n)]
    gens += [diagonal_field(n, i + 1) for i in range(n)]
    for _ in range(extras):
        polydeg = rng.choice((1, 2, 2, 3))
        exps = [0] * n
        for _ in range(polydeg):
            exps[rng.randrange(n)] += 1
        gens.append(mono(n, 1, exps, rng.randrange(n) + 1))
    return tuple(gens)


def random_separated_algebras(
    seed: int, count: int, max_dim: int = 12, cap: int = 6
) -> list[GradedAlgebra]:
    rng = random.Random(seed)
    out: list[GradedAlgebra] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        assert attempts < count * 60, "random algebra generation starved"
        n = rng.choice((2, 3))
        extras = rng.randint(1, 3)
        try:
            algebra = close_and_grade(
                AlgebraSpec(n, random_generators(rng, n, extras), degree_cap=cap)
            )
        except CapExceeded:
            continue
        if algebra.dim <= max_dim and algebra.flags.is_separated:
            out.append(algebra)
    return out


# -- direct verification of solution vectors -----------------------------------


def _endos_of(solution: SolutionSpace, algebra: GradedAlgebra, vec):
    dim2 = algebra.dim**2
    return [
        Endo.from_vec(algebra, vec[k * dim2 : (k + 1) * dim2])
        for k in range(solution.arity)
    ]


def solution_vector_satisfies(
    algebra: GradedAlgebra, solution: SolutionSpace, vec
) -> bool:
    """Evaluate the species' defining equation on every required basis pair."""
    dim = algebra.dim
    br = algebra.bracket_coords
    e = [unit(dim, k) for k in range(dim)]
    if solution.species == DER:
        (d,) = _endos_of(solution, algebra, vec)
        cols = [d.column(c) for c in range(dim)]
        for i in range(dim):
            for j in range(i + 1, dim):
                lhs = d.apply_coords(algebra.sc(i, j))
                rhs = [a + b for a, b in zip(br(cols[i], e[j]), br(e[i], cols[j]))]
                if lhs != rhs:
                    return False
        return True
    if solution.species == CENTROID:
        (f,) = _endos_of(solution, algebra, vec)
        cols = [f.column(c) for c in range(dim)]
        for i in range(dim):
            for j in range(i, dim):
                lhs = f.apply_coords(algebra.sc(i, j))
                if lhs != br(cols[i], e[j]):
                    return False
                if i != j and lhs != br(e[i], cols[j]):
                    return False
        return True
    if solution.species == QCENTROID:
        (g,) = _endos_of(solution, algebra, vec)
        cols = [g.column(c) for c in range(dim)]
        for i in range(dim):
            for j in range(i, dim):
                if br(cols[i], e[j]) != br(e[i], cols[j]):
                    return False
        return True
    if solution.species == QDER_PAIR:
        f, g = _endos_of(solution, algebra, vec)
        cols = [f.column(c) for c in range(dim)]
        for i in range(dim):
            for j in range(i + 1, dim):
                lhs = [a + b for a, b in zip(br(cols[i], e[j]), br(e[i], cols[j]))]
                if lhs != g.apply_coords(algebra.sc(i, j)):
                    return False
        return True
    if solution.species == GENDER_TRIPLE:
        f, h, g = _endos_of(solution, algebra, vec)
        fc = [f.column(c) for c in range(dim)]
        hc = [h.column(c) for c in range(dim)]
        for i in range(dim):
            for j in range(dim):
                lhs = [a + b for a, b in zip(br(fc[i], e[j]), br(e[i], hc[j]))]
                if lhs != g.apply_coords(algebra.sc(i, j)):
                    return False
        return True
    if solution.species == MDER_MINUS2:
        (d,) = _endos_of(solution, algebra, vec)
        return mderivation_check(algebra, d, 3)
    raise ValueError(solution.species)


def whole_space_satisfies(algebra: GradedAlgebra, solution: SolutionSpace) -> bool:
    return all(
        solution_vector_satisfies(algebra, solution, v)
        for v in solution.space.basis
    )
