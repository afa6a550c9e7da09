"""Solvers for derivation-type endomorphism spaces of a graded algebra.

Species and their defining equations, imposed on basis elements X, Y:

  der            D[X,Y] = [DX,Y] + [X,DY]            pairs i < j
  centroid       f[X,Y] = [fX,Y] and f[X,Y] = [X,fY] pairs i <= j
  qcentroid      [gX,Y] = [X,gY]                     pairs i <= j
  qder (f,g)     [fX,Y] + [X,fY] = g[X,Y]            pairs i < j
  gender (f,h,g) [fX,Y] + [X,hY] = g[X,Y]            all ordered pairs, i = j too
  mder_minus2    degree -2 maps null off the degree-one slice satisfying the
                 odd nested-Leibniz criterion (three linear conditions plus a
                 budget-bounded family of nested-bracket conditions)

Each system is exactly block-diagonal across the degree shift of the unknown
endomorphisms (an equation on a pair of fixed degrees, read in a fixed output
degree, only touches unknowns of one shift), so every shift is solved as its
own sparse kernel problem and the union is reduced to a single canonical
echelon basis.  Solution vectors stack the unknown matrices row-major in the
order f, then h, then g.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import GradedAlgebra, NotInAlgebra, derived_data
from .linsolve import RatMatrix, Subspace, kernel, sum_and_intersection
from .polyvec import (
    PolyVectorField,
    bracket,
    constant_field,
    homogeneous_parts,
    make_field,
)

DER = "der"
CENTROID = "centroid"
QCENTROID = "qcentroid"
QDER_PAIR = "qder_pair"
GENDER_TRIPLE = "gender_triple"
MDER_MINUS2 = "mder_minus2"

_ARITY = {DER: 1, CENTROID: 1, QCENTROID: 1, QDER_PAIR: 2, GENDER_TRIPLE: 3, MDER_MINUS2: 1}


class NotDegreeZero(ValueError):
    """The proposed centroid value on the Euler field is not homogeneous of degree 0."""


class BudgetTooSmall(RuntimeError):
    """The tuple budget was exhausted before the enumeration finished."""

    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(
            f"enumeration needs {needed} tuples but the budget allows {budget}"
        )


@dataclass(frozen=True)
class Endo:
    """An endomorphism of the algebra as a dim x dim rational matrix.

    matrix[r][c] is the coefficient of basis_r in the image of basis_c.
    """

    algebra: GradedAlgebra
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        dim = self.algebra.dim
        if len(self.matrix) != dim or any(len(row) != dim for row in self.matrix):
            raise ValueError("matrix shape does not match the algebra dimension")

    @classmethod
    def zero(cls, algebra: GradedAlgebra) -> "Endo":
        z = tuple([tuple([Fraction(0)] * algebra.dim)] * algebra.dim)
        return cls(algebra, z)

    @classmethod
    def identity(cls, algebra: GradedAlgebra) -> "Endo":
        dim = algebra.dim
        return cls(
            algebra,
            tuple(
                tuple(Fraction(1 if r == c else 0) for c in range(dim))
                for r in range(dim)
            ),
        )

    @classmethod
    def from_images(
        cls, algebra: GradedAlgebra, images: dict[int, PolyVectorField]
    ) -> "Endo":
        """Endo sending basis_c to images[c] (absent indices map to zero)."""
        dim = algebra.dim
        cols = {}
        for c, img in images.items():
            cols[c] = algebra.coordinates(img)
        matrix = tuple(
            tuple(
                cols[c][r] if c in cols else Fraction(0) for c in range(dim)
            )
            for r in range(dim)
        )
        return cls(algebra, matrix)

    @classmethod
    def from_vec(cls, algebra: GradedAlgebra, vec) -> "Endo":
        dim = algebra.dim
        if len(vec) != dim * dim:
            raise ValueError(f"vector length {len(vec)} != dim^2 = {dim * dim}")
        matrix = tuple(
            tuple(Fraction(vec[r * dim + c]) for c in range(dim)) for r in range(dim)
        )
        return cls(algebra, matrix)

    def vec(self) -> tuple[Fraction, ...]:
        """Row-major flattening, the coordinate convention of every solver."""
        return tuple(x for row in self.matrix for x in row)

    def apply_coords(self, v) -> list[Fraction]:
        dim = self.algebra.dim
        out = [Fraction(0)] * dim
        for c, a in enumerate(v):
            if not a:
                continue
            for r in range(dim):
                m = self.matrix[r][c]
                if m:
                    out[r] += m * a
        return out

    def apply_field(self, x: PolyVectorField) -> PolyVectorField:
        return self.algebra.field_of(self.apply_coords(self.algebra.coordinates(x)))

    def column(self, c: int) -> list[Fraction]:
        return [self.matrix[r][c] for r in range(self.algebra.dim)]

    def __add__(self, other: "Endo") -> "Endo":
        if self.algebra is not other.algebra:
            raise ValueError("endomorphisms live on different algebras")
        return Endo(
            self.algebra,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.matrix, other.matrix)
            ),
        )

    def __rmul__(self, scalar) -> "Endo":
        c = Fraction(scalar)
        return Endo(
            self.algebra, tuple(tuple(c * x for x in row) for row in self.matrix)
        )

    def __sub__(self, other: "Endo") -> "Endo":
        return self + (-1) * other


@dataclass(frozen=True)
class SolutionSpace:
    """Solutions of one species' defining system, as stacked endo vectors.

    ``space`` lives in Q^(arity * dim^2); ``degree_blocks[d]`` is the
    sub-subspace of solutions whose components are homogeneous of degree
    shift d, and the blocks together span ``space``.  ``exhaustive`` is False
    only when a budget-bounded condition family was truncated, in which case
    the space is an over-approximation.
    """

    species: str
    arity: int
    space: Subspace
    degree_blocks: dict[int, Subspace] = field(default_factory=dict)
    exhaustive: bool = True


def unstack(solution: SolutionSpace, algebra: GradedAlgebra, vec) -> tuple[Endo, ...]:
    """Split one stacked solution vector into its component endomorphisms."""
    dim2 = algebra.dim * algebra.dim
    return tuple(
        Endo.from_vec(algebra, vec[k * dim2 : (k + 1) * dim2])
        for k in range(solution.arity)
    )


def stack(endos) -> tuple[Fraction, ...]:
    out: list[Fraction] = []
    for e in endos:
        out.extend(e.vec())
    return tuple(out)


def f_projection(solution: SolutionSpace, algebra: GradedAlgebra) -> Subspace:
    """Span of the f components of the solution space, in endo coordinates."""
    dim2 = algebra.dim * algebra.dim
    return Subspace.from_vectors(dim2, [v[:dim2] for v in solution.space.basis])


# -- system assembly ---------------------------------------------------------


def _species_rows(algebra: GradedAlgebra, species: str):
    """Constraint rows over global unknown ids comp*dim^2 + r*dim + c."""
    dim = algebra.dim
    dim2 = dim * dim
    sc = algebra.sc
    rows: list[dict[int, Fraction]] = []

    def fresh() -> list[dict[int, Fraction]]:
        eq: list[dict[int, Fraction]] = [dict() for _ in range(dim)]
        rows.extend(eq)
        return eq

    def acc(eq, l: int, col: int, val: Fraction) -> None:
        cur = eq[l].get(col, Fraction(0)) + val
        if cur:
            eq[l][col] = cur
        else:
            eq[l].pop(col, None)

    if species == DER:
        for i in range(dim):
            for j in range(i + 1, dim):
                sij = sc(i, j)
                eq = fresh()
                for a, v in enumerate(sij):
                    if v:
                        for l in range(dim):
                            acc(eq, l, l * dim + a, v)
                for r in range(dim):
                    for l, v in enumerate(sc(r, j)):
                        if v:
                            acc(eq, l, r * dim + i, -v)
                    for l, v in enumerate(sc(i, r)):
                        if v:
                            acc(eq, l, r * dim + j, -v)
    elif species == CENTROID:
        for i in range(dim):
            for j in range(i, dim):
                sij = sc(i, j)
                eq1 = fresh()
                for a, v in enumerate(sij):
                    if v:
                        for l in range(dim):
                            acc(eq1, l, l * dim + a, v)
                for r in range(dim):
                    for l, v in enumerate(sc(r, j)):
                        if v:
                            acc(eq1, l, r * dim + i, -v)
                if i == j:
                    continue  # both equalities coincide on the diagonal
                eq2 = fresh()
                for a, v in enumerate(sij):
                    if v:
                        for l in range(dim):
                            acc(eq2, l, l * dim + a, v)
                for r in range(dim):
                    for l, v in enumerate(sc(i, r)):
                        if v:
                            acc(eq2, l, r * dim + j, -v)
    elif species == QCENTROID:
        for i in range(dim):
            for j in range(i, dim):
                eq = fresh()
                for r in range(dim):
                    for l, v in enumerate(sc(r, j)):
                        if v:
                            acc(eq, l, r * dim + i, v)
                    for l, v in enumerate(sc(i, r)):
                        if v:
                            acc(eq, l, r * dim + j, -v)
    elif species == QDER_PAIR:
        for i in range(dim):
            for j in range(i + 1, dim):
                sij = sc(i, j)
                eq = fresh()
                for r in range(dim):
                    for l, v in enumerate(sc(r, j)):
                        if v:
                            acc(eq, l, r * dim + i, v)
                    for l, v in enumerate(sc(i, r)):
                        if v:
                            acc(eq, l, r * dim + j, v)
                for a, v in enumerate(sij):
                    if v:
                        for l in range(dim):
                            acc(eq, l, dim2 + l * dim + a, -v)
    elif species == GENDER_TRIPLE:
        # the equation is asymmetric in f and h, and the diagonal pairs are
        # not vacuous: [fX, X] + [X, hX] = 0 is a genuine constraint
        for i in range(dim):
            for j in range(dim):
                sij = sc(i, j)
                eq = fresh()
                for r in range(dim):
                    for l, v in enumerate(sc(r, j)):
                        if v:
                            acc(eq, l, r * dim + i, v)
                    for l, v in enumerate(sc(i, r)):
                        if v:
                            acc(eq, l, dim2 + r * dim + j, v)
                for a, v in enumerate(sij):
                    if v:
                        for l in range(dim):
                            acc(eq, l, 2 * dim2 + l * dim + a, -v)
    else:
        raise ValueError(f"unknown species {species!r}")
    return [r for r in rows if r]


def _solve_blockwise(algebra: GradedAlgebra, species: str) -> SolutionSpace:
    dim = algebra.dim
    ncomp = _ARITY[species]
    width = ncomp * dim * dim
    deg = algebra.degrees

    cols_by_shift: dict[int, list[int]] = {}
    for comp in range(ncomp):
        base = comp * dim * dim
        for r in range(dim):
            for c in range(dim):
                cols_by_shift.setdefault(deg[r] - deg[c], []).append(
                    base + r * dim + c
                )

    rows_by_shift: dict[int, list[dict[int, Fraction]]] = {}
    shift_of_col = {}
    for shift, cols in cols_by_shift.items():
        for g in cols:
            shift_of_col[g] = shift
    for row in _species_rows(algebra, species):
        shift = shift_of_col[next(iter(row))]
        rows_by_shift.setdefault(shift, []).append(row)

    blocks: dict[int, Subspace] = {}
    all_vectors: list[list[Fraction]] = []
    for shift in sorted(cols_by_shift):
        cols = cols_by_shift[shift]
        local = {g: i for i, g in enumerate(cols)}
        local_rows = [
            {local[c]: v for c, v in row.items()}
            for row in rows_by_shift.get(shift, [])
        ]
        ker = kernel(RatMatrix.from_row_dicts(len(cols), local_rows))
        if not ker.dim:
            continue
        embedded = []
        for v in ker.basis:
            full = [Fraction(0)] * width
            for i, g in enumerate(cols):
                full[g] = v[i]
            embedded.append(full)
        blocks[shift] = Subspace.from_vectors(width, embedded)
        all_vectors.extend(embedded)
    return SolutionSpace(
        species,
        ncomp,
        Subspace.from_vectors(width, all_vectors),
        degree_blocks=blocks,
    )


# -- species solvers ---------------------------------------------------------


def inner_derivations(algebra: GradedAlgebra) -> SolutionSpace:
    """Span of the adjoint matrices ad(basis_i); arity-1 DER vectors."""
    dim = algebra.dim
    vectors = []
    blocks: dict[int, list[tuple[Fraction, ...]]] = {}
    for i in range(dim):
        mat = [[Fraction(0)] * dim for _ in range(dim)]
        for j in range(dim):
            for r, v in enumerate(algebra.sc(i, j)):
                if v:
                    mat[r][j] = v
        vec = tuple(x for row in mat for x in row)
        vectors.append(vec)
        blocks.setdefault(algebra.degrees[i], []).append(vec)
    width = dim * dim
    return SolutionSpace(
        DER,
        1,
        Subspace.from_vectors(width, vectors),
        degree_blocks={
            d: Subspace.from_vectors(width, vs) for d, vs in blocks.items()
        },
    )


def ad_endo(algebra: GradedAlgebra, coords) -> Endo:
    """The inner derivation [X, .] of the element with the given coordinates."""
    dim = algebra.dim
    mat = [[Fraction(0)] * dim for _ in range(dim)]
    for i, a in enumerate(coords):
        if not a:
            continue
        for j in range(dim):
            for r, v in enumerate(algebra.sc(i, j)):
                if v:
                    mat[r][j] += a * v
    return Endo(algebra, tuple(tuple(row) for row in mat))


def solve_derivations(algebra: GradedAlgebra) -> SolutionSpace:
    return _solve_blockwise(algebra, DER)


def solve_centroid(algebra: GradedAlgebra) -> SolutionSpace:
    return _solve_blockwise(algebra, CENTROID)


def solve_quasicentroid(algebra: GradedAlgebra) -> SolutionSpace:
    return _solve_blockwise(algebra, QCENTROID)


def solve_quasiderivations(algebra: GradedAlgebra) -> SolutionSpace:
    return _solve_blockwise(algebra, QDER_PAIR)


def solve_generalized(algebra: GradedAlgebra) -> SolutionSpace:
    return _solve_blockwise(algebra, GENDER_TRIPLE)


# -- degree filtration -------------------------------------------------------


def degree_filter(
    solution: SolutionSpace, algebra: GradedAlgebra
) -> dict[int, Subspace]:
    """Degree d -> solutions whose f component maps P_j into P_{j+d} for all j.

    Components other than f are unconstrained, so for stacked species a block
    may be larger than the solver's pure-shift block; the f projections agree.
    """
    if solution.arity not in (1, 2):
        raise ValueError("degree_filter applies to arity-1 and arity-2 species")
    dim = algebra.dim
    deg = algebra.degrees
    out: dict[int, Subspace] = {}
    shifts = sorted({a - b for a in set(deg) for b in set(deg)})
    for d in shifts:
        forbidden = [
            r * dim + c
            for r in range(dim)
            for c in range(dim)
            if deg[r] - deg[c] != d
        ]
        block = constrain_to_zero(solution.space, forbidden)
        if block.dim:
            out[d] = block
    return out


def constrain_to_zero(space: Subspace, zero_coords) -> Subspace:
    """Intersection of a subspace with {v : v[i] = 0 for i in zero_coords}."""
    if not space.dim:
        return space
    rows = []
    for idx in zero_coords:
        row = {
            k: b[idx] for k, b in enumerate(space.basis) if b[idx]
        }
        if row:
            rows.append(row)
    combos = kernel(RatMatrix.from_row_dicts(space.dim, rows))
    vectors = []
    for combo in combos.basis:
        v = [Fraction(0)] * space.ambient_dim
        for k, c in enumerate(combo):
            if c:
                for i, x in enumerate(space.basis[k]):
                    if x:
                        v[i] += c * x
        vectors.append(v)
    return Subspace.from_vectors(space.ambient_dim, vectors)


def vanishing_on_E_subspace(
    solution: SolutionSpace, algebra: GradedAlgebra, d: int
) -> Subspace:
    """Degree-d block of a quasiderivation space cut down to {f : f(E) = 0}."""
    dim = algebra.dim
    block = degree_filter(solution, algebra).get(
        d, Subspace.zero(solution.space.ambient_dim)
    )
    if not block.dim:
        return block
    e = algebra.euler_coords()
    rows = []
    for r in range(dim):
        row = {}
        for k, b in enumerate(block.basis):
            s = sum(
                (e[c] * b[r * dim + c] for c in range(dim) if e[c]), Fraction(0)
            )
            if s:
                row[k] = s
        if row:
            rows.append(row)
    combos = kernel(RatMatrix.from_row_dicts(block.dim, rows))
    vectors = []
    for combo in combos.basis:
        v = [Fraction(0)] * block.ambient_dim
        for k, c in enumerate(combo):
            if c:
                for i, x in enumerate(block.basis[k]):
                    if x:
                        v[i] += c * x
        vectors.append(v)
    return Subspace.from_vectors(block.ambient_dim, vectors)


# -- centroid reconstruction -------------------------------------------------


def centroid_from_E0(
    algebra: GradedAlgebra, e0: PolyVectorField
) -> Endo | None:
    """Reconstruct the centroid element with f(E) = e0, or None.

    On a degree-m basis element with m != 0 the candidate is [e0/m, .]; on the
    degree-0 slice it is pinned down by bracketing with the constant fields.
    The candidate is then verified against both centroid equalities on every
    basis pair; any failure (including an image escaping the algebra) returns
    None.
    """
    n = algebra.n
    if e0.n != n:
        raise NotDegreeZero(f"field on R^{e0.n}, algebra on R^{n}")
    if not e0.is_zero():
        parts = homogeneous_parts(e0)
        if len(parts) != 1 or parts[0].degree != 0:
            raise NotDegreeZero("the value on the Euler field must be homogeneous of degree 0")
    images: dict[int, PolyVectorField] = {}
    for k, b in enumerate(algebra.basis):
        m = algebra.degrees[k]
        if m != 0:
            img = Fraction(1, m) * bracket(e0, b)
        else:
            # Y_0 has matrix entries beta[i][t] with [d/dx^t, Y_0] = -[e0, [d/dx^t, Y]]
            items = []
            for t in range(1, n + 1):
                w = bracket(e0, bracket(constant_field(n, t), b)) * Fraction(-1)
                for term in w.terms:
                    if term.degree != -1:
                        return None
                    exps = tuple(
                        1 if s == t - 1 else 0 for s in range(n)
                    )
                    items.append((term.coeff, exps, term.direction))
            img = make_field(n, items)
        try:
            algebra.coordinates(img)
        except NotInAlgebra:
            return None
        images[k] = img
    candidate = Endo.from_images(algebra, images)
    return candidate if _satisfies_centroid(algebra, candidate) else None


def _satisfies_centroid(algebra: GradedAlgebra, endo: Endo) -> bool:
    return centroid_violation(algebra, endo) is None


def _unit_vec(dim: int, k: int) -> list[Fraction]:
    v = [Fraction(0)] * dim
    v[k] = Fraction(1)
    return v


# -- direct verification of a single endomorphism ----------------------------


def derivation_violation(algebra: GradedAlgebra, endo: Endo) -> tuple[int, int] | None:
    """First basis pair breaking the Leibniz rule, or None."""
    dim = algebra.dim
    for i in range(dim):
        ci = endo.column(i)
        for j in range(i + 1, dim):
            lhs = endo.apply_coords(algebra.sc(i, j))
            rhs = [
                a + b
                for a, b in zip(
                    algebra.bracket_coords(ci, _unit_vec(dim, j)),
                    algebra.bracket_coords(_unit_vec(dim, i), endo.column(j)),
                )
            ]
            if lhs != rhs:
                return (i, j)
    return None


def centroid_violation(algebra: GradedAlgebra, endo: Endo) -> tuple[int, int] | None:
    """First basis pair breaking either centroid equality, or None."""
    dim = algebra.dim
    for i in range(dim):
        ci = endo.column(i)
        for j in range(i, dim):
            lhs = endo.apply_coords(algebra.sc(i, j))
            if lhs != algebra.bracket_coords(ci, _unit_vec(dim, j)):
                return (i, j)
            if i != j and lhs != algebra.bracket_coords(
                _unit_vec(dim, i), endo.column(j)
            ):
                return (i, j)
    return None


def quasicentroid_violation(
    algebra: GradedAlgebra, endo: Endo
) -> tuple[int, int] | None:
    """First basis pair with [fX, Y] != [X, fY], or None."""
    dim = algebra.dim
    for i in range(dim):
        ci = endo.column(i)
        for j in range(i, dim):
            lhs = algebra.bracket_coords(ci, _unit_vec(dim, j))
            rhs = algebra.bracket_coords(_unit_vec(dim, i), endo.column(j))
            if lhs != rhs:
                return (i, j)
    return None


# -- m-derivations -----------------------------------------------------------


def mderivation_check(
    algebra: GradedAlgebra, endo: Endo, m: int, tuple_budget: int = 100_000
) -> bool:
    """Check the nested-Leibniz identity of order m on basis tuples.

    Enumerates m-tuples of basis indices in lexicographic order: False on the
    first violation, True when all dim^m tuples pass, and BudgetTooSmall when
    the budget runs out with no violation found (the answer is then unknown).
    """
    if m < 2:
        raise ValueError(f"m must be at least 2, got {m}")
    dim = algebra.dim
    cols = [tuple(endo.column(c)) for c in range(dim)]
    units = [tuple(_unit_vec(dim, c)) for c in range(dim)]
    memo: dict[tuple[int, ...], tuple] = {}

    def suffix(t: tuple[int, ...]):
        cached = memo.get(t)
        if cached is not None:
            return cached
        if len(t) == 1:
            res = (units[t[0]], cols[t[0]])
        else:
            v2, w2 = suffix(t[1:])
            v = algebra.bracket_coords(units[t[0]], v2)
            w = [
                a + b
                for a, b in zip(
                    algebra.bracket_coords(cols[t[0]], v2),
                    algebra.bracket_coords(units[t[0]], w2),
                )
            ]
            res = (v, w)
        memo[t] = res
        return res

    total = dim**m
    count = 0
    for tup in itertools.product(range(dim), repeat=m):
        if count >= tuple_budget:
            raise BudgetTooSmall(total, tuple_budget)
        count += 1
        v, w = suffix(tup)
        if endo.apply_coords(v) != list(w):
            return False
    return True


def solve_mder_minus2(
    algebra: GradedAlgebra, m: int, tuple_budget: int = 100_000
) -> SolutionSpace:
    """Degree -2 maps, null off the degree-one slice, that are odd m-derivations.

    Three of the defining conditions are finite linear constraints; the
    nested-bracket condition is imposed over basis m-tuples enumerated in
    lexicographic order within the budget.  When the budget truncates the
    enumeration the returned space is an over-approximation and is flagged
    with exhaustive=False.
    """
    if m < 3 or m % 2 == 0:
        raise ValueError(f"m must be odd and at least 3, got {m}")
    dim = algebra.dim
    deg = algebra.degrees
    width = dim * dim
    p1 = list(algebra.indices_of_degree(1))
    pm1 = list(algebra.indices_of_degree(-1))
    p0 = list(algebra.indices_of_degree(0))
    if not p1 or not pm1:
        space = Subspace.zero(width)
        return SolutionSpace(MDER_MINUS2, 1, space, degree_blocks={}, exhaustive=True)

    unknowns = [(r, c) for c in p1 for r in pm1]
    local = {rc: i for i, rc in enumerate(unknowns)}
    rows: list[dict[int, Fraction]] = []

    def add_row(entries: dict[tuple[int, int], Fraction]) -> None:
        row = {local[rc]: v for rc, v in entries.items() if v}
        if row:
            rows.append(row)

    # [D(P1), X_j] = 0 for every basis element of nonzero degree
    for c in p1:
        for j in range(dim):
            if deg[j] == 0:
                continue
            for l in range(dim):
                entries = {}
                for r in pm1:
                    v = algebra.sc(r, j)[l]
                    if v:
                        entries[(r, c)] = v
                add_row(entries)

    # D[X_i, Y] = [D(Y), X_i] on P0 x P1
    for i in p0:
        for c in p1:
            s = algebra.sc(i, c)
            for l in pm1:
                entries: dict[tuple[int, int], Fraction] = {}
                for a in p1:
                    if s[a]:
                        entries[(l, a)] = entries.get((l, a), Fraction(0)) + s[a]
                for r in pm1:
                    v = algebra.sc(r, i)[l]
                    if v:
                        entries[(r, c)] = entries.get((r, c), Fraction(0)) - v
                add_row(entries)

    # [D(P1), w] = 0 for w spanning [P, P] meet P0
    dd = derived_data(algebra)
    p0_span = Subspace.from_vectors(dim, [_unit_vec(dim, k) for k in p0])
    _, derived_p0 = sum_and_intersection(dd.derived, p0_span)
    for c in p1:
        for w in derived_p0.basis:
            for l in range(dim):
                entries = {}
                for r in pm1:
                    s = Fraction(0)
                    for j, wj in enumerate(w):
                        if wj:
                            s += wj * algebra.sc(r, j)[l]
                    if s:
                        entries[(r, c)] = s
                add_row(entries)

    # nested brackets landing in P1 whose first degree-one entry is preceded
    # by an entry of degree -1 or >= 2 must be annihilated by D
    exhaustive = True
    total = dim**m
    if total > tuple_budget:
        exhaustive = False
    units = [tuple(_unit_vec(dim, c)) for c in range(dim)]
    memo: dict[tuple[int, ...], tuple] = {}

    def nested(t: tuple[int, ...]):
        cached = memo.get(t)
        if cached is not None:
            return cached
        if len(t) == 1:
            res = units[t[0]]
        else:
            res = tuple(algebra.bracket_coords(units[t[0]], nested(t[1:])))
        memo[t] = res
        return res

    count = 0
    for tup in itertools.product(range(dim), repeat=m):
        if count >= tuple_budget:
            break
        count += 1
        if sum(deg[k] for k in tup) != 1:
            continue
        first_one = next((pos for pos, k in enumerate(tup) if deg[k] == 1), None)
        if first_one is None:
            continue
        if not any(
            deg[tup[pos]] == -1 or deg[tup[pos]] >= 2 for pos in range(first_one)
        ):
            continue
        b = nested(tup)
        if not any(b):
            continue
        for l in pm1:
            entries = {}
            for a in p1:
                if b[a]:
                    entries[(l, a)] = b[a]
            add_row(entries)

    ker = kernel(RatMatrix.from_row_dicts(len(unknowns), rows))
    vectors = []
    for v in ker.basis:
        full = [Fraction(0)] * width
        for i, (r, c) in enumerate(unknowns):
            full[r * dim + c] = v[i]
        vectors.append(full)
    space = Subspace.from_vectors(width, vectors)
    blocks = {-2: space} if space.dim else {}
    return SolutionSpace(MDER_MINUS2, 1, space, degree_blocks=blocks, exhaustive=exhaustive)
