"""Closure, grading and structure constants for polynomial vector field algebras.

close_and_grade splits the generators into homogeneous parts, closes them
under the bracket (aborting past the degree cap), sorts the resulting basis
canonically, and records structure constants, the grading and the standing
hypothesis flags.  Everything downstream works in coordinates with respect to
this basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linsolve import Subspace, RatMatrix, kernel, sum_and_intersection
from .polyvec import (
    DimensionMismatch,
    PolyVectorField,
    bracket,
    constant_field,
    diagonal_field,
    euler,
    homogeneous_parts,
    make_field,
)

DEFAULT_DEGREE_CAP = 12

MonoKey = tuple[tuple[int, ...], int]


class CapExceeded(RuntimeError):
    """Closure produced an element above the degree cap."""

    def __init__(self, degree: int):
        self.degree = degree
        super().__init__(f"closure escaped the degree cap at degree {degree}")


class MissingConstants(ValueError):
    """The closed algebra does not contain every constant field d/dx^i."""


class MissingEuler(ValueError):
    """The closed algebra does not contain the Euler field."""


class NotInAlgebra(ValueError):
    """A field lies outside the span of the algebra's basis."""


@dataclass(frozen=True)
class AlgebraSpec:
    """Generators for an algebra on R^n plus the closure degree cap."""

    n: int
    generators: tuple[PolyVectorField, ...]
    degree_cap: int | None = DEFAULT_DEGREE_CAP


@dataclass(frozen=True)
class AlgebraFlags:
    contains_all_constants: bool
    contains_euler: bool
    contains_all_diagonal: bool
    is_separated: bool
    diagonal_equals_p0: bool
    h0_subset_p0: bool

    def as_dict(self) -> dict[str, bool]:
        return dict(self.__dict__)


def _monovec(field: PolyVectorField) -> dict[MonoKey, Fraction]:
    return {(t.exponents, t.direction): t.coeff for t in field.terms}


class _SpanTracker:
    """Incremental reduced echelon span of same-degree fields, with coordinates.

    Rows are kept fully reduced against each other (pivot coefficient one,
    pivots cleared from all other rows), so a single ascending pass both tests
    membership and produces exact coordinates in the tracked basis.
    """

    def __init__(self) -> None:
        # (pivot_key, monomial vector, coordinates in the tracked fields)
        self.rows: list[tuple[MonoKey, dict[MonoKey, Fraction], dict[int, Fraction]]] = []

    def reduce(
        self, vec: dict[MonoKey, Fraction]
    ) -> tuple[dict[MonoKey, Fraction], dict[int, Fraction]]:
        vec = dict(vec)
        combo: dict[int, Fraction] = {}
        for pivot, rvec, rcombo in self.rows:
            f = vec.get(pivot)
            if not f:
                continue
            for k, v in rvec.items():
                w = vec.get(k, Fraction(0)) - f * v
                if w:
                    vec[k] = w
                else:
                    vec.pop(k, None)
            for k, v in rcombo.items():
                acc = combo.get(k, Fraction(0)) + f * v
                if acc:
                    combo[k] = acc
                else:
                    combo.pop(k, None)
        return vec, combo

    def add(self, vec: dict[MonoKey, Fraction], index: int) -> bool:
        """Register field ``index`` with monomial vector ``vec``.

        Returns False when the field is already in the span.
        """
        rem, combo = self.reduce(vec)
        if not rem:
            return False
        pivot = min(rem)
        pv = rem[pivot]
        row_vec = {k: v / pv for k, v in rem.items()}
        row_combo = {index: Fraction(1, 1) / pv}
        for k, v in combo.items():
            row_combo[k] = -v / pv
        # keep full reduction: clear the new pivot from every existing row
        for i, (p, rvec, rcombo) in enumerate(self.rows):
            f = rvec.get(pivot)
            if not f:
                continue
            new_vec = dict(rvec)
            for k, v in row_vec.items():
                w = new_vec.get(k, Fraction(0)) - f * v
                if w:
                    new_vec[k] = w
                else:
                    new_vec.pop(k, None)
            new_combo = dict(rcombo)
            for k, v in row_combo.items():
                acc = new_combo.get(k, Fraction(0)) - f * v
                if acc:
                    new_combo[k] = acc
                else:
                    new_combo.pop(k, None)
            self.rows[i] = (p, new_vec, new_combo)
        self.rows.append((pivot, row_vec, row_combo))
        self.rows.sort(key=lambda r: r[0])
        return True

    def coordinates(self, vec: dict[MonoKey, Fraction]) -> dict[int, Fraction] | None:
        rem, combo = self.reduce(vec)
        return None if rem else combo


class GradedAlgebra:
    """A closed, graded algebra of polynomial vector fields with a fixed basis.

    Immutable after construction; all solvers address elements by their
    coordinates in ``basis`` (sorted by degree, then by the canonical field
    order).  ``structure_constants[(i, j)]`` holds the coordinates of
    [basis_i, basis_j] for every ordered pair.
    """

    def __init__(
        self,
        n: int,
        basis: tuple[PolyVectorField, ...],
        degrees: tuple[int, ...],
        adjoined: tuple[bool, ...],
        trackers: dict[int, _SpanTracker],
        flags: AlgebraFlags,
        degree_cap: int | None,
    ):
        self.n = n
        self.basis = basis
        self.degrees = degrees
        self.adjoined = adjoined
        self.dim = len(basis)
        self.flags = flags
        self.degree_cap = degree_cap
        self._trackers = trackers
        self.grading: dict[int, range] = {}
        start = 0
        for d, group in itertools.groupby(range(self.dim), key=lambda i: degrees[i]):
            idxs = list(group)
            self.grading[d] = range(start, start + len(idxs))
            start += len(idxs)
        self.structure_constants: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        zero = tuple([Fraction(0)] * self.dim)
        for i in range(self.dim):
            self.structure_constants[(i, i)] = zero
            for j in range(i + 1, self.dim):
                b = bracket(basis[i], basis[j])
                coords = self._coords_homogeneous(b)
                if coords is None:
                    raise RuntimeError("closure invariant broken: bracket left the span")
                self.structure_constants[(i, j)] = coords
                self.structure_constants[(j, i)] = tuple(-v for v in coords)

    # -- coordinates ---------------------------------------------------------

    def _coords_homogeneous(self, x: PolyVectorField) -> tuple[Fraction, ...] | None:
        out = [Fraction(0)] * self.dim
        for part in homogeneous_parts(x):
            tracker = self._trackers.get(part.degree)
            if tracker is None:
                return None
            combo = tracker.coordinates(_monovec(part.field))
            if combo is None:
                return None
            for k, v in combo.items():
                out[k] = v
        return tuple(out)

    def coordinates(self, x: PolyVectorField) -> tuple[Fraction, ...]:
        """Exact coordinates of x in the basis; NotInAlgebra if outside the span."""
        if x.n != self.n:
            raise DimensionMismatch(f"field on R^{x.n}, algebra on R^{self.n}")
        coords = self._coords_homogeneous(x)
        if coords is None:
            raise NotInAlgebra(f"field is not in the algebra's span")
        return coords

    def contains_field(self, x: PolyVectorField) -> bool:
        return x.n == self.n and self._coords_homogeneous(x) is not None

    def field_of(self, coords) -> PolyVectorField:
        out = make_field(self.n, [])
        for c, b in zip(coords, self.basis):
            if c:
                out = out + Fraction(c) * b
        return out

    def sc(self, i: int, j: int) -> tuple[Fraction, ...]:
        return self.structure_constants[(i, j)]

    def bracket_coords(self, u, v) -> list[Fraction]:
        """Coordinates of [U, V] for coordinate vectors u, v."""
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                s = self.structure_constants[(i, j)]
                ab = a * b
                for l, c in enumerate(s):
                    if c:
                        out[l] += ab * c
        return out

    def indices_of_degree(self, d: int) -> range:
        return self.grading.get(d, range(0, 0))

    @property
    def max_degree(self) -> int:
        return max(self.grading) if self.grading else -1

    def euler_coords(self) -> tuple[Fraction, ...]:
        return self.coordinates(euler(self.n))

    def __repr__(self) -> str:
        return f"GradedAlgebra(n={self.n}, dim={self.dim}, grading={{ {', '.join(f'{d}: {len(r)}' for d, r in sorted(self.grading.items()))} }})"


def close_and_grade(
    spec: AlgebraSpec, *, allow_nonstandard: bool = False
) -> GradedAlgebra:
    """Close the generators under the bracket and grade the result.

    Generators are split into homogeneous parts and pairs are processed in
    canonical order, adjoining each independent bracket value (scaled so its
    leading monomial has coefficient one) immediately.  A nonzero independent
    bracket value of degree above the cap raises CapExceeded.  Unless
    ``allow_nonstandard`` is set, the closed algebra must contain every
    constant field and the Euler field.
    """
    n = spec.n
    if n < 1:
        raise DimensionMismatch(f"ambient dimension must be positive, got {n}")
    cap = spec.degree_cap
    work: list[PolyVectorField] = []
    work_degrees: list[int] = []
    adjoined: list[bool] = []
    trackers: dict[int, _SpanTracker] = {}

    def try_add(field: PolyVectorField, from_closure: bool) -> None:
        if field.is_zero():
            return
        d = field.degree()
        tracker = trackers.setdefault(d, _SpanTracker())
        vec = _monovec(field)
        if tracker.coordinates(vec) is not None:
            return
        if from_closure:
            if cap is not None and d > cap:
                raise CapExceeded(d)
            lead = field.terms[0].coeff
            if lead != 1:
                field = field * (Fraction(1) / lead)
                vec = _monovec(field)
        index = len(work)
        work.append(field)
        work_degrees.append(d)
        adjoined.append(from_closure)
        tracker.add(vec, index)

    for g in spec.generators:
        if g.n != n:
            raise DimensionMismatch(f"generator on R^{g.n}, spec on R^{n}")
        for part in homogeneous_parts(g):
            try_add(part.field, from_closure=False)

    j = 1
    while j < len(work):
        for i in range(j):
            try_add(bracket(work[i], work[j]), from_closure=True)
        j += 1

    order = sorted(
        range(len(work)), key=lambda k: (work_degrees[k], work[k].sort_key())
    )
    basis = tuple(work[k] for k in order)
    degrees = tuple(work_degrees[k] for k in order)
    adjoined_sorted = tuple(adjoined[k] for k in order)

    final_trackers: dict[int, _SpanTracker] = {}
    for idx, field in enumerate(basis):
        final_trackers.setdefault(degrees[idx], _SpanTracker()).add(
            _monovec(field), idx
        )

    def in_span(field: PolyVectorField) -> bool:
        if field.is_zero():
            return True
        tracker = final_trackers.get(field.degree())
        return tracker is not None and tracker.coordinates(_monovec(field)) is not None

    has_constants = all(in_span(constant_field(n, i + 1)) for i in range(n))
    has_euler = in_span(euler(n))
    has_diagonal = all(in_span(diagonal_field(n, i + 1)) for i in range(n))
    # a degree slice is spanned by monomials iff each reduced row is a monomial
    separated = all(
        len(rvec) == 1
        for tracker in final_trackers.values()
        for _, rvec, _ in tracker.rows
    )
    p0_dim = len(final_trackers[0].rows) if 0 in final_trackers else 0
    flags = AlgebraFlags(
        contains_all_constants=has_constants,
        contains_euler=has_euler,
        contains_all_diagonal=has_diagonal,
        is_separated=separated,
        diagonal_equals_p0=has_diagonal and p0_dim == n,
        h0_subset_p0=p0_dim == n * n,
    )
    if not allow_nonstandard:
        if not has_constants:
            missing = [i + 1 for i in range(n) if not in_span(constant_field(n, i + 1))]
            raise MissingConstants(
                f"closed algebra is missing constant fields in directions {missing}"
            )
        if not has_euler:
            raise MissingEuler("closed algebra does not contain the Euler field")
    return GradedAlgebra(
        n, basis, degrees, adjoined_sorted, final_trackers, flags, cap
    )


@dataclass(frozen=True)
class DerivedData:
    """Bracket-generated subspaces of the algebra, in basis coordinates.

    ``p0_complement`` is the span of the lexicographically earliest degree-zero
    basis vectors completing P0 meet [P, P] inside P0 (the complement choice is
    a convention; only its dimension is canonical).  ``hypothesis_a`` records
    whether [P1, P-1] lies inside [P0, P0].
    """

    derived: Subspace
    p0_complement: Subspace
    p1_p_minus1: Subspace
    hypothesis_a: bool


def derived_data(algebra: GradedAlgebra) -> DerivedData:
    dim = algebra.dim
    all_brackets = [
        algebra.sc(i, j) for i in range(dim) for j in range(i + 1, dim)
    ]
    derived = Subspace.from_vectors(dim, all_brackets)
    p1 = algebra.indices_of_degree(1)
    pm1 = algebra.indices_of_degree(-1)
    p0 = algebra.indices_of_degree(0)
    p1_pm1 = Subspace.from_vectors(
        dim, [algebra.sc(i, j) for i in p1 for j in pm1]
    )
    p00 = Subspace.from_vectors(dim, [algebra.sc(i, j) for i in p0 for j in p0])
    hypothesis_a = p00.contains_subspace(p1_pm1)
    p0_span = Subspace.from_vectors(
        dim, [_unit(dim, k) for k in p0]
    )
    _, p0_meet_derived = sum_and_intersection(p0_span, derived)
    chosen: list[list[Fraction]] = []
    current = p0_meet_derived
    for k in p0:
        e = _unit(dim, k)
        if not current.contains(e):
            chosen.append(e)
            current, _ = sum_and_intersection(
                current, Subspace.from_vectors(dim, [e])
            )
    return DerivedData(
        derived=derived,
        p0_complement=Subspace.from_vectors(dim, chosen),
        p1_p_minus1=p1_pm1,
        hypothesis_a=hypothesis_a,
    )


def _unit(dim: int, k: int) -> list[Fraction]:
    v = [Fraction(0)] * dim
    v[k] = Fraction(1)
    return v


# -- truncated ambient space ------------------------------------------------


def truncated_ambient_basis(n: int, cap: int) -> list[PolyVectorField]:
    """Monomial fields of degree -1..cap in canonical order."""
    out = []
    for total in range(0, cap + 2):
        exps_list = sorted(
            e
            for e in itertools.product(range(total + 1), repeat=n)
            if sum(e) == total
        )
        for exps in exps_list:
            for direction in range(1, n + 1):
                out.append(make_field(n, [(1, exps, direction)]))
    return out


def _ambient_layout(n: int, cap: int):
    monos = truncated_ambient_basis(n, cap)
    by_degree: dict[int, list[int]] = {}
    key_to_index: dict[MonoKey, int] = {}
    for idx, m in enumerate(monos):
        t = m.terms[0]
        by_degree.setdefault(t.degree, []).append(idx)
        key_to_index[(t.exponents, t.direction)] = idx
    return monos, by_degree, key_to_index


def algebra_span_in_ambient(algebra: GradedAlgebra, cap: int) -> Subspace:
    """The algebra's span in the coordinates of truncated_ambient_basis."""
    if algebra.max_degree > cap:
        raise ValueError(f"cap {cap} below the algebra's max degree {algebra.max_degree}")
    monos, _, key_to_index = _ambient_layout(algebra.n, cap)
    vectors = []
    for b in algebra.basis:
        v = [Fraction(0)] * len(monos)
        for t in b.terms:
            v[key_to_index[(t.exponents, t.direction)]] = t.coeff
        vectors.append(v)
    return Subspace.from_vectors(len(monos), vectors)


def centralizer_in_truncated_ambient(algebra: GradedAlgebra, ambient_cap: int) -> Subspace:
    """{X of degree <= cap : [X, b] = 0 for every basis element b}."""
    return _commutation_solution(algebra, ambient_cap, modulo_algebra=False)


def normalizer_in_truncated_ambient(algebra: GradedAlgebra, ambient_cap: int) -> Subspace:
    """{X of degree <= cap : [X, b] in the algebra for every basis element b}."""
    return _commutation_solution(algebra, ambient_cap, modulo_algebra=True)


def _commutation_solution(
    algebra: GradedAlgebra, ambient_cap: int, *, modulo_algebra: bool
) -> Subspace:
    if ambient_cap < algebra.max_degree:
        raise ValueError(
            f"ambient cap {ambient_cap} below the algebra's max degree {algebra.max_degree}"
        )
    n = algebra.n
    monos, by_degree, _ = _ambient_layout(n, ambient_cap)
    width = len(monos)
    all_vectors: list[list[Fraction]] = []
    # the condition is degree-separable: solve one block per ambient degree
    for d, idxs in sorted(by_degree.items()):
        local = {g: i for i, g in enumerate(idxs)}
        rows: dict[tuple, dict[int, Fraction]] = {}
        for g in idxs:
            mono = monos[g]
            for k, b in enumerate(algebra.basis):
                out = bracket(mono, b)
                if out.is_zero():
                    continue
                if modulo_algebra:
                    tracker = algebra._trackers.get(out.degree())
                    rem = (
                        tracker.reduce(_monovec(out))[0]
                        if tracker is not None
                        else _monovec(out)
                    )
                    items = rem.items()
                else:
                    items = _monovec(out).items()
                for key, coeff in items:
                    rows.setdefault((k, key), {})[local[g]] = coeff
        ker = kernel(RatMatrix.from_row_dicts(len(idxs), list(rows.values())))
        for v in ker.basis:
            full = [Fraction(0)] * width
            for i, g in enumerate(idxs):
                full[g] = v[i]
            all_vectors.append(full)
    return Subspace.from_vectors(width, all_vectors)
