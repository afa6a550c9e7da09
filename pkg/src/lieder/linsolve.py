"""Exact sparse rational linear algebra: kernels, membership, sums, quotients.

The kernel routine clears denominators row by row and eliminates with
integer cross-multiplication plus gcd stripping, so intermediate entries stay
integral; rational arithmetic only reappears during back-substitution and the
final reduction to a reduced echelon basis.  Reduced echelon form is unique,
hence two Subspace values are equal as subspaces iff they are structurally
equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class NotASubspace(ValueError):
    """Raised by quotient_dim when the claimed subspace is not contained."""


@dataclass(frozen=True)
class RatMatrix:
    """Sparse rows x cols matrix over Q; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction]

    def __post_init__(self) -> None:
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                raise ValueError(f"stored zero entry at ({r}, {c})")

    @classmethod
    def from_row_dicts(
        cls, cols: int, rows: Iterable[Mapping[int, Fraction | int]]
    ) -> "RatMatrix":
        entries = {}
        nrows = 0
        for r, row in enumerate(rows):
            nrows = r + 1
            for c, v in row.items():
                if v:
                    entries[(r, c)] = Fraction(v)
        return cls(nrows, cols, entries)

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def apply(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != cols {self.cols}")
        out = [Fraction(0)] * self.rows
        for (r, c), a in self.entries.items():
            out[r] += a * v[c]
        return out


def _int_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    if not row:
        return {}
    scale = math.lcm(*(v.denominator for v in row.values()))
    ints = {c: int(v * scale) for c, v in row.items() if v}
    return _strip_gcd(ints)


def _strip_gcd(row: dict[int, int]) -> dict[int, int]:
    if not row:
        return row
    g = math.gcd(*row.values())
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _eliminate(row: dict[int, int], prow: dict[int, int], lead: int) -> dict[int, int]:
    # row := a*row - b*prow with a = prow[lead], b = row[lead]; kills column lead.
    a, b = prow[lead], row[lead]
    out = {c: a * v for c, v in row.items()}
    for c, v in prow.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _strip_gcd(out)


def kernel(m: RatMatrix) -> Subspace:
    """Right kernel {v : Mv = 0} with the unique reduced echelon basis."""
    pivots: dict[int, dict[int, int]] = {}
    for row in m.row_dicts():
        cur = _int_row(row)
        while cur:
            lead = min(cur)
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = cur
                break
            cur = _eliminate(cur, prow, lead)
    pivot_cols = sorted(pivots)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for lead in reversed(pivot_cols):
            prow = pivots[lead]
            s = Fraction(0)
            for c, coef in prow.items():
                if c != lead and v[c]:
                    s += coef * v[c]
            if s:
                v[lead] = -s / prow[lead]
        basis.append(v)
    return Subspace.from_vectors(m.cols, basis)


def _rref(width: int, vectors: Iterable[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    rows = [list(map(Fraction, v)) for v in vectors]
    rows = [r for r in rows if any(r)]
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        if pv != 1:
            rows[rank] = [x / pv for x in rows[rank]]
        lead_row = rows[rank]
        for i, other in enumerate(rows):
            if i != rank and other[col]:
                f = other[col]
                rows[i] = [a - f * b for a, b in zip(other, lead_row)]
        rank += 1
        if rank == len(rows):
            break
    rows = [r for r in rows[:rank] if any(r)]
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held by its reduced echelon basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_vectors(
        cls, ambient_dim: int, vectors: Iterable[Sequence[Fraction]]
    ) -> "Subspace":
        vecs = list(vectors)
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError(f"vector length {len(v)} != ambient {ambient_dim}")
        return cls(ambient_dim, _rref(ambient_dim, vecs))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Fraction | int]) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector length {len(v)} != ambient {self.ambient_dim}")
        w = [Fraction(x) for x in v]
        for row in self.basis:
            lead = next(i for i, x in enumerate(row) if x)
            f = w[lead]
            if f:
                for i, x in enumerate(row):
                    if x:
                        w[i] -= f * x
        return not any(w)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)


def contains(s: Subspace, v: Sequence[Fraction | int]) -> bool:
    """Membership of a coordinate vector in the span of s."""
    return s.contains(v)


def sum_and_intersection(a: Subspace, b: Subspace) -> tuple[Subspace, Subspace]:
    """(A + B, A intersect B) via the Zassenhaus double-block reduction."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"ambient mismatch: {a.ambient_dim} != {b.ambient_dim}"
        )
    w = a.ambient_dim
    stacked = [list(v) + list(v) for v in a.basis]
    stacked += [list(v) + [Fraction(0)] * w for v in b.basis]
    ech = _rref(2 * w, stacked)
    sum_rows, int_rows = [], []
    for row in ech:
        left, right = row[:w], row[w:]
        if any(left):
            sum_rows.append(left)
        else:
            int_rows.append(right)
    return Subspace.from_vectors(w, sum_rows), Subspace.from_vectors(w, int_rows)


def quotient_dim(a: Subspace, b: Subspace) -> int:
    """dim(A/B); requires B to be a subspace of A."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"ambient mismatch: {a.ambient_dim} != {b.ambient_dim}"
        )
    for v in b.basis:
        if not a.contains(v):
            raise NotASubspace("B is not contained in A")
    return a.dim - b.dim
