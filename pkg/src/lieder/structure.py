"""Classification checks over computed solution spaces.

Every check returns a TheoremReport naming the hypotheses it tested and a
conclusion; a report is NOT_APPLICABLE (conclusion None) whenever a required
hypothesis fails.  Conclusions compare subspaces in reduced echelon form,
never chosen bases element-wise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    DerivedData,
    GradedAlgebra,
    NotInAlgebra,
    centralizer_in_truncated_ambient,
    derived_data,
)
from .derspaces import (
    Endo,
    SolutionSpace,
    constrain_to_zero,
    degree_filter,
    f_projection,
    inner_derivations,
    mderivation_check,
    solve_centroid,
    solve_derivations,
    solve_generalized,
    solve_quasicentroid,
    solve_quasiderivations,
    vanishing_on_E_subspace,
)
from .linsolve import RatMatrix, Subspace, kernel, quotient_dim, sum_and_intersection
from .polyvec import bracket, diagonal_field

GRADING_LEMMA = "GRADING_LEMMA"
CENTRALIZER_ZERO = "CENTRALIZER_ZERO"
H1_ZERO = "H1_ZERO"
CENTROID_FORM = "CENTROID_FORM"
C_EQ_QC = "C_EQ_QC"
QDER_SPLIT = "QDER_SPLIT"
GENDER_SUM = "GENDER_SUM"
MAIN_DECOMP = "MAIN_DECOMP"

NOT_APPLICABLE = None


class HypothesisFailed(RuntimeError):
    """A check was invoked on an algebra violating its hypotheses."""

    def __init__(self, failed: tuple[str, ...]):
        self.failed = failed
        super().__init__(f"hypotheses failed: {', '.join(failed)}")


@dataclass
class TheoremReport:
    theorem_id: str
    hypotheses_checked: tuple[tuple[str, bool], ...]
    conclusion_holds: bool | None
    witnesses: tuple = ()
    notes: str = ""

    @property
    def applicable(self) -> bool:
        return all(ok for _, ok in self.hypotheses_checked)


def check_grading(algebra: GradedAlgebra) -> TheoremReport:
    """[P_i, P_j] lies in P_{i+j} and every basis element is homogeneous."""
    ok = all(b.is_homogeneous() for b in algebra.basis)
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            target = algebra.indices_of_degree(
                algebra.degrees[i] + algebra.degrees[j]
            )
            for l, v in enumerate(algebra.sc(i, j)):
                if v and l not in target:
                    ok = False
    return TheoremReport(GRADING_LEMMA, (), ok)


def center_subspace(algebra: GradedAlgebra) -> Subspace:
    """{v in P : [v, P] = 0}, from the structure constants."""
    dim = algebra.dim
    rows = []
    for j in range(dim):
        for l in range(dim):
            row = {}
            for i in range(dim):
                v = algebra.sc(i, j)[l]
                if v:
                    row[i] = v
            if row:
                rows.append(row)
    return kernel(RatMatrix.from_row_dicts(dim, rows))


def check_centralizer(algebra: GradedAlgebra, ambient_cap: int | None = None) -> TheoremReport:
    """The centralizer in the truncated ambient space, and the center, are zero."""
    cap = ambient_cap if ambient_cap is not None else algebra.max_degree + 3
    cent = centralizer_in_truncated_ambient(algebra, cap)
    center = center_subspace(algebra)
    ok = cent.dim == 0 and center.dim == 0
    return TheoremReport(
        CENTRALIZER_ZERO,
        (),
        ok,
        notes=f"ambient cap {cap}: centralizer dim {cent.dim}, center dim {center.dim}",
    )


def check_h1(
    algebra: GradedAlgebra, der: SolutionSpace, ad: SolutionSpace
) -> TheoremReport:
    """All diagonal linear fields present implies Der(P) = ad(P)."""
    hyp = (
        ("all_diagonal_linear_fields_present", algebra.flags.contains_all_diagonal),
    )
    if not algebra.flags.contains_all_diagonal:
        return TheoremReport(H1_ZERO, hyp, NOT_APPLICABLE)
    q = quotient_dim(der.space, ad.space)
    return TheoremReport(
        H1_ZERO,
        hyp,
        q == 0,
        notes=f"dim Der = {der.space.dim}, dim ad = {ad.space.dim}, dim H1 = {q}",
    )


def _p0_coefficient(algebra: GradedAlgebra, index: int, direction: int) -> Fraction:
    # coefficient of x^direction d/dx^direction in a degree-zero basis element
    b = algebra.basis[index]
    for t in b.terms:
        if t.direction == direction and t.exponents == tuple(
            1 if s == direction - 1 else 0 for s in range(algebra.n)
        ):
            return t.coeff
    return Fraction(0)


def partial_identity_endo(algebra: GradedAlgebra, direction: int) -> Endo:
    """The centroid generator attached to one diagonal field x^i d/dx^i.

    Fixes x^i d/dx^i, kills the other diagonal degree-zero directions, and acts
    on a degree-m element (m != 0) as [x^i d/dx^i / m, .].  Raises NotInAlgebra
    when some image leaves the algebra.
    """
    xi = diagonal_field(algebra.n, direction)
    images = {}
    for k in range(algebra.dim):
        m = algebra.degrees[k]
        if m != 0:
            images[k] = Fraction(1, m) * bracket(xi, algebra.basis[k])
        else:
            images[k] = _p0_coefficient(algebra, k, direction) * xi
    return Endo.from_images(algebra, images)


def check_centroid_form(
    algebra: GradedAlgebra, centroid: SolutionSpace
) -> TheoremReport:
    """Compare the computed centroid against the predicted spanning family.

    Whole degree-zero slice present: span{Id}.  Degree-zero slice exactly the
    diagonal fields: span{Id, Id_1, ..., Id_n}.  Degree-zero slice spanned by
    the Euler field alone: span{Id}.  Otherwise no form is predicted.
    """
    flags = algebra.flags
    p0_dim = len(algebra.indices_of_degree(0))
    h0_sub = flags.h0_subset_p0
    diag_eq = flags.diagonal_equals_p0
    p0_euler = p0_dim == 1 and algebra.flags.contains_euler
    hyp = (
        ("whole_linear_slice_in_p0", h0_sub),
        ("p0_exactly_diagonal_fields", diag_eq),
        ("p0_spanned_by_euler", p0_euler),
    )
    if not (h0_sub or diag_eq or p0_euler):
        return TheoremReport(
            CENTROID_FORM,
            hyp,
            NOT_APPLICABLE,
            witnesses=(centroid.space,),
            notes=f"no predicted form; computed centroid has dim {centroid.space.dim}",
        )
    predicted = [Endo.identity(algebra).vec()]
    which = "span{Id}"
    if diag_eq and not h0_sub:
        try:
            for i in range(1, algebra.n + 1):
                predicted.append(partial_identity_endo(algebra, i).vec())
        except NotInAlgebra:
            return TheoremReport(
                CENTROID_FORM,
                hyp,
                False,
                notes="a predicted partial identity maps outside the algebra",
            )
        which = "span{Id, Id_1..Id_n}"
    span = Subspace.from_vectors(algebra.dim**2, predicted)
    ok = span == centroid.space
    return TheoremReport(
        CENTROID_FORM,
        hyp,
        ok,
        witnesses=(span,),
        notes=f"predicted {which} (dim {span.dim}) vs computed dim {centroid.space.dim}",
    )


def check_c_eq_qc(
    algebra: GradedAlgebra, centroid: SolutionSpace, qcentroid: SolutionSpace
) -> TheoremReport:
    ok = centroid.space == qcentroid.space
    return TheoremReport(
        C_EQ_QC,
        (),
        ok,
        notes=f"dim C = {centroid.space.dim}, dim QC = {qcentroid.space.dim}",
    )


def check_qder_split(
    algebra: GradedAlgebra, qder: SolutionSpace
) -> TheoremReport:
    """f-projection of QDer = degree-0 block + E-vanishing blocks + ad."""
    dim2 = algebra.dim**2
    fproj = f_projection(qder, algebra)
    blocks = degree_filter(qder, algebra)
    vectors: list = []
    if 0 in blocks:
        vectors += [v[:dim2] for v in blocks[0].basis]
    for d in blocks:
        vanishing = vanishing_on_E_subspace(qder, algebra, d)
        vectors += [v[:dim2] for v in vanishing.basis]
    ad = inner_derivations(algebra)
    vectors += list(ad.space.basis)
    span = Subspace.from_vectors(dim2, vectors)
    return TheoremReport(
        QDER_SPLIT,
        (),
        span == fproj,
        notes=f"split span dim {span.dim} vs f-projection dim {fproj.dim}",
    )


def check_gender_sum(
    algebra: GradedAlgebra,
    qder: SolutionSpace,
    qcentroid: SolutionSpace,
    gender: SolutionSpace,
) -> TheoremReport:
    """f-projection of GenDer equals f-projection of QDer plus QC."""
    fq = f_projection(qder, algebra)
    fg = f_projection(gender, algebra)
    total, meet = sum_and_intersection(fq, qcentroid.space)
    ok = total == fg
    return TheoremReport(
        GENDER_SUM,
        (),
        ok,
        notes=(
            f"dim f(QDer) = {fq.dim}, dim QC = {qcentroid.space.dim}, "
            f"dim overlap = {meet.dim}, dim sum = {total.dim}, dim f(GenDer) = {fg.dim}"
        ),
    )


def free_g_component(algebra: GradedAlgebra, derived: Subspace) -> Subspace:
    """Maps g with g([P, P]) = 0, i.e. the g-freedom K, in endo coordinates."""
    dim = algebra.dim
    rows = []
    for w in derived.basis:
        for r in range(dim):
            row = {}
            for c, wc in enumerate(w):
                if wc:
                    row[r * dim + c] = wc
            if row:
                rows.append(row)
    return kernel(RatMatrix.from_row_dicts(dim * dim, rows))


def gender_k_component(algebra: GradedAlgebra, gender: SolutionSpace) -> Subspace:
    """Solutions of the generalized system with zero f and h components."""
    dim2 = algebra.dim**2
    return constrain_to_zero(gender.space, list(range(2 * dim2)))


def fpp_family(algebra: GradedAlgebra) -> list[Endo]:
    """The degree-1 maps sending d/dx^j to x^j d/dx^j and all else to zero.

    Empty when the degree-zero slice contains a non-diagonal linear field.
    """
    n = algebra.n
    if len(algebra.indices_of_degree(0)) > n:
        return []
    out = []
    pm1 = algebra.indices_of_degree(-1)
    for j in range(1, n + 1):
        xj = diagonal_field(n, j)
        images = {}
        for k in pm1:
            beta = Fraction(0)
            for t in algebra.basis[k].terms:
                if t.direction == j and sum(t.exponents) == 0:
                    beta = t.coeff
            if beta:
                images[k] = beta * xj
        out.append(Endo.from_images(algebra, images))
    return out


def main_decomposition_hypotheses(
    algebra: GradedAlgebra, derived: DerivedData
) -> tuple[tuple[str, bool], ...]:
    flags = algebra.flags
    return (
        ("ambient_dimension_at_least_2", algebra.n >= 2),
        ("p1_brackets_inside_p0_brackets", derived.hypothesis_a),
        ("separated", flags.is_separated),
        ("all_diagonal_linear_fields_present", flags.contains_all_diagonal),
    )


def check_main_decomposition(
    algebra: GradedAlgebra,
    gender: SolutionSpace,
    *,
    qcentroid: SolutionSpace | None = None,
    derived: DerivedData | None = None,
) -> TheoremReport:
    """Generalized derivations decompose as QC + inner + degree-one family + K.

    The f-projection must equal the span of the quasicentroid, the adjoint
    matrices and the degree-one family, and the zero-(f, h) slice must be
    exactly the maps annihilating [P, P].  Raises HypothesisFailed when the
    algebra misses a hypothesis.
    """
    dd = derived if derived is not None else derived_data(algebra)
    hyp = main_decomposition_hypotheses(algebra, dd)
    failed = tuple(name for name, ok in hyp if not ok)
    if failed:
        raise HypothesisFailed(failed)
    qc = qcentroid if qcentroid is not None else solve_quasicentroid(algebra)
    ad = inner_derivations(algebra)
    family = fpp_family(algebra)
    dim2 = algebra.dim**2
    vectors = list(qc.space.basis) + list(ad.space.basis)
    vectors += [e.vec() for e in family]
    predicted_f = Subspace.from_vectors(dim2, vectors)
    fg = f_projection(gender, algebra)
    f_ok = predicted_f == fg

    k_computed = gender_k_component(algebra, gender)
    k_free = free_g_component(algebra, dd.derived)
    width = 3 * dim2
    embedded = []
    for g in k_free.basis:
        v = [Fraction(0)] * width
        for i, x in enumerate(g):
            v[2 * dim2 + i] = x
        embedded.append(v)
    k_predicted = Subspace.from_vectors(width, embedded)
    k_ok = k_computed == k_predicted

    return TheoremReport(
        MAIN_DECOMP,
        hyp,
        f_ok and k_ok,
        witnesses=(predicted_f, k_predicted),
        notes=(
            f"f-projection: predicted dim {predicted_f.dim} vs computed {fg.dim}; "
            f"degree-one family size {len(family)}; "
            f"K component: predicted dim {k_predicted.dim} vs computed {k_computed.dim}"
        ),
    )


def minus2_blocks_are_odd_derivations(
    algebra: GradedAlgebra,
    qder: SolutionSpace,
    m: int = 3,
    tuple_budget: int = 100_000,
) -> tuple[bool, bool]:
    """(applicable, holds): E-vanishing degree -2 quasiderivations are odd m-derivations.

    Applicable when the algebra is separated and its degree-zero slice is
    spanned by the Euler field alone.
    """
    applicable = (
        algebra.flags.is_separated and len(algebra.indices_of_degree(0)) == 1
    )
    if not applicable:
        return False, True
    dim2 = algebra.dim**2
    block = vanishing_on_E_subspace(qder, algebra, -2)
    ok = True
    for v in block.basis:
        endo = Endo.from_vec(algebra, v[:dim2])
        if not mderivation_check(algebra, endo, m, tuple_budget):
            ok = False
    return True, ok


def run_all_checks(
    algebra: GradedAlgebra,
    spaces: dict[str, SolutionSpace] | None = None,
    ambient_cap: int | None = None,
) -> list[TheoremReport]:
    """Run every applicable classification check, computing missing spaces."""
    spaces = dict(spaces or {})
    spaces.setdefault("ad", inner_derivations(algebra))
    spaces.setdefault("der", solve_derivations(algebra))
    spaces.setdefault("c", solve_centroid(algebra))
    spaces.setdefault("qc", solve_quasicentroid(algebra))
    spaces.setdefault("qder", solve_quasiderivations(algebra))
    spaces.setdefault("gender", solve_generalized(algebra))
    dd = derived_data(algebra)
    reports = [
        check_grading(algebra),
        check_centralizer(algebra, ambient_cap),
        check_h1(algebra, spaces["der"], spaces["ad"]),
        check_centroid_form(algebra, spaces["c"]),
        check_c_eq_qc(algebra, spaces["c"], spaces["qc"]),
        check_qder_split(algebra, spaces["qder"]),
        check_gender_sum(algebra, spaces["qder"], spaces["qc"], spaces["gender"]),
    ]
    try:
        reports.append(
            check_main_decomposition(
                algebra, spaces["gender"], qcentroid=spaces["qc"], derived=dd
            )
        )
    except HypothesisFailed as exc:
        reports.append(
            TheoremReport(
                MAIN_DECOMP,
                main_decomposition_hypotheses(algebra, dd),
                NOT_APPLICABLE,
                notes=f"hypotheses failed: {', '.join(exc.failed)}",
            )
        )
    return reports
