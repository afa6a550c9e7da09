import pytest

from lieder import (
    HypothesisFailed,
    check_c_eq_qc,
    check_centroid_form,
    check_centralizer,
    check_gender_sum,
    check_grading,
    check_h1,
    check_main_decomposition,
    check_qder_split,
    inner_derivations,
    run_all_checks,
    solve_centroid,
    solve_derivations,
    solve_generalized,
    solve_quasicentroid,
    solve_quasiderivations,
)
from lieder.structure import (
    MAIN_DECOMP,
    NOT_APPLICABLE,
    free_g_component,
    gender_k_component,
    minus2_blocks_are_odd_derivations,
    partial_identity_endo,
)
from lieder import derived_data


def test_grading_report(diag2, tower2):
    assert check_grading(diag2).conclusion_holds is True
    assert check_grading(tower2).conclusion_holds is True


def test_centralizer_report(diag2, shear2):
    for a in (diag2, shear2):
        r = check_centralizer(a)
        assert r.conclusion_holds is True


def test_h1_zero_applicable(diag2, tower2):
    for a in (diag2, tower2):
        r = check_h1(a, solve_derivations(a), inner_derivations(a))
        assert r.applicable and r.conclusion_holds is True


def test_h1_gated_when_diagonals_missing(shear2):
    r = check_h1(shear2, solve_derivations(shear2), inner_derivations(shear2))
    assert not r.applicable
    assert r.conclusion_holds is NOT_APPLICABLE


def test_centroid_form_diagonal_case(diag2):
    r = check_centroid_form(diag2, solve_centroid(diag2))
    assert r.conclusion_holds is True
    assert "Id_1" in r.notes


def test_centroid_form_euler_case(euler2):
    r = check_centroid_form(euler2, solve_centroid(euler2))
    assert r.conclusion_holds is True
    assert solve_centroid(euler2).space.dim == 1


def test_centroid_form_not_applicable_on_shear2(shear2):
    c = solve_centroid(shear2)
    r = check_centroid_form(shear2, c)
    assert r.conclusion_holds is NOT_APPLICABLE
    # the computed centroid strictly exceeds the scalars
    assert c.space.dim > 1


def test_partial_identity_maps(diag2):
    from lieder import Endo

    id1 = partial_identity_endo(diag2, 1)
    id2 = partial_identity_endo(diag2, 2)
    total = id1 + id2
    assert total.matrix == Endo.identity(diag2).matrix


def test_c_eq_qc_reports(diag2, shear2, shear3):
    for a in (diag2, shear2, shear3):
        r = check_c_eq_qc(a, solve_centroid(a), solve_quasicentroid(a))
        assert r.conclusion_holds is True


def test_qder_split_reports(diag2, shear3, tower2):
    for a in (diag2, shear3, tower2):
        r = check_qder_split(a, solve_quasiderivations(a))
        assert r.conclusion_holds is True


def test_gender_sum_reports(diag2, shear2, euler2, shear3, tower2):
    for a in (diag2, shear2, euler2, shear3, tower2):
        r = check_gender_sum(
            a,
            solve_quasiderivations(a),
            solve_quasicentroid(a),
            solve_generalized(a),
        )
        assert r.conclusion_holds is True


def test_main_decomposition_diag2(diag2):
    r = check_main_decomposition(diag2, solve_generalized(diag2))
    assert r.conclusion_holds is True
    assert "family size 2" in r.notes


def test_main_decomposition_tower2(tower2):
    r = check_main_decomposition(tower2, solve_generalized(tower2))
    assert r.conclusion_holds is True
    # the non-diagonal linear element suppresses the degree-one family
    assert "family size 0" in r.notes


def test_main_decomposition_hypothesis_gate(shear2):
    with pytest.raises(HypothesisFailed) as err:
        check_main_decomposition(shear2, solve_generalized(shear2))
    assert "all_diagonal_linear_fields_present" in err.value.failed


def test_k_component_shapes(diag2):
    gender = solve_generalized(diag2)
    k = gender_k_component(diag2, gender)
    dd = derived_data(diag2)
    free = free_g_component(diag2, dd.derived)
    assert k.dim == free.dim == 8


def test_minus2_odd_derivation_gate(diag2, shear3):
    # diag2 has a two-dimensional degree-zero slice: not applicable
    applicable, ok = minus2_blocks_are_odd_derivations(
        diag2, solve_quasiderivations(diag2)
    )
    assert not applicable and ok
    # shear3's degree-zero slice is <E, x dz>: also gated
    applicable, ok = minus2_blocks_are_odd_derivations(
        shear3, solve_quasiderivations(shear3)
    )
    assert not applicable


def test_run_all_checks_no_failures(diag2, shear2, euler2, pentad2, shear3, tower2):
    for a in (diag2, shear2, euler2, pentad2, shear3, tower2):
        for r in run_all_checks(a):
            assert r.conclusion_holds is not False, (a, r.theorem_id, r.notes)


def test_run_all_checks_main_decomp_gate(shear2):
    reports = {r.theorem_id: r for r in run_all_checks(shear2)}
    assert reports[MAIN_DECOMP].conclusion_holds is NOT_APPLICABLE
    assert "hypotheses failed" in reports[MAIN_DECOMP].notes


def test_reports_are_reproducible(diag2):
    a = run_all_checks(diag2)
    b = run_all_checks(diag2)
    assert [(r.theorem_id, r.conclusion_holds, r.notes) for r in a] == [
        (r.theorem_id, r.conclusion_holds, r.notes) for r in b
    ]
