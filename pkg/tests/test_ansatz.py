from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bindet import ansatz
from bindet import closed_forms as cf
from bindet.ansatz import DegreeBounds, RecurrenceAnsatz
from bindet.arith import MU, RatFuncMu, poch
from bindet.families import FamilySpec, determinant, ratio_formula


# --- cofactor systems -------------------------------------------------------------

def test_sys1_smallest_case_matches_cofactors():
    c = ansatz.solve_cofactor_system("sys1", 2, 2)
    assert c[1] == 1
    assert c[2] == RatFuncMu(-1, (MU + 2).to_poly())
    assert list(c.values) == ansatz.cofactor_quotients(2, 2)


@pytest.mark.parametrize("s,n", [(2, 4), (3, 5), (4, 4), (2, 6)])
def test_sys1_matches_cofactor_quotients(s, n):
    c = ansatz.solve_cofactor_system("sys1", s, n)
    assert list(c.values) == ansatz.cofactor_quotients(s, n)


@settings(max_examples=15)
@given(st.permutations(range(5)))
def test_solution_independent_of_equation_order(perm):
    base = ansatz.solve_cofactor_system("sys1", 3, 5)
    shuffled = ansatz.solve_cofactor_system("sys1", 3, 5, permutation=perm)
    assert base.values == shuffled.values


def test_bad_permutation_and_system():
    with pytest.raises(ValueError):
        ansatz.solve_cofactor_system("sys1", 2, 3, permutation=[0, 0, 1])
    with pytest.raises(ValueError):
        ansatz.solve_cofactor_system("sys9", 2, 3)
    with pytest.raises(ValueError):
        ansatz.system_matrix("sys3", 1, 4)


def test_sys3_smallest_case():
    # sum_i c_i / (mu+i-2)_2 reproduces the quotient at m = 1
    c = ansatz.solve_cofactor_system("sys3", 1, 3)
    total = sum((c[i] * poch(MU + (i - 2), 2).inverse() for i in range(1, len(c) + 1)), RatFuncMu())
    assert total == cf.closed_form("quoED1", m=1)


# --- identities ---------------------------------------------------------------------

def test_identity_smallest_case():
    res = ansatz.verify_ansatz_identity("biglemma1", 2, 2)
    assert res.holds and not res.residual
    assert res.lhs == RatFuncMu((MU - 1).to_poly(), 2)
    ratio = RatFuncMu(determinant(FamilySpec("D", 2, 1, 2)), determinant(FamilySpec("E", 1, 1, 1, MU + 3)))
    assert res.lhs == ratio


@pytest.mark.parametrize("m", [1, 2, 3])
def test_quotient_identity(m):
    assert ansatz.verify_ansatz_identity("quoED1", 1, 2 * m + 1).holds


@pytest.mark.parametrize("s,n", [(2, 4), (3, 5), (2, 6), (4, 6), (3, 7), (1, 3)])
def test_eps_identities_hold_with_matching_parity(s, n):
    assert ansatz.verify_ansatz_identity("biglemma2", s, n).holds
    if s >= 2:
        assert ansatz.verify_ansatz_identity("appendix", s, n).holds


@pytest.mark.parametrize("s,n", [(2, 3), (3, 4), (2, 5)])
def test_first_identity_needs_matching_parity(s, n):
    # the ratio formula describes only s = n (mod 2); elsewhere the residual is nonzero
    assert not ansatz.verify_ansatz_identity("biglemma1", s, n).holds


def test_identity_rhs_is_ratio_formula():
    res = ansatz.verify_ansatz_identity("biglemma1", 3, 5)
    assert res.rhs == ratio_formula("R_s1", 3, 5)


def test_unknown_identity():
    with pytest.raises(ValueError):
        ansatz.verify_ansatz_identity("bogus", 2, 2)


# --- recurrence fitting ---------------------------------------------------------------

def test_degree_bounds():
    d = DegreeBounds(1, 2, 2)
    assert d.monomials() == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)]
    assert str(d) == "deg_n<=1,deg_k<=2,total<=2"
    assert len(DegreeBounds(1, 1).monomials()) == 4


def test_recurrence_needs_nonzero_coefficient():
    with pytest.raises(ValueError):
        RecurrenceAnsatz(((0, 0),), DegreeBounds(0, 0), {(0, 0): {(0, 0): Fraction(0)}})


def test_constant_sequence():
    data = {(n, k): Fraction(1) for n in range(1, 12) for k in range(1, n + 1)}
    rec = ansatz.guess_recurrence(data, max_support=(1, 2), max_degree=(0, 0))
    assert rec is not None and rec.support == ((0, 0), (0, 1))
    assert rec.coefficient((0, 0), 5, 3) == -rec.coefficient((0, 1), 5, 3)


def test_polynomial_sequence_with_validation():
    # c(n, k) = n + k^2 satisfies a first-order k-recurrence with polynomial coefficients
    def f(n, k):
        return Fraction(n + k * k)
    train = {(n, k): f(n, k) for n in range(1, 14) for k in range(1, n + 1)}
    held = {(n, k): f(n, k) for n in (14, 15) for k in range(1, n + 1)}
    rec = ansatz.guess_recurrence(train, held, max_support=(1, 3), max_degree=(2, 3))
    assert rec is not None and rec.validated_points > 0
    assert rec.annihilates({**train, **held}, ansatz.anchor_points({**train, **held}, rec.support))


def test_noise_has_no_small_recurrence():
    data = ansatz.noise_table(14, seed=3)
    held = {key: v for key, v in ansatz.noise_table(16, seed=3).items() if key[0] > 14}
    assert ansatz.guess_recurrence(data, held, max_support=(2, 3), max_degree=(1, 2), max_unknowns=24) is None


def test_insufficient_data_is_reported():
    data = {(n, k): Fraction(n * k) for n in range(1, 4) for k in range(1, n + 1)}
    with pytest.raises(ValueError):
        ansatz.fit_recurrence(data, ((0, 0), (0, 1)), DegreeBounds(2, 2))


def test_parity_restricted_anchors():
    data = {(n, k): Fraction(1) for n in range(1, 8) for k in range(1, 3)}
    pts = ansatz.anchor_points(data, ((0, 0), (1, 0)), step=2, parity=0)
    assert pts and all(n % 2 == 0 and n + 2 <= 7 for n, _ in pts)


def test_candidate_orderings():
    sups = ansatz.candidate_supports(2, 3)
    assert sups[0] == ((0, 0), (0, 1))
    assert ((0, 0), (0, 1), (1, 0), (1, 1)) in sups
    assert DegreeBounds(1, 1, 1) in ansatz.candidate_degrees(1, 1)


def test_sys1_numeric_table_matches_symbolic():
    table = ansatz.sys1_numeric_table(2, Fraction(7), 6, min_n=4)
    for n in (4, 6):
        c = ansatz.solve_cofactor_system("sys1", 2, n)
        for k in range(1, n + 1):
            assert table[(n, k)] == c[k].evaluate(7)


def test_guess_too_little_data():
    assert ansatz.guess_sys1_recurrence(2, Fraction(7), 12, holdout=(14,)) is None


def test_guess_one_parity_class():
    recs = ansatz.guess_sys1_recurrence(2, Fraction(7), 20, holdout=(22,))
    assert recs is not None and set(recs) == {0}
    assert recs[0].step == 2 and recs[0].parity == 0
