"""The sixteen acceptance criteria, each at zero tolerance.

Every test's docstring opens with the line printed in the summary.
"""

import random
import time
from fractions import Fraction

import pytest

from bindet import ansatz, epsilon, tilings
from bindet import closed_forms as cf
from bindet.arith import MU
from bindet.families import (FamilySpec, delta_positions, determinant, djd_sides, factor_diag_mismatches,
                             ratio_formula, sum_of_minors, switched_determinant)
from bindet.verify import SuiteConfig, suite_tasks, run_check

pytestmark = pytest.mark.acceptance


def _mismatches(fids, max_m, max_r=None):
    bad, seen = [], 0
    for fid in fids:
        for p in cf.REGISTRY[fid].grid(max_m, max_r):
            seen += 1
            if cf.closed_form(fid, **p) != cf.target_value(fid, **p):
                bad.append((fid, p))
    return bad, seen


def test_c01_figure():
    """01 figure: E_{2,1}^2(2) = 10 = 6 + 4 by every route"""
    t0 = time.perf_counter()
    spec = FamilySpec("E", 2, 1, 2)
    full = tilings.PathProblem.minor(2, 2, 1, 2)
    cut = tilings.PathProblem.minor(2, 2, 1, 2, rows=(1,), cols=(2,))
    assert delta_positions(spec) == [(1, 2)]
    assert tilings.lgv_count(full).value == 6
    assert tilings.lgv_count(cut).value == 4
    assert len(tilings.enumerate_paths(full)) == 6
    assert len(tilings.enumerate_paths(cut)) == 4
    assert sum_of_minors(spec).evaluate(2) == 10
    assert determinant(spec).evaluate(2) == 10
    assert tilings.cyclic_tiling_count("E", 2, 1, 2, 2).value == 10
    assert time.perf_counter() - t0 < 1.0


def test_c02_delta_free_product():
    """02 delta-free product formula, 0 <= s,t <= 4, 1 <= n <= 6"""
    t0 = time.perf_counter()
    checked = 0
    for s in range(5):
        for t in range(5):
            for n in range(1, 7):
                closed = cf.cf_detwithnoKD(s, t, n)
                assert closed == determinant(FamilySpec("B", s, t, n)), (s, t, n)
                for family in "DE":
                    spec = FamilySpec(family, s, t, n)
                    if not delta_positions(spec):
                        checked += 1
                        assert closed == determinant(spec), (family, s, t, n)
    assert checked > 0
    assert time.perf_counter() - t0 < 10.0


def test_c03_switching():
    """03 switching prefactor for s < t <= 4, n <= 7, and the factored diagonal identity for n <= 5"""
    t0 = time.perf_counter()
    for family in "DE":
        for t in range(1, 5):
            for s in range(t):
                for n in range(1, 8):
                    assert determinant(FamilySpec(family, s, t, n)) == switched_determinant(family, s, t, n)
                for n in range(1, 6):
                    assert factor_diag_mismatches(family, s, t, n) == 0, (family, s, t, n)
    assert time.perf_counter() - t0 < 60.0


def test_c04_family_reduction():
    """04 E_{s,0}(n) = D_{s-1,0}^{mu+3}(n-1) and D_{s,0}(n) = E_{s-1,0}^{mu+3}(n-1), 1 <= s <= n <= 8"""
    t0 = time.perf_counter()
    for n in range(1, 9):
        for s in range(1, n + 1):
            assert determinant(FamilySpec("E", s, 0, n)) == determinant(FamilySpec("D", s - 1, 0, n - 1, MU + 3))
            assert determinant(FamilySpec("D", s, 0, n)) == determinant(FamilySpec("E", s - 1, 0, n - 1, MU + 3))
    assert time.perf_counter() - t0 < 60.0


def test_c05_main_products():
    """05 E_{2r-1,1}(2m-1) and D_{2r,1}(2m) products for 1 <= r <= m <= 5"""
    t0 = time.perf_counter()
    bad, seen = _mismatches(["Krat37nice", "KTConj20"], 5)
    assert seen == 30 and not bad
    assert time.perf_counter() - t0 < 600.0


def test_c06_switched_product():
    """06 l1*l2*l3 product equals switching prefactor times the main product, 1 <= r <= m <= 4"""
    grid = cf.REGISTRY["Krat37ugly"].grid(4)
    assert len(grid) == 10
    for p in grid:
        ugly = cf.cf_Krat37ugly(**p)
        assert ugly == cf.krat37_switch_prefactor(**p) * cf.cf_Krat37nice(**p)
        assert ugly == cf.target_value("Krat37ugly", **p)


def test_c07_negative_s_products():
    """07 E_{-1,2r-1}(2m+1) and D_{-1,2r}(2m) products for m <= 5"""
    t0 = time.perf_counter()
    bad, seen = _mismatches(["Eneg1CF", "ktconj21"], 5)
    assert seen == 30 and not bad
    assert time.perf_counter() - t0 < 600.0


def test_c08_ratio_two_ways():
    """08 R_{s,1}(n) by determinant quotient and by the cofactor identity, 1 <= r <= m <= 5"""
    for m in range(1, 6):
        for r in range(1, m + 1):
            for fid, s, n in (("biglemma1_a", 2 * r, 2 * m), ("biglemma1_b", 2 * r + 1, 2 * m + 1)):
                expected = ratio_formula("R_s1", s, n)
                assert cf.target_value(fid, m=m, r=r) == expected, (fid, m, r)
                res = ansatz.verify_ansatz_identity("biglemma1", s, n)
                assert res.holds and res.rhs == expected, (s, n)


def test_c09_eps_limits():
    """09 eps-limit ratios equal their rational functions, r < m <= 5"""
    count = 0
    for m in range(1, 6):
        specs = [epsilon.EpsLimitSpec.from_mr("quoED1", m)]
        specs += [epsilon.EpsLimitSpec.from_mr("biglemma2_a", m, r) for r in range(1, m)]
        specs += [epsilon.EpsLimitSpec.from_mr("biglemma2_b", m, r) for r in range(0, m)]
        for spec in specs:
            count += 1
            assert epsilon.eps_limit_ratio(spec) == epsilon.expected_limit(spec), spec
    assert count == 5 + 10 + 15


def test_c10_reflected_mu():
    """10 D/E_{2r-1,0}(2m+1) = D/E_{0,0}^{1-mu-6m}(2m-2r+2), 1 <= r <= m <= 4"""
    bad, seen = _mismatches(["KTConj24_map_D", "KTConj24_map_E"], 4)
    assert seen == 20 and not bad


def test_c11_ed_corollaries():
    """11 E/D quotient corollaries for 1 <= m <= 6"""
    bad, seen = _mismatches(["EDCor1", "EDCor2"], 6)
    assert seen == 12 and not bad


def test_c12_triangles():
    """12 twelve triangle ratios for m <= 5, and the determinants involved are nonzero"""
    fids = [k for k in cf.REGISTRY if k.startswith("triangle")]
    assert len(fids) == 12
    bad, seen = _mismatches(fids, 5)
    assert not bad and seen > 0
    for fid in fids:
        for p in cf.REGISTRY[fid].grid(5):
            tg = cf.REGISTRY[fid].target(**p)
            assert determinant(tg.num) and determinant(tg.den), (fid, p)


def test_c13_condensation():
    """13 Desnanot-Jacobi-Dodgson on 50 random windows, n <= 6"""
    rng = random.Random(13)
    for _ in range(50):
        family, s, t, n = rng.choice("DEB"), rng.randint(-3, 5), rng.randint(-3, 5), rng.randint(2, 6)
        lhs, rhs = djd_sides(family, s, t, n)
        assert lhs == rhs, (family, s, t, n)


def test_c14_pochhammer_suites():
    """14 Pochhammer rules, Pascal step and sum, cancellation lemma: >= 200 cases each"""
    tasks = suite_tasks(SuiteConfig(["pochhammer"], cases=200))
    counts: dict[str, int] = {}
    for task in tasks:
        rec = run_check(task)
        assert rec.equal, rec
        counts[rec.check_id] = counts.get(rec.check_id, 0) + 1
    # the cancellation lemma is symbolic in mu; top it up with point evaluations
    rng = random.Random(14)
    for m in range(1, 11):
        left, right = cf.cancel_poch_sides(m)
        for _ in range(20):
            x = Fraction(rng.randint(-400, 400), rng.randint(1, 9))
            try:
                lv = left.evaluate(x)
            except ZeroDivisionError:
                continue
            assert lv == right.evaluate(x)
            counts["pochhammer.CancelPoch"] += 1
    expected = {f"pochhammer.P{i}" for i in range(1, 9)} | {
        "pochhammer.pascal", "pochhammer.pascalsum", "pochhammer.CancelPoch"}
    assert set(counts) == expected
    assert min(counts.values()) >= 200, counts


def test_c15_zeros():
    """15 E_{0,0}(2m-1) = 0 and E_{2r,0}(2m-1) = 0 for r < m <= 4"""
    for m in range(1, 5):
        assert not determinant(FamilySpec("E", 0, 0, 2 * m - 1))
        for r in range(m):
            assert not determinant(FamilySpec("E", 2 * r, 0, 2 * m - 1))
            assert not cf.closed_form("Es0_2r_even_zero", m=m, r=r)


def test_c16_guessing():
    """16 recurrence guessed from n <= 20 annihilates held-out n = 21, 22"""
    mu = Fraction(7)
    recs = ansatz.guess_sys1_recurrence(2, mu, 20, holdout=(21, 22))
    assert recs is not None and set(recs) == {0, 1}
    table = ansatz.sys1_numeric_table(2, mu, 22)
    for parity, rec in recs.items():
        assert rec.validated_points > 0
        cls = {key: v for key, v in table.items() if key[0] % 2 == parity}
        held = [(n, k) for n, k in ansatz.anchor_points(cls, rec.support, rec.step, parity)
                if any(n + rec.step * a > 20 for a, _ in rec.support)]
        assert len(held) == rec.validated_points
        assert rec.annihilates(cls, held)
