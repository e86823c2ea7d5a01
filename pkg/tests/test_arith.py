from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from bindet.arith import (MU, AffineMu, PoleError, PolyMu, RatFuncMu, format_rational, gbinom,
                          gbinom_eps_first_order, parse_canonical, parse_rational, pascal_step, pascal_sum,
                          poch, poly_gcd, to_rational)

X = sympy.Symbol("x")

ratios = st.fractions(min_value=-20, max_value=20, max_denominator=7)
polys = st.lists(ratios, max_size=6).map(PolyMu)
affines = st.builds(AffineMu, ratios, st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)]))


def to_sympy(p: PolyMu):
    return sum((sympy.Rational(c.numerator, c.denominator) * X ** i for i, c in enumerate(p.coefficients)),
               sympy.Integer(0))


def rat_to_sympy(r: RatFuncMu):
    return to_sympy(r.num) / to_sympy(r.den)


def affine_sympy(a: AffineMu):
    return to_sympy(a.to_poly())


# --- rational helpers --------------------------------------------------------

def test_parse_and_format_round_trip():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational(" 12 ") == 12
    assert format_rational(Fraction(6, 3)) == "2"
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("mu")


def test_to_rational_rejects_float():
    assert to_rational(3) == 3
    with pytest.raises(TypeError):
        to_rational(0.5)


# --- PolyMu --------------------------------------------------------------------

def test_poly_basics():
    p = PolyMu([1, 2, 3])
    assert p.degree == 2 and p.leading == 3
    assert str(p) == "3*mu^2 + 2*mu + 1"
    assert p.canonical() == "[1, 2, 3]"
    assert PolyMu([0, 0]).is_zero() and not PolyMu()
    assert PolyMu([5]).constant_value() == 5
    assert (MU_P := PolyMu.mu()).evaluate(Fraction(1, 3)) == Fraction(1, 3)
    assert MU_P * MU_P - 1 == PolyMu([-1, 0, 1])


@given(polys, polys)
def test_poly_ring_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a + b) - (to_sympy(a) + to_sympy(b))) == 0
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    assert a - a == 0


@given(polys, polys.filter(bool))
def test_divmod_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(polys, polys)
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    if g:
        assert divmod(a, g)[1].is_zero() and divmod(b, g)[1].is_zero()
        assert g.leading == 1
    else:
        assert not a and not b


@given(polys, ratios)
def test_evaluate_matches_sympy(p, x):
    assert p.evaluate(x) == to_sympy(p).subs(X, sympy.Rational(x.numerator, x.denominator))


@given(polys, affines)
def test_compose_with_affine(p, a):
    got = p.compose(a)
    want = sympy.expand(to_sympy(p).subs(X, affine_sympy(a)))
    assert sympy.expand(to_sympy(got) - want) == 0


def test_exact_div_refuses_remainder():
    with pytest.raises(ArithmeticError):
        PolyMu([1, 0, 1]).exact_div(PolyMu([1, 1]))


# --- RatFuncMu -----------------------------------------------------------------

def test_ratfunc_reduces_and_normalizes():
    r = RatFuncMu(PolyMu([-1, 0, 1]), PolyMu([2, 2]))
    assert r == RatFuncMu(PolyMu([-1, 1]), PolyMu([2]))
    assert r.den.leading == 1
    assert r.is_polynomial() and r.as_poly() == PolyMu([Fraction(-1, 2), Fraction(1, 2)])
    with pytest.raises(ZeroDivisionError):
        RatFuncMu(1, 0)


@given(polys, polys.filter(bool), polys, polys.filter(bool))
def test_field_ops_match_sympy(a, b, c, d):
    x, y = RatFuncMu(a, b), RatFuncMu(c, d)
    for got, want in ((x + y, rat_to_sympy(x) + rat_to_sympy(y)),
                      (x * y, rat_to_sympy(x) * rat_to_sympy(y)),
                      (x - y, rat_to_sympy(x) - rat_to_sympy(y))):
        assert sympy.cancel(rat_to_sympy(got) - want) == 0
    if y:
        assert (x / y) * y == x


@given(polys, polys.filter(bool))
def test_canonical_round_trip(a, b):
    r = RatFuncMu(a, b)
    assert parse_canonical(r.canonical()) == r
    assert hash(parse_canonical(r.canonical())) == hash(r)


def test_evaluate_at_pole():
    r = RatFuncMu(1, PolyMu([-2, 1]))
    assert r.evaluate(3) == 1
    with pytest.raises(ZeroDivisionError):
        r.evaluate(2)


# --- AffineMu ------------------------------------------------------------------

def test_affine_arithmetic():
    a = AffineMu(1, -1) - 6 * 2
    assert str(a) == "-mu - 11"
    assert a.substitute(MU + 3) == AffineMu(-14, -1)
    assert (MU / 2).evaluate(5) == Fraction(5, 2)
    assert not (MU + 4).is_constant() and AffineMu(3, 0).is_constant()


# --- Pochhammer and binomials ------------------------------------------------

def test_pochhammer_examples():
    assert poch(3, -2) == Fraction(1, 2)  # 1 / (1 * 2)
    assert poch(5, 0) == 1
    assert poch(MU, 3) == RatFuncMu(PolyMu([0, 2, 3, 1]))
    assert poch(Fraction(1, 2), 2) == Fraction(3, 4)
    with pytest.raises(PoleError):
        poch(2, -3)


@given(st.integers(-15, 15), st.integers(-8, 8))
def test_poch_matches_sympy_at_integers(a, b):
    want = sympy.rf(a, b) if b >= 0 else (1 / sympy.rf(a + b, -b) if sympy.rf(a + b, -b) != 0 else None)
    if want is None:
        with pytest.raises(PoleError):
            poch(a, b)
    else:
        assert poch(a, b) == Fraction(int(sympy.numer(want)), int(sympy.denom(want)))


@given(affines, st.integers(0, 8))
def test_poch_symbolic_matches_sympy(a, b):
    assert sympy.expand(rat_to_sympy(poch(a, b)) - sympy.expand_func(sympy.rf(affine_sympy(a), b))) == 0


@given(st.integers(-20, 20), st.integers(-4, 10))
def test_gbinom_matches_sympy(x, k):
    want = 0 if k < 0 else sympy.binomial(x, k)
    assert gbinom(x, k).evaluate(0) == Fraction(int(want))


def test_gbinom_symbolic():
    assert gbinom(MU, 2) == PolyMu([0, Fraction(-1, 2), Fraction(1, 2)])
    assert gbinom(MU + 5, -1) == 0


def test_eps_first_order_examples():
    # binom(x + 2 eps, -3 + eps) = eps * 2 / (x+1)_3 + O(eps^2)
    assert gbinom_eps_first_order(MU, -3) == poch(MU + 1, 3).inverse() * 2
    assert gbinom_eps_first_order(MU, -1) == RatFuncMu(1, PolyMu([1, 1]))
    with pytest.raises(ValueError):
        gbinom_eps_first_order(MU, 0)


@pytest.mark.parametrize("k", [-1, -2, -3, -4])
@pytest.mark.parametrize("x", [Fraction(7, 3), Fraction(5), Fraction(-1, 2)])
def test_eps_first_order_matches_numeric_limit(k, x):
    mpmath = pytest.importorskip("mpmath")
    with mpmath.workdps(50):
        e = mpmath.mpf("1e-25")
        xv = mpmath.mpf(x.numerator) / x.denominator
        approx = mpmath.binomial(xv + 2 * e, k + e) / e
        exact = gbinom_eps_first_order(x, k).evaluate(0)
        assert abs(approx - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.mpf("1e-20")


@given(affines, st.integers(-10, 10))
def test_pascal_step(x, y):
    up, same, down = pascal_step(x, y)
    assert up - same == down


@given(st.integers(-10, 10), st.integers(-10, 10), st.integers(1, 8))
def test_pascal_sum(c, y, j):
    x = MU + c
    assert pascal_sum(x, y, j) == gbinom(x + j, y + j - 1) - gbinom(x, y - 1)


# --- Pochhammer rules as properties -------------------------------------------

@given(affines, st.integers(-8, 8), st.integers(-8, 8))
def test_poch_product_rule(a, b, c):
    try:
        lhs = poch(a, b) * poch(a + b, c)
    except PoleError:
        return
    assert lhs == poch(a, b + c)


@given(affines, st.integers(0, 8))
def test_poch_negative_length(a, b):
    try:
        lhs = poch(a, -b)
    except PoleError:
        return
    assert lhs == poch(a - b, b).inverse()


@given(affines, st.integers(0, 8))
def test_poch_reflection(a, b):
    assert poch(-a, b) == poch(a - b + 1, b) * (-1) ** b


@given(affines, st.integers(0, 6))
def test_poch_duplication(a, b):
    assert poch(a, b) * poch(a + Fraction(1, 2), b) * 4 ** b == poch(a * 2, 2 * b)
