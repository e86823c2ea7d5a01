"""Limits of eps-perturbed determinant ratios, through exact eps-free matrices.

Perturbing (s, t) to (s + eps, t + eps) with t = -1 makes the first column
O(eps); the limits of interest are quotients of the eps^1 coefficients.
Both coefficients are determinants of rational matrices built by
:func:`bindet.families.build_transformed`, so every limit here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import MU, RatFuncMu, gbinom_eps_first_order, poch, to_rational
from .families import (SIGMA, FamilySpec, TransformedMatrixSpec, build_matrix, build_transformed,
                       determinant, ratio_formula)
from .matrix import ElementaryTransform, ExactMatrix, apply_transform, det

TARGETS = ("biglemma2_a", "biglemma2_b", "quoED1")


@dataclass(frozen=True)
class EpsLimitSpec:
    target: str
    s: int
    n: int

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown eps-limit target {self.target!r}")
        m, r = self.m, self.r
        if self.target == "biglemma2_a" and not (self.s % 2 == 0 and self.n % 2 == 0 and m > r >= 1):
            raise ValueError("biglemma2_a needs (s, n) = (2r, 2m) with m > r >= 1")
        if self.target == "biglemma2_b" and not (self.s % 2 == 1 and self.n % 2 == 1 and m > r >= 0):
            raise ValueError("biglemma2_b needs (s, n) = (2r+1, 2m+1) with m > r >= 0")
        if self.target == "quoED1" and not (self.s == 1 and self.n % 2 == 1 and m >= 1):
            raise ValueError("quoED1 needs s = 1 and n = 2m+1 with m >= 1")

    @classmethod
    def from_mr(cls, target: str, m: int, r: int = 0) -> "EpsLimitSpec":
        if target == "biglemma2_a":
            return cls(target, 2 * r, 2 * m)
        if target == "biglemma2_b":
            return cls(target, 2 * r + 1, 2 * m + 1)
        if target == "quoED1":
            return cls(target, 1, 2 * m + 1)
        raise ValueError(f"unknown eps-limit target {target!r}")

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def r(self) -> int:
        return self.s // 2

    @property
    def family(self) -> str:
        return "D" if self.target == "biglemma2_a" else "E"


def eps_limit_ratio(spec: EpsLimitSpec) -> RatFuncMu:
    """The limit as a quotient of two eps-free determinants."""
    if spec.target == "quoED1":
        num = det(build_transformed(TransformedMatrixSpec("quoED1_tilde", 1, spec.n)))
        den = determinant(FamilySpec("D", 1, 0, spec.n - 2, MU + 3))
    else:
        num = det(build_transformed(TransformedMatrixSpec("appendix_Atilde", spec.s, spec.n, spec.family)))
        den = det(build_transformed(TransformedMatrixSpec("appendix_Btilde", spec.s, spec.n, spec.family)))
    if not den:
        raise ZeroDivisionError(f"denominator of the {spec.target} limit vanishes")
    return num / den


def expected_limit(spec: EpsLimitSpec) -> RatFuncMu:
    """The stated rational function the limit must equal."""
    if spec.target == "quoED1":
        from .closed_forms import closed_form
        return closed_form("quoED1", m=spec.m)
    return ratio_formula("R_sneg1", spec.s, spec.n)


# --------------------------------------------------------------------------
# structural check of the eps^1 data


def first_order_matrices(family: str, s: int, n: int) -> tuple[ExactMatrix, ExactMatrix]:
    """eps^1 coefficient matrices (A~, B~) derived from the raw families.

    A~ comes from L * A_{s+eps,-1+eps}(n) * R~: its first column is
    e_1 + O(eps) and its second column is O(eps), so by multilinearity only
    the eps-coefficient of the second column and the eps = 0 values of the
    other columns enter the eps^1 term.  The second column is -L times the
    raw first column, whose entries binom(x + 2 eps, -1 + eps) have the
    rational coefficient given by ``gbinom_eps_first_order``.  B~ is read
    off B_{s-1+eps,-1+eps}^{mu+3}(n-1) the same way.
    """
    other = "E" if family == "D" else "D"
    a0 = build_matrix(FamilySpec(family, s, -1, n))
    col1 = [gbinom_eps_first_order(MU + (i + s - 4), -1) for i in range(1, n + 1)]
    lower = ElementaryTransform("L", n)
    t0 = apply_transform(ElementaryTransform("Rtilde", n), "right", apply_transform(lower, "left", a0))
    lcol = apply_transform(lower, "left", ExactMatrix([[c] for c in col1]))
    a_rows = []
    for i in range(2, n + 1):
        a_rows.append([-lcol[i, 1]] + [t0[i, j] for j in range(3, n + 1)])
    b0 = build_matrix(FamilySpec(other, s - 1, -1, n - 1, MU + 3))
    b_rows = []
    for i in range(1, n):
        coef = gbinom_eps_first_order(MU + (i + s - 2), -1)
        b_rows.append([coef] + [b0[i, j] for j in range(2, n)])
    return ExactMatrix(a_rows), ExactMatrix(b_rows)


def eps_leading_coefficient_check(s: int, n: int, family: str | None = None,
                                  candidate: ExactMatrix | None = None) -> bool:
    """Does the displayed A~ (or ``candidate``) match the eps^1 data of the
    transformed raw matrix entry by entry?  B~ is checked alongside."""
    if n <= s:
        raise ValueError("the check needs n > s")
    fam = family or ("D" if s % 2 == 0 else "E")
    a_ref, b_ref = first_order_matrices(fam, s, n)
    a_disp = candidate or build_transformed(TransformedMatrixSpec("appendix_Atilde", s, n, fam))
    b_disp = build_transformed(TransformedMatrixSpec("appendix_Btilde", s, n, fam))
    return a_disp == a_ref and b_disp == b_ref


# --------------------------------------------------------------------------
# chaining along the Eneg1CF route


def _shift(x: RatFuncMu, k: int) -> RatFuncMu:
    return x.compose(MU + k) if k else x


def _p_chain(m: int, r: int) -> RatFuncMu:
    """prod_{i=0}^{2r-3} R_{2r-1-i,-1}^{mu+3i}(2m-1-i) with each factor
    computed as an eps-limit."""
    out = RatFuncMu.coerce(1)
    for i in range(2 * r - 2):
        s, n = 2 * r - 1 - i, 2 * m - 1 - i
        if s % 2:
            spec = EpsLimitSpec("biglemma2_b", s, n)
        else:
            spec = EpsLimitSpec("biglemma2_a", s, n)
        out = out * _shift(eps_limit_ratio(spec), 3 * i)
    return out


def chained_eneg1_ratio(m: int, r: int) -> RatFuncMu:
    """E_{-1,2r-1}(2m+1) / E_{-1,2r-1}(2m-1) assembled from eps-limits.

    Needs m > r >= 1.
    """
    if not m > r >= 1:
        raise ValueError("the chain needs m > r >= 1")
    shift = 6 * r - 6
    hi = _shift(eps_limit_ratio(EpsLimitSpec.from_mr("quoED1", m - r + 1)), shift)
    lo = _shift(eps_limit_ratio(EpsLimitSpec.from_mr("quoED1", m - r)), shift)
    d_hi = determinant(FamilySpec("D", 1, 0, 2 * m - 2 * r + 1, MU + (shift + 3)))
    d_lo = determinant(FamilySpec("D", 1, 0, 2 * m - 2 * r - 1, MU + (shift + 3)))
    base = hi / lo * RatFuncMu(d_hi, d_lo)
    limit = _p_chain(m + 1, r) / _p_chain(m, r) * base
    switch = (poch(MU + (2 * m - 3), 2 * r) * poch(MU + (2 * m - 2), 2 * r)
              / (poch(2 * m - 1, 2 * r) * poch(2 * m, 2 * r)))
    return limit * switch


def direct_eneg1_ratio(m: int, r: int) -> RatFuncMu:
    num = determinant(FamilySpec("E", -1, 2 * r - 1, 2 * m + 1))
    den = determinant(FamilySpec("E", -1, 2 * r - 1, 2 * m - 1))
    return RatFuncMu(num, den)


# --------------------------------------------------------------------------
# optional floating-point probe


def numeric_eps_probe(spec: EpsLimitSpec, mu, eps: str = "1e-30", dps: int = 60) -> float:
    """Evaluate the raw eps-perturbed ratio at a small eps with mpmath.

    A sanity aid only: the gamma-based binomials are not exact.
    """
    import mpmath

    q = to_rational(mu)
    with mpmath.workdps(dps):
        e = mpmath.mpf(eps)
        x = mpmath.mpf(q.numerator) / q.denominator

        def raw(family: str, s, n: int, shift: int):
            sigma = SIGMA[family]
            rows = []
            for i in range(1, n + 1):
                row = []
                for j in range(1, n + 1):
                    v = mpmath.binomial(x + shift + i + j + s - 5 + 2 * e, j - 2 + e)
                    if i + s == j - 1:
                        v += sigma
                    row.append(v)
                rows.append(row)
            return mpmath.det(mpmath.matrix(rows))

        if spec.target == "quoED1":
            d = determinant(FamilySpec("D", 1, 0, spec.n - 2, MU + 3)).evaluate(q)
            val = raw("E", 1, spec.n, 0) / (e * (mpmath.mpf(d.numerator) / d.denominator))
        else:
            other = "E" if spec.family == "D" else "D"
            val = raw(spec.family, spec.s, spec.n, 0) / raw(other, spec.s - 1, spec.n - 1, 3)
        return float(val)
