"""Product formulas for the determinants and their ratios.

Every formula is stored as a :class:`ClosedFormExpr`: a signed, power-of-two
scaled product of Pochhammer symbols with affine bases.  Evaluation first
collects all linear factors ``(mu + c)`` with their multiplicities, so
cancellation happens on exponents and only the surviving factors are ever
multiplied out.

The :data:`REGISTRY` maps formula ids to a builder, a parameter condition and
the determinant (or determinant ratio) the formula is supposed to equal.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .arith import MU, AffineMu, PoleError, PolyMu, RatFuncMu, to_rational
from .families import FamilySpec, determinant

H = MU / 2
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PochFactor:
    """(base)_length raised to ``exponent``; ``length`` is never negative."""

    base: AffineMu
    length: int
    exponent: int = 1

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("PochFactor length must be normalized to >= 0")

    def __str__(self) -> str:
        e = "" if self.exponent == 1 else f"^{self.exponent}"
        return f"({self.base})_{self.length}{e}"


def normalize_factor(base, length: int, exponent: int) -> tuple[int, PochFactor]:
    """Return (sign, factor) with nonnegative length and nonnegative slope.

    Negative lengths use (a)_{-b} = 1/(a-b)_b; negative slopes use
    (-a)_b = (-1)^b (a-b+1)_b.
    """
    base = base if isinstance(base, AffineMu) else AffineMu(base, 0)
    if length < 0:
        base, length, exponent = base + length, -length, -exponent
    sign = 1
    if base.slope < 0:
        base = -base - (length - 1)
        if length % 2 and exponent % 2:
            sign = -1
    return sign, PochFactor(base, length, exponent)


@dataclass(frozen=True)
class ClosedFormExpr:
    sign: int
    two_power: int
    rational_prefactor: Fraction
    factors: tuple[PochFactor, ...]
    products: tuple[str, ...] = ()
    label: str = ""

    @classmethod
    def build(cls, factors, *, sign: int = 1, two_power: int = 0, prefactor=1,
              products=(), label: str = "") -> "ClosedFormExpr":
        """Normalize raw (base, length, exponent) triples."""
        out = []
        for base, length, exponent in factors:
            sg, f = normalize_factor(base, length, exponent)
            sign *= sg
            if f.length and f.exponent:
                out.append(f)
        return cls(sign, two_power, to_rational(prefactor), tuple(out), tuple(products), label)

    def __mul__(self, other: "ClosedFormExpr") -> "ClosedFormExpr":
        return ClosedFormExpr(self.sign * other.sign, self.two_power + other.two_power,
                              self.rational_prefactor * other.rational_prefactor,
                              self.factors + other.factors, self.products + other.products,
                              self.label or other.label)

    def linear_factors(self) -> tuple[Fraction, Counter]:
        """(constant, {c: exponent of (mu + c)}) after full cancellation."""
        const = Fraction(self.sign) * self.rational_prefactor * Fraction(2) ** self.two_power
        lin: Counter = Counter()
        zero_num = pole = False
        for f in self.factors:
            a = f.base
            for k in range(f.length):
                c = a.constant + k
                if a.slope == 0:
                    if c == 0:
                        if f.exponent > 0:
                            zero_num = True
                        else:
                            pole = True
                    else:
                        const *= c ** f.exponent
                else:
                    const *= a.slope ** f.exponent
                    lin[c / a.slope] += f.exponent
        if pole:
            raise PoleError(f"{self.label or 'closed form'} has a constant zero in a denominator")
        if zero_num:
            return Fraction(0), Counter()
        return const, Counter({c: e for c, e in lin.items() if e})

    def evaluate(self) -> RatFuncMu:
        const, lin = self.linear_factors()
        if not const:
            return RatFuncMu()
        num = [c for c, e in lin.items() if e > 0 for _ in range(e)]
        den = [c for c, e in lin.items() if e < 0 for _ in range(-e)]
        return RatFuncMu(_linear_product(num) * const, _linear_product(den), reduced=True)

    def evaluate_at(self, mu) -> Fraction:
        """Value at a rational mu without expanding polynomials."""
        mu = to_rational(mu)
        const, lin = self.linear_factors()
        val = const
        for c, e in lin.items():
            x = mu + c
            if not x and e < 0:
                raise PoleError(f"pole at mu = {mu}")
            val *= x ** e
        return val

    def __str__(self) -> str:
        parts = []
        if self.sign < 0:
            parts.append("-1")
        if self.two_power:
            parts.append(f"2^{self.two_power}")
        if self.rational_prefactor != 1:
            parts.append(str(self.rational_prefactor))
        parts.extend(str(f) for f in self.factors)
        return " * ".join(parts) or "1"


def _linear_product(roots: list[Fraction]) -> PolyMu:
    polys = [PolyMu([c, 1]) for c in sorted(roots)]
    if not polys:
        return PolyMu.constant(1)
    while len(polys) > 1:
        nxt = [polys[i] * polys[i + 1] for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def _fact(k: int, e: int = 1):
    """k! as a Pochhammer triple."""
    return (AffineMu(1), k, e)


def _lin(base, e: int = 1):
    return (base, 1, e)


# --------------------------------------------------------------------------
# product formulas


def expr_detwithnoKD(s: int, t: int, n: int) -> ClosedFormExpr:
    fs = []
    for i in range(t):
        fs += [(MU + (s + i - 1), n, 1), (AffineMu(i + 1), n, -1)]
    return ClosedFormExpr.build(fs, products=("i=0..t-1",), label="detwithnoKD")


def expr_E11(m: int) -> ClosedFormExpr:
    fs = [((MU - 1) / 2, m, 1), (AffineMu(m), m, -1)]
    for i in range(1, m):
        fs += [(MU + (2 * i + 1), i - 1, 2), (H + (2 * i + 1), i, 2),
               (AffineMu(i), i, -2), (H + (i + 1), i - 1, -2)]
    return ClosedFormExpr.build(fs, sign=(-1) ** (m - 1), two_power=2 * m - 1,
                                products=("i=1..m-1",), label="E11")


def _p_mr(m: int, r: int) -> list:
    fs = []
    for i in range(1, m - r):
        fs += [(MU + (2 * i + 6 * r), i, 2), (H + (2 * i + 3 * r + 1), i, 2),
               (AffineMu(i + 1), i, -2), (H + (i + 3 * r), i, -2)]
    return fs


ES0_VARIANTS = ("2r_even_zero", "2r_even", "2r+1_odd", "2r+1_even")


def expr_Es0(variant: str, m: int, r: int) -> ClosedFormExpr:
    p = _p_mr(m, r)
    prods = ("i=1..m-r-1",)
    if variant == "2r_even_zero":
        return ClosedFormExpr.build([], prefactor=0, label="Es0/2r_even_zero")
    if variant == "2r_even":
        fs = [(H + (3 * r - HALF), m - r, 1), (AffineMu(HALF), m - r, -1)] + p
        return ClosedFormExpr.build(fs, sign=(-1) ** (m - r), products=prods, label="Es0/2r_even")
    if variant == "2r+1_odd":
        fs = [(AffineMu(m - r), m - r - 1, 1), (H + (2 * m + r - 1), m - r - 1, -1)] + p
        return ClosedFormExpr.build(fs, products=prods, label="Es0/2r+1_odd")
    if variant == "2r+1_even":
        fs = [(MU + (2 * m + 4 * r + 1), m - r - 1, 1), (H + (m + 2 * r + 1), m - r - 1, -1)] + p
        return ClosedFormExpr.build(fs, two_power=1, products=prods, label="Es0/2r+1_even")
    raise ValueError(f"unknown Es0 variant {variant!r}")


def expr_Krat37nice(m: int, r: int) -> ClosedFormExpr:
    fs = [_lin(MU - 1), (MU + (2 * r - 1), 2 * m - 2, 1), _fact(2 * r - 2, -1),
          (AffineMu(m + r - 1), m - r + 1, -1), (H + r, m - r, -1)]
    for i in range(1, m - r + 1):
        fs += [(MU + (2 * i + 6 * r - 5), i - 1, 2), (H + (2 * i + 3 * r - 2), i, 2),
               (AffineMu(i), i, -2), (H + (i + 3 * r - 2), i - 1, -2)]
    return ClosedFormExpr.build(fs, sign=(-1) ** (m - r), products=("i=1..m-r",),
                                label="Krat37nice")


def expr_Krat37ugly(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    fs = []
    # l1
    for i in range(2 * r - 2):
        fs.append(_fact(i))
    for i in range(r - 1):
        fs += [_fact(2 * m - 2 * i - 3, 2), _fact(m - i - 2, -2),
               _fact(2 * m + 2 * i - 1, -1), _fact(2 * m + 2 * i + 1, -1)]
    # l2
    fs += [_lin(MU - 1), (H + (r - HALF), d, 1)]
    for i in range(1, 2 * r - 1):
        fs.append((MU + (i - 1), 2 * m + 2 * r - 2 * i - 1, 1))
    # l3
    for i in range((d - 1) // 2 + 1):
        fs += [(H + (3 * i + 3 * r - HALF), d - 2 * i - 1, 2),
               (-H + (-3 * m + 3 * i + 3), d - 2 * i, 2)]
    # trailing factorial product
    for i in range(m):
        fs += [_fact(i), _fact(i + 1), _fact(2 * i, -1), _fact(2 * i + 2, -1)]
    return ClosedFormExpr.build(fs, sign=(-1) ** d, two_power=4 * m - 3 * r + d * (d - 1),
                                products=("l1", "l2", "l3", "i=0..m-1"), label="Krat37ugly")


def expr_KTConj20(m: int, r: int) -> ClosedFormExpr:
    fs = [_lin(MU - 1), (MU + 2 * r, 2 * m - 1, 1), _fact(2 * r - 1, -1),
          (AffineMu(m + r), m - r + 1, -1), (H + (r + HALF), m - r, -1)]
    for i in range(1, m - r + 1):
        fs += [(MU + (2 * i + 6 * r - 2), i - 1, 2), (H + (2 * i + 3 * r - HALF), i, 2),
               (AffineMu(i), i, -2), (H + (i + 3 * r - HALF), i - 1, -2)]
    return ClosedFormExpr.build(fs, sign=(-1) ** (m - r), products=("i=1..m-r",),
                                label="KTConj20")


def _binomial_strip(m: int, width: int) -> list:
    """prod_{i=1}^{2m} (mu+i-3)_width / (i)_width."""
    fs = []
    for i in range(1, 2 * m + 1):
        fs += [(MU + (i - 3), width, 1), (AffineMu(i), width, -1)]
    return fs


def expr_Eneg1CF(m: int, r: int) -> ClosedFormExpr:
    fs = [_lin(3 - MU), (AffineMu(m + r + 1), m - r, 1), (H + (r - Fraction(3, 2)), m - r + 1, -1)]
    fs += _binomial_strip(m, 2 * r)
    for i in range(1, m - r + 1):
        fs += [(MU + (2 * i + 6 * r - 3), i, 2), (H + (2 * i + 3 * r - 1), i - 1, 2),
               (AffineMu(i), i, -2), (H + (i + 3 * r - 1), i - 1, -2)]
    return ClosedFormExpr.build(fs, sign=(-1) ** (m - r), two_power=-(2 * m - 2 * r + 1),
                                products=("i=1..2m", "i=1..m-r"), label="Eneg1CF")


def expr_ktconj21(m: int, r: int) -> ClosedFormExpr:
    fs = [_lin(MU - 3), (H + (r - HALF), m - r - 1, 1), (AffineMu(2 * r + 1), m - r, -1)]
    fs += _binomial_strip(m, 2 * r)
    for i in range(1, m - r):
        fs += [(MU + (2 * i + 6 * r), i, 2), (H + (2 * i + 3 * r + HALF), i - 1, 2),
               (AffineMu(i), i, -2), (H + (i + 3 * r + HALF), i - 1, -2)]
    return ClosedFormExpr.build(fs, sign=(-1) ** (m - r), products=("i=1..2m", "i=1..m-r-1"),
                                label="ktconj21")


def expr_CancelPoch_L(m: int) -> ClosedFormExpr:
    fs = []
    for i in range(1, m // 2 + 1):
        fs += [(H + (3 * i - HALF), m - 2 * i, 1), (H + (2 * m - i), m - 2 * i + 1, 1)]
    return ClosedFormExpr.build(fs, two_power=(m - 1) * (m - 2) // 2,
                                products=("i=1..floor(m/2)",), label="CancelPoch_L")


def expr_CancelPoch_R(m: int) -> ClosedFormExpr:
    fs = []
    for i in range(1, m):
        fs += [(MU + (2 * i + 1), i - 1, 1), (H + (2 * i + 1), i, 1), (H + (i + 1), i - 1, -1)]
    return ClosedFormExpr.build(fs, products=("i=1..m-1",), label="CancelPoch_R")


# --------------------------------------------------------------------------
# ratio formulas


def _ratio(pre, num: list[int | AffineMu], den: list[int | AffineMu], *, sign: int = 1,
           label: str) -> ClosedFormExpr:
    fs = [_lin(MU + c if isinstance(c, int) else c) for c in num]
    fs += [_lin(MU + c if isinstance(c, int) else c, -1) for c in den]
    return ClosedFormExpr.build(fs, sign=sign, prefactor=pre, label=label)


def expr_biglemma1_a(m: int, r: int) -> ClosedFormExpr:
    return _ratio(Fraction(m + r - 1, 2 * m * (2 * r - 1)), [-1, 2 * m + 1, 2 * r],
                  [2, 2 * m + 2 * r - 1], label="biglemma1_a")


def expr_biglemma1_b(m: int, r: int) -> ClosedFormExpr:
    return _ratio(Fraction(m + r, 2 * r * (2 * m + 1)), [-1, 2 * m + 2, 2 * r + 1],
                  [2, 2 * m + 2 * r + 1], label="biglemma1_b")


def expr_biglemma2_a(m: int, r: int) -> ClosedFormExpr:
    return _ratio(Fraction(2 * r * (2 * m - 1), m + r), [-3, 2 * m + 2 * r - 2],
                  [0, 2 * m - 3, 2 * r - 2], label="biglemma2_a")


def expr_biglemma2_b(m: int, r: int) -> ClosedFormExpr:
    return _ratio(Fraction(2 * m * (2 * r + 1), m + r + 1), [-3, 2 * m + 2 * r],
                  [0, 2 * m - 2, 2 * r - 1], label="biglemma2_b")


def expr_quoED1(m: int) -> ClosedFormExpr:
    return _ratio(Fraction(4 * m - 2, m + 1), [-3, 2 * m + 1], [-1, 1, 3, 2 * m - 2],
                  sign=-1, label="quoED1")


def expr_EDCor1(m: int) -> ClosedFormExpr:
    return _ratio(Fraction(2 * (2 * m - 1), m), [0, 2 * m + 1], [3, 2 * m], sign=-1,
                  label="EDCor1")


def expr_EDCor2(m: int) -> ClosedFormExpr:
    return _ratio(Fraction(2 * m + 1, m + 1), [0, 2 * m + 3], [2 * m + 2], sign=-1,
                  label="EDCor2")


def _tri(fs, *, sign=1, two_power=0, prefactor=1, label):
    return ClosedFormExpr.build(fs, sign=sign, two_power=two_power, prefactor=prefactor,
                                label=label)


def expr_triangleE1_1(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(MU + (2 * m + 4 * r - 1), d + 1, 1), (H + (2 * m + r + 1), d, 1),
                 (AffineMu(d + 1), d + 1, -1), (H + (m + 2 * r), d, -1)], label="triangleE1_1")


def expr_triangleE1_2(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(H + (2 * m + r + 1), d, 1), (H + (3 * r - HALF), d + 1, 1),
                 (AffineMu(Fraction(3, 2)), d, -1), (AffineMu(d), d, -1)],
                sign=(-1) ** d, label="triangleE1_2")


def expr_triangleE1_3(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(AffineMu(HALF), d + 1, 1), (MU + (2 * m + 4 * r - 1), d + 1, 1),
                 (H + (m + 2 * r), d, -1), (H + (3 * r - HALF), d + 1, -1)],
                sign=(-1) ** d, prefactor=Fraction(1, 2 * d + 1), label="triangleE1_3")


def expr_triangleEneg1_1(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(MU + (2 * m - 3), 2 * r + 1, 1), (MU + (2 * m + 4 * r - 2), d - 1, 1),
                 (H + (2 * m + r - 1), d - 1, 1), (AffineMu(2 * m - 1), 2 * r + 1, -1),
                 (AffineMu(d - 1), d - 1, -1), (H + (m + 2 * r - 1), d - 1, -1)],
                prefactor=HALF, label="triangleEneg1_1")


def expr_triangleEneg1_2(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(AffineMu(d), d, 1), (MU + (2 * r - 2), 2 * m, 1),
                 (H + (m + 2 * r - Fraction(3, 2)), d, 1), (AffineMu(2 * r), 2 * m, -1),
                 (H + (3 * r - HALF), d, -1), (MU + (3 * m + 3 * r - 3), d, -1)],
                sign=(-1) ** d, label="triangleEneg1_2")


def expr_triangleEneg1_3(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    # -(-4)^(d-1) = (-1)^d * 2^(2d-2)
    return _tri([(AffineMu(2 * r), 2 * d - 1, 1), (H + (2 * m + r - 2), d, 1),
                 (H + (3 * r - HALF), d - 1, 1), (AffineMu(d), d, -1),
                 (AffineMu(d - 1), d - 1, -1), (MU + (2 * r - 2), 2 * d - 1, -1)],
                sign=(-1) ** d, two_power=2 * d - 2, label="triangleEneg1_3")


def expr_triangleD1_1(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(MU + (2 * m + 4 * r - 4), d + 1, 1), (H + (2 * m + r - HALF), d, 1),
                 (AffineMu(d + 1), d + 1, -1), (H + (m + 2 * r - Fraction(3, 2)), d, -1)],
                label="triangleD1_1")


def expr_triangleD1_2(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(AffineMu(d), d, 1), (AffineMu(d + 1), d + 1, 1),
                 (H + (2 * m + r - HALF), d, -1), (H + (3 * r - 2), d + 1, -1)],
                sign=(-1) ** d, two_power=-2 * d, label="triangleD1_2")


def expr_triangleD1_3(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(AffineMu(d), d, 1), (H + (m + 2 * r - 2), d, 1),
                 (H + (3 * r - 2), d + 1, -1), (MU + (3 * m + 3 * r - 3), d - 1, -1)],
                sign=(-1) ** d, label="triangleD1_3")


def expr_triangleDneg1_1(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(MU + (2 * m - 2), 2 * r + 2, 1), (MU + (2 * m + 4 * r + 1), d - 1, 1),
                 (H + (2 * m + r + HALF), d - 1, 1), (AffineMu(2 * m), 2 * r + 2, -1),
                 (AffineMu(d), d - 1, -1), (H + (m + 2 * r + HALF), d - 1, -1)],
                label="triangleDneg1_1")


def expr_triangleDneg1_2(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(AffineMu(HALF), d, 1), (H + (m + 2 * r + 1), d - 1, 1),
                 (MU + (2 * r - 1), 2 * m + 1, 1), (AffineMu(2 * r + 1), 2 * m + 1, -1),
                 (H + (3 * r + 1), d - 1, -1), (MU + (3 * m + 3 * r), d, -1)],
                sign=(-1) ** d, two_power=2 * d - 1, label="triangleDneg1_2")


def expr_triangleDneg1_3(m: int, r: int) -> ClosedFormExpr:
    d = m - r
    return _tri([(AffineMu(2 * r + 1), 2 * d - 1, 1), (H + (3 * r + 1), d - 1, 1),
                 (H + (2 * m + r - HALF), d, 1), (AffineMu(HALF), d, -1),
                 (AffineMu(d), d - 1, -1), (MU + (2 * r - 1), 2 * d - 1, -1)],
                sign=(-1) ** d, label="triangleDneg1_3")


# --------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Target:
    """What a formula equals: ``num`` (a determinant) or ``num / den``.

    ``kind`` is "det", "ratio", "eps" (an eps-limit handled by the epsilon
    module) or "identity" (compared with another registered formula).
    """

    kind: str
    num: FamilySpec | None = None
    den: FamilySpec | None = None
    ref: tuple = ()


@dataclass(frozen=True)
class Formula:
    fid: str
    params: tuple[str, ...]
    condition: Callable[..., bool]
    condition_text: str
    expr: Callable[..., ClosedFormExpr] | None
    target: Callable[..., Target]
    value: Callable[..., RatFuncMu] | None = None

    def check_params(self, **p) -> dict:
        missing = [k for k in self.params if k not in p]
        if missing:
            raise ValueError(f"{self.fid} needs parameters {', '.join(missing)}")
        p = {k: int(p[k]) for k in self.params}
        if not self.condition(**p):
            raise ValueError(f"{self.fid}: parameters {p} violate {self.condition_text}")
        return p

    def evaluate(self, **p) -> RatFuncMu:
        p = self.check_params(**p)
        if self.value is not None:
            return self.value(**p)
        return self.expr(**p).evaluate()

    def grid(self, max_m: int, max_r: int | None = None, max_n: int = 6):
        """All in-range parameter dicts with m <= max_m, r <= max_r."""
        max_r = max_m if max_r is None else max_r
        ranges = {"m": range(0, max_m + 1), "r": range(0, max_r + 1),
                  "s": range(0, 5), "t": range(0, 5), "n": range(1, max_n + 1)}
        out = [{}]
        for name in self.params:
            out = [dict(d, **{name: v}) for d in out for v in ranges[name]]
        return [d for d in out if self.condition(**d)]


def _det(family, s, t, n, mu=MU) -> FamilySpec:
    return FamilySpec(family, s, t, n, mu)


def _kt24_value(family: str):
    def value(m: int, r: int) -> RatFuncMu:
        spec = FamilySpec(family, 0, 0, 2 * m - 2 * r + 2, AffineMu(1, -1) - 6 * m)
        return RatFuncMu.coerce(determinant(spec))
    return value


def _registry() -> dict[str, Formula]:
    M3 = MU + 3
    mr_ge = (lambda m, r: m >= r >= 1, "m >= r >= 1")
    mr_gt1 = (lambda m, r: m > r >= 1, "m > r >= 1")
    mr_gt0 = (lambda m, r: m > r >= 0, "m > r >= 0")
    m_ge = (lambda m: m >= 1, "m >= 1")
    f = [
        Formula("detwithnoKD", ("s", "t", "n"), lambda s, t, n: t >= 0 and n >= 1,
                "t >= 0, n >= 1", expr_detwithnoKD, lambda s, t, n: Target("det", _det("B", s, t, n))),
        Formula("E11", ("m",), *m_ge, expr_E11,
                lambda m: Target("det", _det("E", 1, 1, 2 * m - 1))),
        Formula("Es0_2r_even_zero", ("m", "r"), *mr_gt0, lambda m, r: expr_Es0("2r_even_zero", m, r),
                lambda m, r: Target("det", _det("E", 2 * r, 0, 2 * m - 1))),
        Formula("Es0_2r_even", ("m", "r"), *mr_gt0, lambda m, r: expr_Es0("2r_even", m, r),
                lambda m, r: Target("det", _det("E", 2 * r, 0, 2 * m))),
        Formula("Es0_2r+1_odd", ("m", "r"), *mr_gt0, lambda m, r: expr_Es0("2r+1_odd", m, r),
                lambda m, r: Target("det", _det("E", 2 * r + 1, 0, 2 * m - 1))),
        Formula("Es0_2r+1_even", ("m", "r"), *mr_gt0, lambda m, r: expr_Es0("2r+1_even", m, r),
                lambda m, r: Target("det", _det("E", 2 * r + 1, 0, 2 * m))),
        Formula("Krat37nice", ("m", "r"), *mr_ge, expr_Krat37nice,
                lambda m, r: Target("det", _det("E", 2 * r - 1, 1, 2 * m - 1))),
        Formula("Krat37ugly", ("m", "r"), *mr_ge, expr_Krat37ugly,
                lambda m, r: Target("det", _det("E", 1, 2 * r - 1, 2 * m - 1), ref=("Krat37nice",))),
        Formula("KTConj20", ("m", "r"), *mr_ge, expr_KTConj20,
                lambda m, r: Target("det", _det("D", 2 * r, 1, 2 * m))),
        Formula("Eneg1CF", ("m", "r"), *mr_ge, expr_Eneg1CF,
                lambda m, r: Target("det", _det("E", -1, 2 * r - 1, 2 * m + 1))),
        Formula("ktconj21", ("m", "r"), *mr_gt0, expr_ktconj21,
                lambda m, r: Target("det", _det("D", -1, 2 * r, 2 * m))),
        Formula("CancelPoch_L", ("m",), *m_ge, expr_CancelPoch_L,
                lambda m: Target("identity", ref=("CancelPoch_R",))),
        Formula("CancelPoch_R", ("m",), *m_ge, expr_CancelPoch_R,
                lambda m: Target("identity", ref=("CancelPoch_L",))),
        Formula("biglemma1_a", ("m", "r"), *mr_ge, expr_biglemma1_a,
                lambda m, r: Target("ratio", _det("D", 2 * r, 1, 2 * m), _det("E", 2 * r - 1, 1, 2 * m - 1, M3))),
        Formula("biglemma1_b", ("m", "r"), *mr_ge, expr_biglemma1_b,
                lambda m, r: Target("ratio", _det("E", 2 * r + 1, 1, 2 * m + 1), _det("D", 2 * r, 1, 2 * m, M3))),
        Formula("biglemma2_a", ("m", "r"), *mr_gt1, expr_biglemma2_a,
                lambda m, r: Target("eps", ref=("biglemma2_a",))),
        Formula("biglemma2_b", ("m", "r"), *mr_gt0, expr_biglemma2_b,
                lambda m, r: Target("eps", ref=("biglemma2_b",))),
        Formula("quoED1", ("m",), *m_ge, expr_quoED1, lambda m: Target("eps", ref=("quoED1",))),
        Formula("EDCor1", ("m",), *m_ge, expr_EDCor1,
                lambda m: Target("ratio", _det("E", 1, 1, 2 * m), _det("D", 0, 1, 2 * m - 1, M3))),
        Formula("EDCor2", ("m",), *m_ge, expr_EDCor2,
                lambda m: Target("ratio", _det("E", 2, 2, 2 * m + 1), _det("D", 1, 2, 2 * m, M3))),
        Formula("triangleE1_1", ("m", "r"), *mr_gt1, expr_triangleE1_1,
                lambda m, r: Target("ratio", _det("E", 2 * r, 1, 2 * m + 1), _det("E", 2 * r, 1, 2 * m))),
        Formula("triangleE1_2", ("m", "r"), *mr_gt1, expr_triangleE1_2,
                lambda m, r: Target("ratio", _det("E", 2 * r, 1, 2 * m + 1), _det("E", 2 * r + 1, 1, 2 * m))),
        Formula("triangleE1_3", ("m", "r"), *mr_gt1, expr_triangleE1_3,
                lambda m, r: Target("ratio", _det("E", 2 * r + 1, 1, 2 * m), _det("E", 2 * r, 1, 2 * m))),
        Formula("triangleEneg1_1", ("m", "r"), lambda m, r: m - 1 > r >= 1, "m-1 > r >= 1",
                expr_triangleEneg1_1,
                lambda m, r: Target("ratio", _det("E", -1, 2 * r, 2 * m), _det("E", -1, 2 * r, 2 * m - 1))),
        Formula("triangleEneg1_2", ("m", "r"), lambda m, r: m - 1 > r >= 1, "m-1 > r >= 1",
                expr_triangleEneg1_2,
                lambda m, r: Target("ratio", _det("E", -1, 2 * r, 2 * m), _det("E", -1, 2 * r - 1, 2 * m))),
        Formula("triangleEneg1_3", ("m", "r"), lambda m, r: m - 1 > r >= 1, "m-1 > r >= 1",
                expr_triangleEneg1_3,
                lambda m, r: Target("ratio", _det("E", -1, 2 * r - 1, 2 * m), _det("E", -1, 2 * r, 2 * m - 1))),
        Formula("triangleD1_1", ("m", "r"), *mr_gt1, expr_triangleD1_1,
                lambda m, r: Target("ratio", _det("D", 2 * r - 1, 1, 2 * m), _det("D", 2 * r - 1, 1, 2 * m - 1))),
        Formula("triangleD1_2", ("m", "r"), *mr_gt1, expr_triangleD1_2,
                lambda m, r: Target("ratio", _det("D", 2 * r, 1, 2 * m - 1), _det("D", 2 * r - 1, 1, 2 * m))),
        Formula("triangleD1_3", ("m", "r"), *mr_gt1, expr_triangleD1_3,
                lambda m, r: Target("ratio", _det("D", 2 * r, 1, 2 * m - 1), _det("D", 2 * r - 1, 1, 2 * m - 1))),
        Formula("triangleDneg1_1", ("m", "r"), *mr_gt0, expr_triangleDneg1_1,
                lambda m, r: Target("ratio", _det("D", -1, 2 * r + 1, 2 * m + 1), _det("D", -1, 2 * r + 1, 2 * m))),
        Formula("triangleDneg1_2", ("m", "r"), *mr_gt0, expr_triangleDneg1_2,
                lambda m, r: Target("ratio", _det("D", -1, 2 * r + 1, 2 * m + 1), _det("D", -1, 2 * r, 2 * m + 1))),
        Formula("triangleDneg1_3", ("m", "r"), *mr_gt0, expr_triangleDneg1_3,
                lambda m, r: Target("ratio", _det("D", -1, 2 * r, 2 * m + 1), _det("D", -1, 2 * r + 1, 2 * m))),
        Formula("KTConj24_map_D", ("m", "r"), *mr_ge, None,
                lambda m, r: Target("det", _det("D", 2 * r - 1, 0, 2 * m + 1)), value=_kt24_value("D")),
        Formula("KTConj24_map_E", ("m", "r"), *mr_ge, None,
                lambda m, r: Target("det", _det("E", 2 * r - 1, 0, 2 * m + 1)), value=_kt24_value("E")),
    ]
    return {x.fid: x for x in f}


REGISTRY: dict[str, Formula] = _registry()

RATIO_PREFIXES = ("biglemma", "quoED1", "EDCor", "triangle", "KTConj24_map")
RATIO_IDS = tuple(k for k in REGISTRY if k.startswith(RATIO_PREFIXES))


def closed_form(fid: str, **params) -> RatFuncMu:
    try:
        formula = REGISTRY[fid]
    except KeyError:
        raise ValueError(f"unknown formula id {fid!r}") from None
    return formula.evaluate(**params)


def target_value(fid: str, **params) -> RatFuncMu:
    """The determinant side of a det/ratio formula, computed directly."""
    formula = REGISTRY[fid]
    p = formula.check_params(**params)
    tg = formula.target(**p)
    if tg.kind == "det":
        return RatFuncMu.coerce(determinant(tg.num))
    if tg.kind == "ratio":
        den = determinant(tg.den)
        if not den:
            raise ZeroDivisionError(f"{tg.den.label()} vanishes")
        return RatFuncMu(determinant(tg.num), den)
    raise ValueError(f"{fid} has no direct determinant target (kind {tg.kind})")


# thin named wrappers -------------------------------------------------------


def cf_detwithnoKD(s: int, t: int, n: int) -> RatFuncMu:
    return closed_form("detwithnoKD", s=s, t=t, n=n)


def cf_E11(m: int) -> RatFuncMu:
    return closed_form("E11", m=m)


def cf_Es0(variant: str, m: int, r: int) -> RatFuncMu:
    if variant not in ES0_VARIANTS:
        raise ValueError(f"unknown Es0 variant {variant!r}")
    return closed_form(f"Es0_{variant}", m=m, r=r)


def cf_Krat37nice(m: int, r: int) -> RatFuncMu:
    return closed_form("Krat37nice", m=m, r=r)


def cf_Krat37ugly(m: int, r: int) -> RatFuncMu:
    return closed_form("Krat37ugly", m=m, r=r)


def cf_KTConj20(m: int, r: int) -> RatFuncMu:
    return closed_form("KTConj20", m=m, r=r)


def cf_Eneg1CF(m: int, r: int) -> RatFuncMu:
    return closed_form("Eneg1CF", m=m, r=r)


def cf_ktconj21(m: int, r: int) -> RatFuncMu:
    return closed_form("ktconj21", m=m, r=r)


def cf_ratio(rid: str, **params) -> RatFuncMu:
    if rid == "KTConj24_map":
        family = params.pop("family", "D")
        rid = f"KTConj24_map_{family}"
    if rid not in RATIO_IDS:
        raise ValueError(f"unknown ratio id {rid!r}")
    return closed_form(rid, **params)


def cancel_poch_sides(m: int) -> tuple[RatFuncMu, RatFuncMu]:
    return closed_form("CancelPoch_L", m=m), closed_form("CancelPoch_R", m=m)


def krat37_switch_prefactor(m: int, r: int) -> RatFuncMu:
    """prod_{i=0}^{2r-3} (mu+i)_{2m-1} / (i+2)_{2m-1}."""
    fs = []
    for i in range(2 * r - 2):
        fs += [(MU + i, 2 * m - 1, 1), (AffineMu(i + 2), 2 * m - 1, -1)]
    return ClosedFormExpr.build(fs).evaluate()
