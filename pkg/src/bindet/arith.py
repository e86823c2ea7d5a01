"""Exact arithmetic over Q and Q[mu].

``PolyMu`` stores an integer coefficient vector together with one positive
common denominator, so that all the heavy lifting happens on Python ints.
``RatFuncMu`` is always reduced with a monic denominator.  ``AffineMu`` is
the type of Pochhammer bases such as mu/2 + 3r - 1/2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence, Union

from . import _zpoly as zp

Scalar = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """A denominator evaluated to zero (degenerate parameter choice)."""


# --------------------------------------------------------------------------
# rationals

_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    m = _RAT.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den or 1))


def format_rational(q) -> str:
    q = to_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# polynomials


class PolyMu:
    """Univariate polynomial in mu with rational coefficients (immutable)."""

    __slots__ = ("_c", "_d")

    def __init__(self, coefficients: Iterable = ()):
        fr = [to_rational(x) for x in coefficients]
        d = lcm(*(f.denominator for f in fr)) if fr else 1
        self._set([f.numerator * (d // f.denominator) for f in fr], d)

    @classmethod
    def _make(cls, c: list[int], d: int = 1) -> "PolyMu":
        obj = object.__new__(cls)
        obj._set(c, d)
        return obj

    def _set(self, c: list[int], d: int) -> None:
        zp.trim(c)
        if not c:
            self._c, self._d = (), 1
            return
        if d < 0:
            c, d = [-x for x in c], -d
        g = gcd(gcd(*c), d)
        if g > 1:
            c = [x // g for x in c]
            d //= g
        self._c, self._d = tuple(c), d

    # constructors
    @classmethod
    def constant(cls, x) -> "PolyMu":
        q = to_rational(x)
        return cls._make([q.numerator], q.denominator)

    @classmethod
    def mu(cls) -> "PolyMu":
        return cls._make([0, 1])

    @classmethod
    def from_int_coeffs(cls, c: Sequence[int], d: int = 1) -> "PolyMu":
        return cls._make(list(c), d)

    # views
    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._d) for x in self._c)

    @property
    def int_coeffs(self) -> tuple[tuple[int, ...], int]:
        """(integer numerators, common denominator)."""
        return self._c, self._d

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def leading(self) -> Fraction:
        return Fraction(self._c[-1], self._d) if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def constant_value(self) -> Fraction:
        if len(self._c) > 1:
            raise ValueError("polynomial is not constant")
        return Fraction(self._c[0], self._d) if self._c else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._c)

    # arithmetic
    @staticmethod
    def _coerce(x) -> "PolyMu | None":
        if isinstance(x, PolyMu):
            return x
        if isinstance(x, (int, Fraction)):
            return PolyMu.constant(x)
        if isinstance(x, AffineMu):
            return x.to_poly()
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._c:
            return self
        if not self._c:
            return o
        d = lcm(self._d, o._d)
        return PolyMu._make(zp.add(zp.scale(self._c, d // self._d),
                                   zp.scale(o._c, d // o._d)), d)

    __radd__ = __add__

    def __neg__(self) -> "PolyMu":
        return PolyMu._make([-x for x in self._c], self._d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PolyMu._make(zp.mul(self._c, o._c), self._d * o._d)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PolyMu":
        if e < 0:
            raise ValueError("negative power of a polynomial; use RatFuncMu")
        out, base = PolyMu.constant(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = to_rational(other)
            if not q:
                raise PoleError("division by zero")
            return PolyMu._make([x * q.denominator for x in self._c], self._d * q.numerator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFuncMu(self, o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFuncMu(o, self)

    def __divmod__(self, other: "PolyMu") -> tuple["PolyMu", "PolyMu"]:
        o = self._coerce(other)
        if not o:
            raise PoleError("division by the zero polynomial")
        r = list(self.coefficients)
        b = o.coefficients
        db = len(b) - 1
        q = [Fraction(0)] * max(len(r) - db, 0)
        for k in range(len(r) - 1 - db, -1, -1):
            coef = r[k + db] / b[-1]
            q[k] = coef
            if coef:
                for i in range(db + 1):
                    r[k + i] -= coef * b[i]
        return PolyMu(q), PolyMu(r[:db] if db else [])

    def exact_div(self, other: "PolyMu") -> "PolyMu":
        """Quotient when ``other`` divides ``self``; raises otherwise."""
        o = self._coerce(other)
        if not o:
            raise PoleError("division by the zero polynomial")
        q = zp.divexact(list(self._c), zp.primitive(o._c))
        if q is None:
            raise ArithmeticError("polynomial division is not exact")
        # o = cont * prim(o) / o._d
        cont = gcd(*o._c) * (1 if o._c[-1] > 0 else -1)
        return PolyMu._make(q, self._d * cont) * PolyMu._make([o._d])

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, RatFuncMu):
                return other == self
            return NotImplemented
        return self._c == o._c and self._d == o._d

    def __hash__(self) -> int:
        if len(self._c) <= 1:
            return hash(self.constant_value())
        return hash((self._c, self._d))

    # evaluation and substitution
    def evaluate(self, x) -> Fraction:
        x = to_rational(x)
        p, q = x.numerator, x.denominator
        acc = 0
        k = len(self._c) - 1
        qp = 1
        # Horner on the homogenized form: sum c_i p^i q^(k-i)
        for c in reversed(self._c):
            acc = acc * p + c * qp
            qp *= q
        return Fraction(acc, self._d * q ** k) if self._c else Fraction(0)

    def compose(self, inner) -> "PolyMu":
        """self(inner) for a polynomial or affine ``inner``."""
        inner = self._coerce(inner)
        out = PolyMu()
        for c in reversed(self.coefficients):
            out = out * inner + c
        return out

    def monic(self) -> "PolyMu":
        if not self._c:
            return self
        return PolyMu._make(list(self._c), self._c[-1])

    def derivative(self) -> "PolyMu":
        return PolyMu._make([i * c for i, c in enumerate(self._c)][1:], self._d)

    # text
    def canonical(self) -> str:
        return "[" + ", ".join(format_rational(c) for c in self.coefficients) + "]"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            c = Fraction(self._c[i], self._d)
            if not c:
                continue
            mag = abs(c)
            if i == 0:
                body = format_rational(mag)
            else:
                var = "mu" if i == 1 else f"mu^{i}"
                body = var if mag == 1 else f"{format_rational(mag)}*{var}"
            terms.append(("-" if c < 0 else "+", body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for s, b in terms[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self) -> str:
        return f"PolyMu({self})"


def poly_gcd(a: PolyMu, b: PolyMu) -> PolyMu:
    """Monic gcd over Q (zero only if both inputs are zero)."""
    g = zp.poly_gcd(list(a._c), list(b._c))
    return PolyMu._make(g).monic() if g else PolyMu()


MU_POLY = PolyMu.mu()


# --------------------------------------------------------------------------
# rational functions


class RatFuncMu:
    """Reduced quotient of two polynomials with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1, *, reduced: bool = False):
        n = PolyMu._coerce(num)
        d = PolyMu._coerce(den)
        if n is None or d is None:
            raise TypeError("RatFuncMu parts must be polynomials or rationals")
        if not d:
            raise PoleError("zero denominator")
        if reduced:
            self.num, self.den = n, d
            return
        if not n:
            self.num, self.den = PolyMu(), PolyMu.constant(1)
            return
        if d.degree == 0:
            self.num, self.den = n / d.constant_value(), PolyMu.constant(1)
            return
        nc, nd = n._c, n._d
        dc, dd = d._c, d._d
        g = zp.poly_gcd(list(nc), list(dc))
        if len(g) > 1:
            nc = zp.divexact(list(nc), g)
            dc = zp.divexact(list(dc), g)
        # num/den = (nc/nd) / (dc/dd); make the denominator monic
        lead = dc[-1]
        self.num = PolyMu._make(list(nc), nd * lead) * Fraction(dd)
        self.den = PolyMu._make(list(dc), lead)

    @classmethod
    def coerce(cls, x) -> "RatFuncMu":
        if isinstance(x, RatFuncMu):
            return x
        p = PolyMu._coerce(x)
        if p is None:
            raise TypeError(f"cannot coerce {x!r} to RatFuncMu")
        return cls(p, PolyMu.constant(1), reduced=True)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> PolyMu:
        if not self.is_polynomial():
            raise ValueError("rational function is not a polynomial")
        return self.num

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __add__(self, other):
        try:
            o = RatFuncMu.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            if self.den.degree == 0:
                return RatFuncMu(self.num + o.num, reduced=True)
            return RatFuncMu(self.num + o.num, self.den)
        return RatFuncMu(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFuncMu(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        try:
            o = RatFuncMu.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return RatFuncMu.coerce(other) - self

    def __mul__(self, other):
        try:
            o = RatFuncMu.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_polynomial() and o.is_polynomial():
            return RatFuncMu(self.num * o.num, reduced=True)
        return RatFuncMu(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncMu":
        if not self.num:
            raise PoleError("inverse of zero")
        return RatFuncMu(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = RatFuncMu.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            raise PoleError("division by zero")
        return RatFuncMu(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFuncMu.coerce(other) / self

    def __pow__(self, e: int) -> "RatFuncMu":
        if e < 0:
            return self.inverse() ** (-e)
        return RatFuncMu(self.num ** e, self.den ** e, reduced=True)

    def __eq__(self, other) -> bool:
        try:
            o = RatFuncMu.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self.is_polynomial():
            return hash(self.num)
        return hash((self.num, self.den))

    def evaluate(self, x) -> Fraction:
        d = self.den.evaluate(x)
        if not d:
            raise PoleError(f"pole at mu = {format_rational(x)}")
        return self.num.evaluate(x) / d

    def compose(self, inner) -> "RatFuncMu":
        return RatFuncMu(self.num.compose(inner), self.den.compose(inner))

    def canonical(self) -> str:
        """Ascending coefficient lists, "num / den"; the denominator is
        omitted when it is 1."""
        if self.is_polynomial():
            return self.num.canonical()
        return f"{self.num.canonical()} / {self.den.canonical()}"

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RatFuncMu({self})"


def parse_canonical(text: str) -> RatFuncMu:
    """Inverse of ``RatFuncMu.canonical`` (also accepts a bare rational)."""
    text = text.strip()
    if not text.startswith("["):
        return RatFuncMu.coerce(parse_rational(text))
    num_s, _, den_s = text.partition("/ [")
    num = _parse_list(num_s.strip())
    den = _parse_list("[" + den_s) if den_s else PolyMu.constant(1)
    return RatFuncMu(num, den)


def _parse_list(text: str) -> PolyMu:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"malformed coefficient list {text!r}")
    inner = body[1:-1].strip()
    return PolyMu([parse_rational(t) for t in inner.split(",")] if inner else [])


# --------------------------------------------------------------------------
# affine bases


@dataclass(frozen=True)
class AffineMu:
    """slope*mu + constant."""

    constant: Fraction = Fraction(0)
    slope: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "constant", to_rational(self.constant))
        object.__setattr__(self, "slope", to_rational(self.slope))

    @staticmethod
    def _lift(x) -> "AffineMu | None":
        if isinstance(x, AffineMu):
            return x
        if isinstance(x, (int, Fraction)):
            return AffineMu(x, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AffineMu(self.constant + o.constant, self.slope + o.slope)

    __radd__ = __add__

    def __neg__(self):
        return AffineMu(-self.constant, -self.slope)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return AffineMu(self.constant * k, self.slope * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return AffineMu(self.constant / k, self.slope / k)

    def is_constant(self) -> bool:
        return self.slope == 0

    def to_poly(self) -> PolyMu:
        return PolyMu([self.constant, self.slope])

    def evaluate(self, x) -> Fraction:
        return self.slope * to_rational(x) + self.constant

    def substitute(self, inner: "AffineMu") -> "AffineMu":
        """self with mu replaced by ``inner``."""
        return AffineMu(self.constant + self.slope * inner.constant, self.slope * inner.slope)

    def __str__(self) -> str:
        return str(self.to_poly())


MU = AffineMu(0, 1)


# --------------------------------------------------------------------------
# Pochhammer symbols and binomials


def _rising(base: AffineMu, length: int) -> PolyMu:
    """base (base+1) ... (base+length-1) for length >= 0, via a product tree."""
    factors = [(base + i).to_poly() for i in range(length)]
    if not factors:
        return PolyMu.constant(1)
    while len(factors) > 1:
        nxt = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    return factors[0]


def poch(base, length: int) -> RatFuncMu:
    """Rising factorial (base)_length, with (a)_{-b} = 1/(a-b)_b."""
    base = AffineMu._lift(base) if not isinstance(base, AffineMu) else base
    if base is None:
        raise TypeError("Pochhammer base must be affine in mu")
    if length >= 0:
        return RatFuncMu.coerce(_rising(base, length))
    den = _rising(base + length, -length)
    if not den:
        raise PoleError(f"({base})_{length} has a zero factor in its denominator")
    return RatFuncMu(PolyMu.constant(1), den)


def gbinom(upper, lower: int) -> PolyMu:
    """binom(upper, lower) for affine ``upper`` and integer ``lower``;
    zero for negative ``lower``."""
    upper = AffineMu._lift(upper) if not isinstance(upper, AffineMu) else upper
    if lower < 0:
        return PolyMu()
    return _rising(upper - lower + 1, lower) / factorial(lower)


def gbinom_eps_first_order(x, k: int) -> RatFuncMu:
    """Coefficient of eps in binom(x + 2 eps, k + eps) for k <= -1."""
    if k > -1:
        raise ValueError("first-order coefficient is only housed for negative k")
    x = AffineMu._lift(x) if not isinstance(x, AffineMu) else x
    sign = 1 if (k + 1) % 2 == 0 else -1
    den = _rising(x + 1, -k)
    if not den:
        raise PoleError(f"({x + 1})_{-k} vanishes")
    return RatFuncMu(PolyMu.constant(sign * factorial(-k - 1)), den)


def pascal_step(x, y: int) -> tuple[PolyMu, PolyMu, PolyMu]:
    """(binom(x+1, y), binom(x, y), binom(x, y-1)); first - second == third."""
    x = AffineMu._lift(x) if not isinstance(x, AffineMu) else x
    return gbinom(x + 1, y), gbinom(x, y), gbinom(x, y - 1)


def pascal_sum(x, y: int, j: int) -> PolyMu:
    """sum_{l=0}^{j-1} binom(x+l, y+l); checked against the closed form."""
    if j < 1:
        raise ValueError("pascal_sum needs j >= 1")
    x = AffineMu._lift(x) if not isinstance(x, AffineMu) else x
    total = PolyMu()
    for ell in range(j):
        total = total + gbinom(x + ell, y + ell)
    closed = gbinom(x + j, y + j - 1) - gbinom(x, y - 1)
    if total != closed:
        raise ArithmeticError("summed Pascal identity failed")
    return total
