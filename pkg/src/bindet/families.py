"""The binomial matrix families and the matrices derived from them.

Entry (i, j) of the family matrix is

    binom(mu + i + j + s + t - 4, j + t - 1) + sigma * delta(i + s, j + t)

with sigma = +1 for D, -1 for E and 0 for B.  A ``FamilySpec`` may replace
mu by any affine expression (mu + 3, 1 - mu - 6m, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import factorial

from .arith import MU, AffineMu, PoleError, PolyMu, RatFuncMu, gbinom, poch
from .matrix import ExactMatrix, det, minor_det, MinorSpec

SIGMA = {"D": 1, "E": -1, "B": 0}


def other_family(family: str) -> str:
    return {"D": "E", "E": "D"}[family]


@dataclass(frozen=True)
class FamilySpec:
    family: str
    s: int
    t: int
    n: int
    mu: AffineMu = field(default=MU)

    def __post_init__(self):
        if self.family not in SIGMA:
            raise ValueError(f"family must be D, E or B, not {self.family!r}")
        if self.n < 0:
            raise ValueError("matrix size must be nonnegative")

    @property
    def sigma(self) -> int:
        return SIGMA[self.family]

    def with_(self, **kw) -> "FamilySpec":
        d = dict(family=self.family, s=self.s, t=self.t, n=self.n, mu=self.mu)
        d.update(kw)
        return FamilySpec(**d)

    def label(self) -> str:
        sup = "" if self.mu == MU else f"^({self.mu})"
        return f"{self.family}_{{{self.s},{self.t}}}{sup}({self.n})"


def entry(spec: FamilySpec, i: int, j: int) -> PolyMu:
    s, t = spec.s, spec.t
    val = gbinom(spec.mu + (i + j + s + t - 4), j + t - 1)
    if spec.sigma and i + s == j + t:
        val = val + spec.sigma
    return val


def build_matrix(spec: FamilySpec) -> ExactMatrix:
    n = spec.n
    return ExactMatrix([[entry(spec, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])


@lru_cache(maxsize=8192)
def determinant(spec: FamilySpec) -> PolyMu:
    return det(build_matrix(spec)).as_poly()


def delta_positions(spec: FamilySpec) -> list[tuple[int, int]]:
    """1-based (row, column) positions carrying a Kronecker delta."""
    n, d = spec.n, spec.s - spec.t
    if d >= 0:
        return [(i, i + d) for i in range(1, n - d + 1)]
    return [(j - d, j) for j in range(1, n + d + 1)]


def minor_weight(spec: FamilySpec) -> int:
    """Weight per deleted delta: (-1)^(|s-t|+1) for E, (-1)^|s-t| for D."""
    d = abs(spec.s - spec.t)
    if spec.family == "E":
        return -1 if d % 2 == 0 else 1
    if spec.family == "D":
        return -1 if d % 2 == 1 else 1
    raise ValueError("sum of minors is defined for D and E only")


def sum_of_minors(spec: FamilySpec) -> PolyMu:
    """Expand the delta-perturbed determinant as a signed sum of minors of B."""
    w = minor_weight(spec)
    bmat = build_matrix(spec.with_(family="B"))
    pos = delta_positions(spec)
    if len(pos) > 20:
        raise ValueError("too many deltas for subset enumeration")
    total = PolyMu()
    for k in range(len(pos) + 1):
        sub = PolyMu()
        for subset in combinations(pos, k):
            ms = MinorSpec(tuple(r for r, _ in subset), tuple(c for _, c in subset))
            sub = sub + minor_det(bmat, ms).as_poly()
        total = total + (sub if w ** k == 1 else -sub)
    return total


# --------------------------------------------------------------------------
# switching


@dataclass(frozen=True)
class SwitchVectors:
    """u_i, v_j with u_i v_j equal to the gamma quotient
    Gamma(mu+t+i-2) Gamma(j+s) / (Gamma(i+t) Gamma(mu+s+j-2)).

    The common factor Gamma(mu+n-3) of the original vectors cancels in every
    product u_i v_j, so it is traded for Gamma(mu+t-1), which turns both
    vectors into rational functions.
    """

    s: int
    t: int
    n: int
    u: tuple[RatFuncMu, ...]
    v: tuple[RatFuncMu, ...]


def switch_vectors(s: int, t: int, n: int) -> SwitchVectors:
    if s < 0 or t < 0:
        raise ValueError("switching is implemented for integer s, t >= 0")
    if n < 1:
        raise ValueError("n must be positive")
    base = MU + (t - 1)
    u = tuple(poch(base, i - 1) / factorial(i + t - 1) for i in range(1, n + 1))
    v = tuple(poch(base, j + s - t - 1).inverse() * factorial(j + s - 1) for j in range(1, n + 1))
    return SwitchVectors(s, t, n, u, v)


def uv1_holds(sv: SwitchVectors) -> bool:
    k = sv.t - sv.s
    one = RatFuncMu.coerce(1)
    return all(sv.u[i - 1] * sv.v[i + k - 1] == one
               for i in range(1, sv.n + 1) if 1 <= i + k <= sv.n)


def switch_prefactor(s: int, t: int, n: int) -> RatFuncMu:
    """prod_{i=0}^{t-s-1} (mu+s+i-1)_n / (i+s+1)_n."""
    out = RatFuncMu.coerce(1)
    for i in range(t - s):
        out = out * poch(MU + (s + i - 1), n) / poch(AffineMu(i + s + 1), n)
    return out


def uv2_holds(sv: SwitchVectors) -> bool:
    prod = RatFuncMu.coerce(1)
    for a, b in zip(sv.u, sv.v):
        prod = prod * a * b
    return prod == switch_prefactor(sv.s, sv.t, sv.n)


def switched_determinant(family: str, s: int, t: int, n: int) -> PolyMu:
    """prefactor(s, t, n) * det A_{t,s}(n) for t - s >= 1."""
    if s < 0 or t - s < 1:
        raise ValueError("switching needs integers 0 <= s < t")
    val = switch_prefactor(s, t, n) * RatFuncMu.coerce(determinant(FamilySpec(family, t, s, n)))
    return val.as_poly()


def factor_diag_mismatches(family: str, s: int, t: int, n: int) -> int:
    """Number of entries where transpose(A_{s,t}) != diag(u) A_{t,s} diag(v)."""
    if not 0 <= s <= t:
        raise ValueError("factor identity is stated for 0 <= s <= t")
    sv = switch_vectors(s, t, n)
    lhs = build_matrix(FamilySpec(family, s, t, n)).transpose()
    rhs = build_matrix(FamilySpec(family, t, s, n))
    bad = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if lhs[i, j] != sv.u[i - 1] * rhs[i, j] * sv.v[j - 1]:
                bad += 1
    return bad


# --------------------------------------------------------------------------
# transformed matrices from the ansatz and eps-limit arguments


@dataclass(frozen=True)
class TransformedMatrixSpec:
    kind: str
    s: int
    n: int
    family: str | None = None

    KINDS = ("biglemma1_tilde", "quoED1_tilde", "appendix_Atilde", "appendix_Btilde")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown transformed matrix {self.kind!r}")
        if self.family is not None and self.family not in ("D", "E"):
            raise ValueError("transformed matrices start from a D or E matrix")

    @property
    def outer_family(self) -> str:
        """Family of the matrix being transformed; by default D for even s."""
        if self.family is not None:
            return self.family
        return "D" if self.s % 2 == 0 else "E"


def build_transformed(spec: TransformedMatrixSpec) -> ExactMatrix:
    kind, s, n = spec.kind, spec.s, spec.n
    if kind == "biglemma1_tilde":
        if s < 2 or n < 1:
            raise ValueError("biglemma1_tilde needs s >= 2 and n >= 1")
        return _biglemma1_tilde(SIGMA[spec.outer_family], s, n)
    if kind == "quoED1_tilde":
        if n < 3 or n % 2 == 0:
            raise ValueError("quoED1_tilde needs odd n = 2m+1 >= 3")
        return _quo_ed1_tilde(n - 1)
    if s < 1 or n < 2:
        raise ValueError("appendix matrices need s >= 1 and n >= 2")
    inner = build_matrix(FamilySpec(other_family(spec.outer_family), s - 1, 0, n - 1, MU + 3))
    if kind == "appendix_Atilde":
        first = [poch(MU + (s + i - 3), 2).inverse() for i in range(1, n)]
    else:
        first = [RatFuncMu.coerce(1) / (MU + (s + i - 1)).to_poly() for i in range(1, n)]
    return ExactMatrix([[first[i - 1]] + [inner[i, j] for j in range(1, n - 1)]
                        for i in range(1, n)])


def _biglemma1_tilde(sigma: int, s: int, n: int) -> ExactMatrix:
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == 1:
                val = gbinom(MU + (j + s - 1), j) - 1
                if j >= 2 and s <= j:
                    val = val + sigma
            elif j == 1:
                val = PolyMu.constant(1)
            else:
                val = gbinom(MU + (i + j + s - 3), j - 1)
                if s == j - i + 2:
                    val = val - sigma
            row.append(val)
        rows.append(row)
    return ExactMatrix(rows)


def _quo_ed1_tilde(size: int) -> ExactMatrix:
    rows = []
    for i in range(1, size + 1):
        row = [poch(MU + (i - 2), 2).inverse()]
        for j in range(2, size + 1):
            val = gbinom(MU + (i + j - 2), j - 2)
            if i == j - 1:
                val = val + 1
            row.append(RatFuncMu.coerce(val))
        rows.append(row)
    return ExactMatrix(rows)


# --------------------------------------------------------------------------
# the two uniform ratio formulas


def _lin(c: int) -> PolyMu:
    return (MU + c).to_poly()


def ratio_formula(rid: str, s: int, n: int) -> RatFuncMu:
    if rid == "R_s1":
        den_scalar = 2 * n * (s - 1)
        if not den_scalar:
            raise PoleError(f"R_s1 has a pole at s={s}, n={n}")
        num = _lin(-1) * _lin(n + 1) * _lin(s) * (n + s - 2)
        den = _lin(2) * _lin(n + s - 1) * den_scalar
        return RatFuncMu(num, den)
    if rid == "R_sneg1":
        den_scalar = n + s
        if not den_scalar:
            raise PoleError(f"R_sneg1 has a pole at s={s}, n={n}")
        num = _lin(-3) * _lin(n + s - 2) * (2 * s * (n - 1))
        den = MU.to_poly() * _lin(n - 3) * _lin(s - 2) * den_scalar
        return RatFuncMu(num, den)
    raise ValueError(f"unknown ratio formula {rid!r}")


# --------------------------------------------------------------------------
# Desnanot-Jacobi-Dodgson on the doubly infinite arrays


def djd_sides(family: str, s: int, t: int, n: int) -> tuple[PolyMu, PolyMu]:
    """Both sides of the condensation identity for windows of the array
    a(I, J) = binom(mu+I+J-4, J-1) + sigma*delta(I, J)."""
    if n < 2:
        raise ValueError("condensation needs n >= 2")

    def m(a: int, b: int, k: int) -> PolyMu:
        return determinant(FamilySpec(family, a, b, k))

    lhs = m(s, t, n) * m(s + 1, t + 1, n - 2)
    rhs = m(s, t, n - 1) * m(s + 1, t + 1, n - 1) - m(s + 1, t, n - 1) * m(s, t + 1, n - 1)
    return lhs, rhs
