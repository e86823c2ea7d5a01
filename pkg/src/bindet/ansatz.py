"""Holonomic-ansatz workflow: cofactor-ratio systems, the summation
identities they must satisfy, and recurrence guessing from exact data.

All systems here are square and solved fraction-free, so a solution comes
back as polynomial numerators over one common denominator.  Identities are
checked by cross-multiplying with that denominator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .arith import MU, PolyMu, RatFuncMu, gbinom, poch
from .closed_forms import closed_form
from .families import (SIGMA, TransformedMatrixSpec, build_matrix, build_transformed,
                       FamilySpec, other_family, ratio_formula)
from .matrix import ExactMatrix, SingularMatrixError, cofactor, solve_fraction_free, solve_rational

SYSTEMS = ("sys1", "sys3", "sys2_appendix", "syseps")
IDENTITIES = {"biglemma1": "sys1", "quoED1": "sys3", "appendix": "sys2_appendix",
              "biglemma2": "syseps"}


@dataclass(frozen=True)
class CofactorRatioVector:
    """c_i = X_i / d.  ``offset`` is the index of the first entry (1 or 2)."""

    system: str
    s: int
    n: int
    numerators: tuple[PolyMu, ...]
    denominator: PolyMu
    offset: int = 1
    family: str = ""

    @property
    def values(self) -> tuple[RatFuncMu, ...]:
        return tuple(RatFuncMu(x, self.denominator) for x in self.numerators)

    def __getitem__(self, i: int) -> RatFuncMu:
        return RatFuncMu(self.numerators[i - self.offset], self.denominator)

    def __len__(self) -> int:
        return len(self.numerators)


def default_family(s: int) -> str:
    """Outer family of the lemma chains: D for even s, E for odd s."""
    return "D" if s % 2 == 0 else "E"


# --------------------------------------------------------------------------
# the linear systems


def system_matrix(system: str, s: int, n: int, family: str | None = None):
    """(A, b, offset) with A c = b characterizing the cofactor ratios."""
    fam = family or default_family(s)
    if system == "sys1":
        # expansion of the transformed matrix along row 1: rows 2..n of
        # A~ annihilate c, and c_1 = 1 normalizes
        at = build_transformed(TransformedMatrixSpec("biglemma1_tilde", s, n, fam))
        rows = [[1] + [0] * (n - 1)] + [at.row(i) for i in range(2, n + 1)]
        return ExactMatrix(rows), [1] + [0] * (n - 1), 1
    if system == "sys3":
        if n < 3 or n % 2 == 0:
            raise ValueError("sys3 needs odd n = 2m+1 >= 3")
        et = build_transformed(TransformedMatrixSpec("quoED1_tilde", 1, n))
        k = et.rows
        rows = [[1] + [0] * (k - 1)] + [et.column(j) for j in range(2, k + 1)]
        return ExactMatrix(rows), [1] + [0] * (k - 1), 1
    if system == "sys2_appendix":
        if n < 3:
            raise ValueError("sys2_appendix needs n >= 3")
        inner = build_matrix(FamilySpec(other_family(fam), s - 1, 0, n - 1, MU + 3))
        k = n - 1
        rows = [[1] + [0] * (k - 1)] + [inner.column(j) for j in range(1, k)]
        return ExactMatrix(rows), [1] + [0] * (k - 1), 1
    if system == "syseps":
        if n < 2:
            raise ValueError("syseps needs n >= 2")
        sigma = SIGMA[fam]
        idx = range(2, n + 1)
        rows = [[RatFuncMu(PolyMu.constant(1), (MU + (i + s - 2)).to_poly()) for i in idx]]
        for j in range(3, n + 1):
            row = []
            for i in idx:
                v = gbinom(MU + (i + j + s - 5), j - 3)
                if s == j - i:
                    v = v - sigma
                row.append(v)
            rows.append(row)
        return ExactMatrix(rows), [-1] + [0] * (n - 2), 2
    raise ValueError(f"unknown system {system!r}")


def solve_cofactor_system(system: str, s: int, n: int, family: str | None = None,
                          permutation: Sequence[int] | None = None) -> CofactorRatioVector:
    """Unique solution of the characterizing system, fraction-free.

    ``permutation`` reorders the equations first; the solution must not
    depend on it.
    """
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}")
    a, b, offset = system_matrix(system, s, n, family)
    if permutation is not None:
        if sorted(permutation) != list(range(a.rows)):
            raise ValueError("not a permutation of the equations")
        a = ExactMatrix([a.row(p + 1) for p in permutation])
        b = [b[p] for p in permutation]
    try:
        nums, d = solve_fraction_free(a, b)
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"{system} at s={s}, n={n} is singular") from exc
    if d.leading < 0:
        nums, d = [-x for x in nums], -d
    return CofactorRatioVector(system, s, n, tuple(nums), d, offset, family or default_family(s))


def cofactor_quotients(s: int, n: int, family: str | None = None) -> list[RatFuncMu]:
    """c_j = Cof(A~, 1, j) / Cof(A~, 1, 1) computed from minors."""
    at = build_transformed(TransformedMatrixSpec("biglemma1_tilde", s, n, family or default_family(s)))
    c11 = cofactor(at, 1, 1)
    return [cofactor(at, 1, j) / c11 for j in range(1, n + 1)]


# --------------------------------------------------------------------------
# identities


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    s: int
    n: int
    holds: bool
    residual: RatFuncMu
    lhs: RatFuncMu
    rhs: RatFuncMu


def _weighted(weights: Sequence, c: CofactorRatioVector) -> RatFuncMu:
    """sum_i w_i X_i (without the common denominator)."""
    total = RatFuncMu.coerce(0)
    for w, x in zip(weights, c.numerators):
        if x:
            total = total + RatFuncMu.coerce(w) * x
    return total


def identity_sides(identity: str, c: CofactorRatioVector) -> tuple[RatFuncMu, RatFuncMu]:
    """(left * d, right * d) for the identity attached to ``c``'s system."""
    s, n = c.s, c.n
    d = RatFuncMu.coerce(c.denominator)
    if identity == "biglemma1":
        at = build_transformed(TransformedMatrixSpec("biglemma1_tilde", s, n, c.family or None))
        return _weighted(at.row(1), c), ratio_formula("R_s1", s, n) * d
    if identity == "quoED1":
        et = build_transformed(TransformedMatrixSpec("quoED1_tilde", 1, n))
        return _weighted(et.column(1), c), closed_form("quoED1", m=(n - 1) // 2) * d
    if identity == "appendix":
        k = n - 1
        wa = [poch(MU + (s + i - 3), 2).inverse() for i in range(1, k + 1)]
        wb = [RatFuncMu(PolyMu.constant(1), (MU + (s + i - 1)).to_poly()) for i in range(1, k + 1)]
        return _weighted(wa, c), ratio_formula("R_sneg1", s, n) * _weighted(wb, c)
    if identity == "biglemma2":
        w = [-poch(MU + (i + s - 4), 2).inverse() for i in range(2, n + 1)]
        return _weighted(w, c), ratio_formula("R_sneg1", s, n) * d
    raise ValueError(f"unknown identity {identity!r}")


def verify_ansatz_identity(identity: str, s: int, n: int,
                           c: CofactorRatioVector | None = None) -> IdentityResult:
    """Check the summation identity exactly; the residual is left - right."""
    if identity not in IDENTITIES:
        raise ValueError(f"unknown identity {identity!r}")
    if c is None:
        c = solve_cofactor_system(IDENTITIES[identity], s, n)
    lhs, rhs = identity_sides(identity, c)
    d = RatFuncMu.coerce(c.denominator)
    residual = (lhs - rhs) / d
    return IdentityResult(identity, s, n, not residual, residual, lhs / d, rhs / d)


# --------------------------------------------------------------------------
# recurrence guessing


@dataclass(frozen=True)
class DegreeBounds:
    """Monomials n^i k^j with i <= n_max, j <= k_max and i + j <= total."""

    n_max: int
    k_max: int
    total: int | None = None

    def monomials(self) -> list[tuple[int, int]]:
        tot = self.n_max + self.k_max if self.total is None else self.total
        return [(i, j) for i in range(self.n_max + 1) for j in range(self.k_max + 1) if i + j <= tot]

    def __str__(self) -> str:
        tail = "" if self.total is None else f",total<={self.total}"
        return f"deg_n<={self.n_max},deg_k<={self.k_max}{tail}"


@dataclass(frozen=True)
class RecurrenceAnsatz:
    """sum_{(a,b) in support} p_ab(n, k) c(n + step*a, k + b) = 0.

    ``step`` is 2 when the data is one parity class of n (``parity``), so
    that n-shifts stay inside the class.  ``coefficients[(a, b)]`` maps the
    exponents (i, j) of n^i k^j to rationals.
    """

    support: tuple[tuple[int, int], ...]
    degrees: DegreeBounds
    coefficients: dict
    step: int = 1
    parity: int | None = None
    training_points: int = 0
    validated_points: int = 0

    def __post_init__(self):
        if not any(any(v for v in poly.values()) for poly in self.coefficients.values()):
            raise ValueError("a recurrence needs a nonzero coefficient")

    def coefficient(self, ab, n, k) -> Fraction:
        return sum((c * n ** i * k ** j for (i, j), c in self.coefficients.get(ab, {}).items()),
                   Fraction(0))

    def residual(self, data: Mapping[tuple[int, int], Fraction], n: int, k: int) -> Fraction | None:
        total = Fraction(0)
        for a, b in self.support:
            key = (n + self.step * a, k + b)
            if key not in data:
                return None
            total += self.coefficient((a, b), n, k) * data[key]
        return total

    def annihilates(self, data, points) -> bool:
        return all(self.residual(data, n, k) == 0 for n, k in points)

    def __str__(self) -> str:
        terms = []
        for a, b in self.support:
            poly = " + ".join(f"({c})*n^{i}*k^{j}" for (i, j), c in sorted(self.coefficients[(a, b)].items()) if c)
            if poly:
                terms.append(f"[{poly}] * c(n{self.step * a:+d}, k{b:+d})")
        return " + ".join(terms) + " = 0"


def anchor_points(data, support, step: int = 1, parity: int | None = None) -> list[tuple[int, int]]:
    """Points (n, k) at which every shifted value of the support is known."""
    return [(n, k) for (n, k) in sorted(data)
            if (parity is None or n % 2 == parity)
            and all((n + step * a, k + b) in data for a, b in support)]


_PRIME = (1 << 61) - 1


def _rank_mod_p(rows: list[list[int]]) -> tuple[int, list[int]]:
    """Rank over GF(p) and the indices of a maximal independent row set."""
    basis: dict[int, list[int]] = {}
    chosen = []
    for idx, row in enumerate(rows):
        r = [x % _PRIME for x in row]
        for col in range(len(r)):
            if not r[col]:
                continue
            if col in basis:
                b = basis[col]
                f = r[col]
                r = [(x - f * y) % _PRIME for x, y in zip(r, b)]
                continue
            inv = pow(r[col], _PRIME - 2, _PRIME)
            basis[col] = [x * inv % _PRIME for x in r]
            chosen.append(idx)
            break
    return len(basis), chosen


def _exact_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def _to_int_row(row: list[Fraction]) -> list[int]:
    from math import lcm
    den = lcm(*(x.denominator for x in row)) if row else 1
    return [int(x * den) for x in row]



# every fit must be overdetermined by at least this many equations
MARGIN = 5


def fit_recurrence(data: Mapping[tuple[int, int], Fraction], support, degrees: DegreeBounds,
                   validation: Mapping[tuple[int, int], Fraction] | None = None,
                   parity: int | None = None, margin: int = MARGIN) -> RecurrenceAnsatz | None:
    """Fit one ansatz exactly; None if no nullspace vector survives.

    A candidate must vanish on every training equation and, when
    ``validation`` is given, on every anchor point touching held-out data.
    """
    support = tuple(sorted(support))
    step = 1 if parity is None else 2
    mons = degrees.monomials()
    unknowns = len(support) * len(mons)
    pts = anchor_points(data, support, step, parity)
    if len(pts) < unknowns + margin:
        raise ValueError(f"insufficient data: {len(pts)} equations for {unknowns} unknowns")
    rows = []
    for n, k in pts:
        row = []
        for a, b in support:
            v = data[(n + step * a, k + b)]
            row.extend(v * n ** i * k ** j for i, j in mons)
        rows.append(row)
    rank, chosen = _rank_mod_p([_to_int_row(r) for r in rows])
    if rank >= unknowns:
        return None
    # the modular rank can only underestimate, so every candidate from the
    # chosen rows is re-checked against all equations
    merged = dict(data)
    held: list = []
    if validation is not None:
        merged.update(validation)
        held = [p for p in anchor_points(merged, support, step, parity)
                if any((p[0] + step * a, p[1] + b) in validation for a, b in support)]
        if not held:
            return None
    for vec in _exact_nullspace([rows[i] for i in chosen], unknowns):
        if any(sum(x * y for x, y in zip(r, vec)) for r in rows):
            continue
        coeffs, pos = {}, 0
        for ab in support:
            coeffs[ab] = {mon: vec[pos + t] for t, mon in enumerate(mons) if vec[pos + t]}
            pos += len(mons)
        rec = RecurrenceAnsatz(support, degrees, coeffs, step, parity, len(pts), len(held))
        if validation is None or rec.annihilates(merged, held):
            return rec
    return None


def candidate_supports(max_a: int, max_b: int):
    """k-strips {0} x {0..B-1} first, then rectangles with n-shifts."""
    strips = [tuple((0, y) for y in range(b)) for b in range(2, max_b + 1)]
    rects = [tuple((x, y) for x in range(a) for y in range(b))
             for a in range(2, max_a + 1) for b in range(1, max_b + 1)]
    return strips + rects


def candidate_degrees(max_n: int, max_k: int):
    out = []
    for dn in range(max_n + 1):
        for dk in range(max_k + 1):
            for tot in range(max(dn, dk), dn + dk + 1):
                out.append(DegreeBounds(dn, dk, None if tot == dn + dk else tot))
    return out


def guess_recurrence(data: Mapping[tuple[int, int], Fraction],
                     validation: Mapping[tuple[int, int], Fraction] | None = None,
                     support=None, degrees: DegreeBounds | None = None,
                     max_support: tuple[int, int] = (2, 6), max_degree: tuple[int, int] = (3, 8),
                     parity: int | None = None, max_unknowns: int = 120) -> RecurrenceAnsatz | None:
    """Try ansatzes in order of increasing unknown count; first survivor wins."""
    supports = [tuple(support)] if support is not None else candidate_supports(*max_support)
    degs = [degrees] if degrees is not None else candidate_degrees(*max_degree)
    plan = []
    for si, sup in enumerate(supports):
        for dg in degs:
            u = len(sup) * len(dg.monomials())
            if u <= max_unknowns:
                plan.append((u, si, len(sup), dg.n_max, dg.k_max, dg.total or 0, sup, dg))
    plan.sort(key=lambda x: x[:6])
    for *_, sup, dg in plan:
        try:
            rec = fit_recurrence(data, sup, dg, validation, parity)
        except ValueError:
            continue
        if rec is not None:
            return rec
    return None


def guess_sys1_recurrence(s: int, mu, max_n: int, holdout: Sequence[int] = (),
                          family: str | None = None) -> dict[int, RecurrenceAnsatz] | None:
    """Guess c_{n,k} recurrences of sys1 at fixed mu, one per parity class of n.

    Rows n <= max_n train; each holdout row validates the class it lies in.
    Returns None unless every class with a holdout row gets a recurrence.
    """
    table = sys1_numeric_table(s, mu, max(max_n, *holdout) if holdout else max_n, family=family)
    train = {key: v for key, v in table.items() if key[0] <= max_n}
    out = {}
    for parity in sorted({n % 2 for n in holdout} or {0, 1}):
        held = {key: v for key, v in table.items() if key[0] in holdout and key[0] % 2 == parity}
        rec = guess_recurrence(train, held or None, parity=parity)
        if rec is None:
            return None
        out[parity] = rec
    return out


def sys1_numeric_table(s: int, mu, max_n: int, min_n: int = 2,
                       family: str | None = None) -> dict[tuple[int, int], Fraction]:
    """c_{n,k} of sys1 at a fixed rational mu for min_n <= n <= max_n."""
    table = {}
    for n in range(max(min_n, 1), max_n + 1):
        a, b, _ = system_matrix("sys1", s, n, family)
        vals = a.evaluate(mu)
        sol = solve_rational(vals, [Fraction(x) for x in b])
        for k, v in enumerate(sol, start=1):
            table[(n, k)] = v
    return table


def noise_table(max_n: int, seed: int = 0) -> dict[tuple[int, int], Fraction]:
    rng = random.Random(seed)
    return {(n, k): Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6))
            for n in range(1, max_n + 1) for k in range(1, n + 1)}
