"""Dense exact matrices over Q(mu).

Determinants of polynomial matrices use fraction-free (Bareiss) elimination.
By default the elimination runs on the Kronecker image of the matrix: every
entry p(mu) with integer coefficients is replaced by the integer p(2**B),
where B exceeds the coefficient bound of every minor.  Because evaluation is
a ring homomorphism, the integer determinant is det(2**B) and unpacks to the
exact determinant polynomial.  Rational-function entries are first cleared
row by row with the lcm of the row denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import _zpoly as zp
from .arith import PolyMu, RatFuncMu, poly_gcd


class SingularMatrixError(ArithmeticError):
    """The coefficient matrix of a linear system has zero determinant."""


class ExactMatrix:
    """Immutable rows x cols grid of RatFuncMu entries (1-based access)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        grid = tuple(tuple(RatFuncMu.coerce(x) for x in row) for row in entries)
        widths = {len(r) for r in grid}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self.entries = grid
        self.rows = len(grid)
        self.cols = widths.pop() if widths else 0

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> RatFuncMu:
        i, j = ij
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(f"index {ij} outside {self.rows}x{self.cols}")
        return self.entries[i - 1][j - 1]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self.entries)) if self.rows else self

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        """Keep the given 1-based rows and columns, in the given order."""
        return ExactMatrix([[self.entries[i - 1][j - 1] for j in cols] for i in rows])

    def column(self, j: int) -> list[RatFuncMu]:
        return [row[j - 1] for row in self.entries]

    def row(self, i: int) -> list[RatFuncMu]:
        return list(self.entries[i - 1])

    def is_polynomial(self) -> bool:
        return all(x.is_polynomial() for row in self.entries for x in row)

    def evaluate(self, mu) -> list[list[Fraction]]:
        return [[x.evaluate(mu) for x in row] for row in self.entries]

    def map(self, f) -> "ExactMatrix":
        return ExactMatrix([[f(x) for x in row] for row in self.entries])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        cols = list(zip(*other.entries))
        out = []
        for row in self.entries:
            new = []
            for col in cols:
                acc = RatFuncMu.coerce(0)
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return ExactMatrix(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class MinorSpec:
    deleted_rows: tuple[int, ...] = ()
    deleted_cols: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "deleted_rows", tuple(sorted(self.deleted_rows)))
        object.__setattr__(self, "deleted_cols", tuple(sorted(self.deleted_cols)))
        if len(self.deleted_rows) != len(self.deleted_cols):
            raise ValueError("a minor deletes as many rows as columns")
        if len(set(self.deleted_rows)) != len(self.deleted_rows) or \
                len(set(self.deleted_cols)) != len(self.deleted_cols):
            raise ValueError("repeated index in minor specification")


# --------------------------------------------------------------------------
# conversion to integer polynomials


def _row_cleared(m: ExactMatrix, extra: Sequence[RatFuncMu] | None = None):
    """Scale each row by the lcm of its denominators.

    Returns (polynomial rows, polynomial extra column or None, row scales).
    """
    rows, rhs, scales = [], [], []
    for idx, row in enumerate(m.entries):
        full = list(row) + ([extra[idx]] if extra is not None else [])
        dens = [x.den for x in full if x.num and x.den.degree > 0]
        scale = PolyMu.constant(1)
        for d in dens:
            g = poly_gcd(scale, d)
            scale = scale * d.exact_div(g)
        if scale.degree == 0:
            polys = [x.num for x in full]
        else:
            polys = [x.num * scale.exact_div(x.den) if x.num else PolyMu() for x in full]
        if extra is not None:
            rhs.append(polys.pop())
        rows.append(polys)
        scales.append(scale)
    return rows, (rhs if extra is not None else None), scales


def _column_integers(rows: list[list[PolyMu]]):
    """Scale columns to integer coefficients; returns (int rows, column scales)."""
    n_cols = len(rows[0]) if rows else 0
    col_d = [lcm(*(rows[i][j].int_coeffs[1] for i in range(len(rows)))) if rows else 1
             for j in range(n_cols)]
    out = []
    for row in rows:
        new = []
        for j, p in enumerate(row):
            c, d = p.int_coeffs
            k = col_d[j] // d
            new.append([x * k for x in c])
        out.append(new)
    return out, col_d


def _poly_det(rows: list[list[PolyMu]], method: str) -> PolyMu:
    n = len(rows)
    if n == 0:
        return PolyMu.constant(1)
    if method == "bareiss":
        return _bareiss_poly(rows)
    ints, col_d = _column_integers(rows)
    d = zp.det_kronecker(ints)
    denom = 1
    for x in col_d:
        denom *= x
    return PolyMu.from_int_coeffs(d, denom)


def _bareiss_poly(rows: list[list[PolyMu]]) -> PolyMu:
    """Reference fraction-free elimination directly on PolyMu entries."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, PolyMu.constant(1)
    for k in range(n):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return PolyMu()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = PolyMu()
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def _cofactor_expansion(e: Sequence[Sequence[RatFuncMu]]) -> RatFuncMu:
    n = len(e)
    if n == 0:
        return RatFuncMu.coerce(1)
    if n == 1:
        return e[0][0]
    total = RatFuncMu.coerce(0)
    for j in range(n):
        if not e[0][j]:
            continue
        sub = [row[:j] + row[j + 1:] for row in e[1:]]
        term = e[0][j] * _cofactor_expansion(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


# --------------------------------------------------------------------------
# public operations


def det(m: ExactMatrix, method: str = "auto") -> RatFuncMu:
    """Exact determinant.

    ``method`` is "auto" (Kronecker-packed Bareiss), "bareiss" (Bareiss on
    PolyMu entries) or "cofactor" (Laplace expansion, an oracle for small n).
    """
    if not m.is_square():
        raise ValueError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return RatFuncMu.coerce(1)
    if method == "cofactor":
        return _cofactor_expansion(m.entries)
    if method not in ("auto", "bareiss"):
        raise ValueError(f"unknown determinant method {method!r}")
    if m.is_polynomial():
        return RatFuncMu.coerce(_poly_det([[x.num for x in row] for row in m.entries], method))
    rows, _, scales = _row_cleared(m)
    num = _poly_det(rows, method)
    den = PolyMu.constant(1)
    for s in scales:
        den = den * s
    return RatFuncMu(num, den)


def det_poly(m: ExactMatrix) -> PolyMu:
    """Determinant of a polynomial matrix as a PolyMu."""
    return det(m).as_poly()


def minor_det(m: ExactMatrix, spec: MinorSpec) -> RatFuncMu:
    if not m.is_square():
        raise ValueError("minors are taken of square matrices")
    for i in spec.deleted_rows + spec.deleted_cols:
        if not 1 <= i <= m.rows:
            raise IndexError(f"minor index {i} outside 1..{m.rows}")
    keep_r = [i for i in range(1, m.rows + 1) if i not in spec.deleted_rows]
    keep_c = [j for j in range(1, m.cols + 1) if j not in spec.deleted_cols]
    return det(m.submatrix(keep_r, keep_c))


def cofactor(m: ExactMatrix, i: int, j: int) -> RatFuncMu:
    if not (1 <= i <= m.rows and 1 <= j <= m.cols):
        raise IndexError(f"cofactor index ({i}, {j}) outside {m.rows}x{m.cols}")
    val = minor_det(m, MinorSpec((i,), (j,)))
    return val if (i + j) % 2 == 0 else -val


def solve_fraction_free(a: ExactMatrix, b: Sequence) -> tuple[list[PolyMu], PolyMu]:
    """Solve a x = b as x_i = X_i / d with polynomial X_i and d (unreduced)."""
    if not a.is_square():
        raise ValueError("solve needs a square matrix")
    if len(b) != a.rows:
        raise ValueError("right-hand side has the wrong length")
    n = a.rows
    if n == 0:
        return [], PolyMu.constant(1)
    b = [RatFuncMu.coerce(x) for x in b]
    rows, rhs, _ = _row_cleared(a, b)
    ints, col_d = _column_integers(rows)
    rhs_ints, (rhs_d,) = _column_integers([[p] for p in rhs])
    res = zp.solve_kronecker(ints, [r[0] for r in rhs_ints])
    if res is None:
        raise SingularMatrixError("coefficient matrix is singular")
    xs, d = res
    nums = [PolyMu.from_int_coeffs(x) * col_d[j] for j, x in enumerate(xs)]
    return nums, PolyMu.from_int_coeffs(d) * rhs_d


def solve(a: ExactMatrix, b: Sequence) -> list[RatFuncMu]:
    nums, d = solve_fraction_free(a, b)
    return [RatFuncMu(x, d) for x in nums]


def solve_rational(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Gaussian elimination over Q for numeric systems (first nonzero pivot)."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k]), None)
        if piv is None:
            raise SingularMatrixError("coefficient matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        inv = 1 / m[k][k]
        rowk = [x * inv for x in m[k]]
        m[k] = rowk
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], rowk)]
    return [m[i][n] for i in range(n)]


# --------------------------------------------------------------------------
# elementary transforms


@dataclass(frozen=True)
class ElementaryTransform:
    """L: unit lower bidiagonal with -1 below the diagonal (row differences).
    R: upper triangular all-ones (prefix sums of columns).
    Rtilde: swaps the first two columns (negating one) and sums columns
    2..j into column j."""

    kind: str
    dimension: int

    def __post_init__(self):
        if self.kind not in ("L", "R", "Rtilde"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.dimension < 1 or (self.kind == "Rtilde" and self.dimension < 2):
            raise ValueError("transform dimension too small")
        d = det(self.matrix)
        if d not in (RatFuncMu.coerce(1), RatFuncMu.coerce(-1)):
            raise ArithmeticError(f"{self.kind} transform has determinant {d}")

    @property
    def matrix(self) -> ExactMatrix:
        n = self.dimension
        if self.kind == "L":
            g = [[1 if i == j else (-1 if i == j + 1 else 0) for j in range(n)] for i in range(n)]
        elif self.kind == "R":
            g = [[1 if j >= i else 0 for j in range(n)] for i in range(n)]
        else:
            g = [[0] * n for _ in range(n)]
            g[0][1] = -1
            g[1][0] = 1
            for j in range(2, n):
                for i in range(1, j + 1):
                    g[i][j] = 1
        return ExactMatrix(g)

    @property
    def determinant(self) -> RatFuncMu:
        return det(self.matrix)


def apply_transform(t: ElementaryTransform, side: str, m: ExactMatrix) -> ExactMatrix:
    if side == "left":
        if t.dimension != m.rows:
            raise ValueError("transform dimension does not match the row count")
        return t.matrix @ m
    if side == "right":
        if t.dimension != m.cols:
            raise ValueError("transform dimension does not match the column count")
        return m @ t.matrix
    raise ValueError("side must be 'left' or 'right'")
