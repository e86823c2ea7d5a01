"""Kernels for dense polynomials over Z.

A polynomial is a list of Python ints in ascending degree with no trailing
zeros; the zero polynomial is ``[]``.  Large products, exact quotients and
determinants go through Kronecker substitution: a polynomial whose
coefficients are bounded by 2**(bits-1) is packed into the single integer
p(2**bits), so one big-integer operation replaces a whole convolution.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

try:
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover - pure-Python fallback
    _big = int

# below this length schoolbook convolution beats packing
_SCHOOLBOOK = 16


def trim(c: list[int]) -> list[int]:
    while c and not c[-1]:
        c.pop()
    return c


def content(c: Sequence[int]) -> int:
    return gcd(*c) if c else 0


def primitive(c: Sequence[int]) -> list[int]:
    """Divide out the content and make the leading coefficient positive."""
    if not c:
        return []
    g = gcd(*c)
    if c[-1] < 0:
        g = -g
    return [x // g for x in c]


def norm1(c: Sequence[int]) -> int:
    return sum(abs(x) for x in c)


def bits_for(bound: int) -> int:
    """Slot width (a multiple of 8) holding signed values of size <= bound."""
    b = bound.bit_length() + 2
    return (b + 7) & ~7


def pack(c: Sequence[int], bits: int) -> int:
    """Evaluate at 2**bits.  Requires bits % 8 == 0 and |c_i| < 2**(bits-1)."""
    if not c:
        return 0
    nb = bits >> 3
    pos = b"".join((x if x > 0 else 0).to_bytes(nb, "little") for x in c)
    neg = b"".join((-x if x < 0 else 0).to_bytes(nb, "little") for x in c)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def unpack(v: int, bits: int, count: int) -> list[int]:
    """Inverse of :func:`pack` for a value known to have at most ``count`` slots."""
    v = int(v)
    if count <= 0:
        if v:
            raise ArithmeticError("nonzero value with empty slot budget")
        return []
    nb = bits >> 3
    half = 1 << (bits - 1)
    offset = int.from_bytes(half.to_bytes(nb, "little") * count, "little")
    w = v + offset
    if w < 0 or w.bit_length() > bits * count:
        raise ArithmeticError("value does not fit the slot budget")
    raw = w.to_bytes(nb * count, "little")
    out = [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - half
           for i in range(count)]
    return trim(out)


def mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        k = b[0]
        return [x * k for x in a]
    if len(b) < _SCHOOLBOOK:
        out = [0] * (len(a) + len(b) - 1)
        for j, y in enumerate(b):
            if y:
                for i, x in enumerate(a):
                    out[i + j] += x * y
        return out
    bound = max(map(abs, a)) * max(map(abs, b)) * len(b)
    bits = bits_for(bound)
    prod = _big(pack(a, bits)) * _big(pack(b, bits))
    return unpack(prod, bits, len(a) + len(b) - 1)


def add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return trim(out)


def scale(a: Sequence[int], k: int) -> list[int]:
    if not k:
        return []
    return [x * k for x in a]


def divexact(a: Sequence[int], b: Sequence[int]) -> list[int] | None:
    """Return q with a == q*b over Z, or None if b does not divide a in Z[x]."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return []
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return None
    if db == 0:
        k = b[0]
        if any(x % k for x in a):
            return None
        return [x // k for x in a]
    # Mignotte-type bound for a factor of a: |q_i| <= 2**deg(q) * ||a||_1
    bits = bits_for(max(norm1(a) << (da - db + 1), max(map(abs, b))))
    qa, qb = _big(pack(a, bits)), _big(pack(b, bits))
    q, r = divmod(qa, qb)
    if r:
        return None
    try:
        quo = unpack(q, bits, da - db + 1)
    except ArithmeticError:
        return None
    if mul(quo, b) != list(a):
        return None
    return quo


def prem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Pseudo-remainder of a by b, made primitive."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        coef = r[-1]
        r = [lb * x for x in r[:-1]]
        for i in range(db):
            r[k + i] -= coef * b[i]
        trim(r)
        if r:
            g = gcd(*r)
            if g > 1:
                r = [x // g for x in r]
    return r


def gcd_prs(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Primitive polynomial remainder sequence gcd (result primitive)."""
    a, b = primitive(a), primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [1]
        a, b = b, primitive(prem(a, b))
    return a


def gcd_heu(a: Sequence[int], b: Sequence[int]) -> list[int] | None:
    """Heuristic gcd: evaluate at a large point, take the integer gcd and
    read its balanced digits back as a candidate.  The candidate is accepted
    only if it divides both inputs, which makes the result exact."""
    # the evaluation point must exceed 2*min(|a|, |b|) + 2; the slot must also
    # hold every coefficient of both inputs
    bound = max(max(map(abs, a)), max(map(abs, b)))
    for extra in (2, 40, 200):
        bits = bits_for((bound << extra) * 2 + 2)
        g = gcd(int(_big(pack(a, bits))), int(_big(pack(b, bits))))
        try:
            cand = unpack(g, bits, min(len(a), len(b)))
        except ArithmeticError:
            continue
        cand = primitive(cand)
        if cand and divexact(a, cand) is not None and divexact(b, cand) is not None:
            return cand
    return None


def poly_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Primitive gcd with positive leading coefficient; gcd(0, 0) = []."""
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    if len(a) == 1 or len(b) == 1:
        return [1]
    a, b = primitive(a), primitive(b)
    if len(b) <= len(a) and divexact(a, b) is not None:
        return b
    if len(a) <= len(b) and divexact(b, a) is not None:
        return a
    g = gcd_heu(a, b)
    if g is None:
        g = gcd_prs(a, b)
    return g


def det_bound(rows: Sequence[Sequence[Sequence[int]]]) -> int:
    """Bound on every coefficient of every minor: product of row l1-sums."""
    bound = 1
    for row in rows:
        bound *= max(1, sum(norm1(p) for p in row))
    return bound


def bareiss(a: list[list]) -> tuple[object, list[list], int]:
    """In-place fraction-free elimination on a square or augmented matrix of
    ring elements supporting exact ``//``.  Returns (det, reduced matrix,
    rank-deficiency flag as 0/1).  Pivot: first nonzero entry down the column."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0, a, 1
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, len(rowi)):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1, a, 0


def det_kronecker(rows: Sequence[Sequence[Sequence[int]]]) -> list[int]:
    """Determinant of a square matrix of integer polynomials."""
    n = len(rows)
    if n == 0:
        return [1]
    bits = bits_for(det_bound(rows))
    rdeg = sum(max(len(p) for p in row) - 1 for row in rows)
    cdeg = sum(max(len(rows[i][j]) for i in range(n)) - 1 for j in range(n))
    dmax = min(rdeg, cdeg)
    if dmax < 0:
        return []
    m = [[_big(pack(p, bits)) for p in row] for row in rows]
    d, _, _ = bareiss(m)
    return unpack(d, bits, dmax + 1)


def solve_kronecker(rows: Sequence[Sequence[Sequence[int]]],
                    rhs: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]] | None:
    """Fraction-free solve of A x = b over Z[x].

    Returns (numerators X, denominator d) with x_i = X_i / d, or None when A
    is singular.  Every X_i and d is, up to a common sign, a Cramer
    determinant, so all of them obey the same coefficient bound.
    """
    n = len(rows)
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    bits = bits_for(det_bound(aug))
    dmax = sum(max(len(p) for p in row) for row in aug)
    m = [[_big(pack(p, bits)) for p in row] for row in aug]
    d, m, singular = bareiss(m)
    if singular:
        return None
    piv = m[n - 1][n - 1]
    xs = [None] * n
    for i in range(n - 1, -1, -1):
        acc = piv * m[i][n]
        for j in range(i + 1, n):
            acc -= m[i][j] * xs[j]
        q, r = divmod(acc, m[i][i])
        if r:
            raise ArithmeticError("inexact fraction-free back substitution")
        xs[i] = q
    return [unpack(x, bits, dmax + 1) for x in xs], unpack(piv, bits, dmax + 1)
