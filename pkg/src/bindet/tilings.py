"""Nonintersecting lattice paths and the holey-hexagon regions behind them.

Path i starts at (mu+s+i-3, 0), path j ends at (0, t+j-1), and steps go
left or up, so the number of single paths is the matrix entry
binom(mu+i+j+s+t-4, j+t-1).  Regions are stored combinatorially: edge
partitions of one lozenge plus the hexagon and hole sizes left after the
forced tilings are removed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from xml.sax.saxutils import escape

from .families import FamilySpec, delta_positions, minor_weight
from .matrix import ExactMatrix, det

UNIT = 20.0


@dataclass(frozen=True)
class PathProblem:
    mu: int
    s: int
    t: int
    n: int
    kept_starts: tuple[int, ...] | None = None
    kept_ends: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.mu + self.s < 2:
            raise ValueError("paths need mu + s >= 2")
        if self.s < 0 or self.t < 0 or self.n < 1:
            raise ValueError("paths need s, t >= 0 and n >= 1")
        full = tuple(range(1, self.n + 1))
        starts = full if self.kept_starts is None else tuple(sorted(self.kept_starts))
        ends = full if self.kept_ends is None else tuple(sorted(self.kept_ends))
        if len(starts) != len(ends):
            raise ValueError("need as many kept starts as kept ends")
        if any(not 1 <= k <= self.n for k in starts + ends):
            raise ValueError("kept indices must lie in 1..n")
        object.__setattr__(self, "kept_starts", starts)
        object.__setattr__(self, "kept_ends", ends)

    @classmethod
    def minor(cls, mu: int, s: int, t: int, n: int, rows=(), cols=()) -> "PathProblem":
        """The problem for the minor with ``rows`` and ``cols`` deleted."""
        return cls(mu, s, t, n,
                   tuple(i for i in range(1, n + 1) if i not in rows),
                   tuple(j for j in range(1, n + 1) if j not in cols))

    def start(self, i: int) -> tuple[int, int]:
        return (self.mu + self.s + i - 3, 0)

    def end(self, j: int) -> tuple[int, int]:
        return (0, self.t + j - 1)

    def entry(self, i: int, j: int) -> int:
        return math.comb(self.mu + i + j + self.s + self.t - 4, j + self.t - 1)


@dataclass(frozen=True)
class TilingCount:
    value: int
    weighted: bool

    def __post_init__(self):
        if not self.weighted and self.value < 0:
            raise ValueError("an unweighted count cannot be negative")

    def __int__(self) -> int:
        return self.value


def _int_det(rows: list[list[int]]) -> int:
    if not rows:
        return 1
    return int(det(ExactMatrix(rows)).as_poly().constant_value())


def lgv_count(p: PathProblem) -> TilingCount:
    rows = [[p.entry(i, j) for j in p.kept_ends] for i in p.kept_starts]
    return TilingCount(_int_det(rows), weighted=False)


class EnumerationCapExceeded(RuntimeError):
    pass


def _paths_between(start, end, blocked):
    """Depth-first, left steps before up steps."""
    (x0, y0), (x1, y1) = start, end
    out = []
    path = [start]

    def walk(x, y):
        if (x, y) == (x1, y1):
            out.append(tuple(path))
            return
        for nx, ny in ((x - 1, y), (x, y + 1)):
            if nx < x1 or ny > y1 or (nx, ny) in blocked:
                continue
            path.append((nx, ny))
            walk(nx, ny)
            path.pop()

    if start not in blocked and x0 >= x1 and y0 <= y1:
        walk(x0, y0)
    return out


def iter_paths(p: PathProblem):
    """Yield tuples of vertex-disjoint paths pairing kept starts with kept ends in order."""
    pairs = [(p.start(i), p.end(j)) for i, j in zip(p.kept_starts, p.kept_ends)]

    def rec(k, used, acc):
        if k == len(pairs):
            yield tuple(acc)
            return
        for path in _paths_between(*pairs[k], used):
            yield from rec(k + 1, used | set(path), acc + [path])

    yield from rec(0, frozenset(), [])


def enumerate_paths(p: PathProblem, cap: int = 5000) -> list[tuple[tuple[tuple[int, int], ...], ...]]:
    found = []
    for tup in iter_paths(p):
        found.append(tup)
        if len(found) > cap:
            raise EnumerationCapExceeded(f"more than {cap} path tuples")
    return found


def cyclic_tiling_count(family: str, s: int, t: int, n: int, mu: int) -> TilingCount:
    """Signed sum of path counts over the optional-point subsets.

    Equals the determinant of the D or E matrix at integer mu; when every
    weight is +1 it is the plain number of cyclically symmetric tilings.
    """
    if family not in ("D", "E"):
        raise ValueError("family must be D or E")
    if mu + s < 2 or s < 0 or t < 0:
        raise ValueError("paths need mu + s >= 2 and s, t >= 0")
    spec = FamilySpec(family, s, t, n)
    w = minor_weight(spec)
    pos = delta_positions(spec)
    base = [[math.comb(mu + i + j + s + t - 4, j + t - 1) for j in range(1, n + 1)]
            for i in range(1, n + 1)]
    total = 0
    for k in range(len(pos) + 1):
        for subset in combinations(pos, k):
            rows = {r for r, _ in subset}
            cols = {c for _, c in subset}
            sub = [[base[i][j] for j in range(n) if j + 1 not in cols]
                   for i in range(n) if i + 1 not in rows]
            total += w ** k * _int_det(sub)
    return TilingCount(total, weighted=(w == -1))


# --------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class ReducedRegion:
    """What remains to be tiled: a hexagon with alternating sides
    (long, short) and triangular holes given as (size, offset from the
    corner of the central hole)."""

    long_side: int
    short_side: int
    holes: tuple[tuple[int, int], ...]

    @property
    def is_triangle(self) -> bool:
        return self.short_side == 0

    def area(self) -> int:
        """Unit triangles inside the hexagon and outside the holes."""
        a, b = self.long_side, self.short_side
        return a * a + 4 * a * b + b * b - sum(h * h for h, _ in self.holes)


@dataclass(frozen=True)
class TilingRegion:
    s: int
    t: int
    n: int
    mu: int
    delta: int
    bottom: tuple[int, int, int, int, int]
    left: tuple[int, int, int]
    reduced: ReducedRegion
    switched: bool = False

    @property
    def bottom_length(self) -> int:
        return sum(self.bottom)

    @property
    def left_length(self) -> int:
        return sum(self.left)


def build_region(s: int, t: int, n: int, mu: int) -> TilingRegion:
    """Lozenge data and the reduced region after forced-tiling removal.

    Three copies of the lozenge are glued around a central hole of side
    mu-2.  Cutting the outer forced triangles (side s-t) leaves a hexagon
    with sides B+(s-t) and L-(s-t); the inner forced triangles become three
    holes of side s-t at distance t from the central hole, and for t = 0
    they fuse with it into a single hole of side mu-2+3s.
    """
    if s < 0 or t < 0 or n < 1:
        raise ValueError("regions need s, t >= 0 and n >= 1")
    if s < t:
        r = build_region(t, s, n, mu)
        return TilingRegion(s, t, n, mu, r.delta, r.bottom, r.left, r.reduced, switched=True)
    if mu + s < 2:
        raise ValueError("regions need mu + s >= 2")
    d = s - t
    delta = n - d
    if delta < 0:
        raise ValueError("regions need n >= s - t")
    if t > 0 and mu < 2:
        raise ValueError("a negative central hole only makes sense once it merges (t = 0)")
    bottom = (mu - 2, t, d, delta, d)
    left = (t, d, delta)
    long_side = sum(bottom) + d
    short_side = sum(left) - d
    if d == 0:
        holes = ((mu - 2, 0),) if mu > 2 else ()
    elif t == 0:
        holes = ((mu - 2 + 3 * s, 0),)
    else:
        holes = tuple(sorted(([(mu - 2, 0)] if mu > 2 else []) + [(d, t)] * 3))
    return TilingRegion(s, t, n, mu, delta, bottom, left,
                        ReducedRegion(long_side, short_side, holes))


# --------------------------------------------------------------------------
# SVG


_DIRS = {k: (math.cos(math.radians(k)), -math.sin(math.radians(k))) for k in range(0, 360, 60)}


def _pt(origin, *steps):
    x, y = origin
    for ang, length in steps:
        dx, dy = _DIRS[ang % 360]
        x += dx * length * UNIT
        y += dy * length * UNIT
    return (x, y)


def _rot(p, center, ang):
    c, s = math.cos(math.radians(ang)), math.sin(math.radians(ang))
    x, y = p[0] - center[0], p[1] - center[1]
    return (center[0] + c * x + s * y, center[1] - s * x + c * y)


def _poly(points, **attrs) -> str:
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
    extra = "".join(f' {k.replace("_", "-")}="{escape(str(v))}"' for k, v in sorted(attrs.items()))
    return f'<polygon points="{pts}"{extra}/>'


def render_svg(region: TilingRegion, tiling=None) -> str:
    """Lozenges of the pinwheel, the reduced hexagon, its holes, and
    optionally one lozenge's path tuple repeated by the rotation."""
    s, t = (region.t, region.s) if region.switched else (region.s, region.t)
    bottom_len, left_len = region.bottom_length, region.left_length
    h = region.bottom[0]
    size = (bottom_len + left_len + abs(h)) * 2 + 4
    center = (size * UNIT / 2, size * UNIT / 2)
    # central hole with corners O1, O2, O3 counterclockwise
    r = h * UNIT / math.sqrt(3)
    o1 = (center[0] - h * UNIT / 2, center[1] + r / 2)
    o2 = _pt(o1, (0, h))
    o3 = _pt(o2, (120, h))
    corners = [o1, o2, o3]

    lozenges = []
    for k, o in enumerate(corners):
        b, lft = 120 * k, 120 * k + 240
        lozenges.append([o, _pt(o, (b, bottom_len)), _pt(o, (b, bottom_len), (lft, left_len)),
                         _pt(o, (lft, left_len))])

    a, bb = region.reduced.long_side, region.reduced.short_side
    side = a + 2 * bb
    rt = side * UNIT / math.sqrt(3)
    big = [(center[0] - side * UNIT / 2, center[1] + rt / 2)]
    big.append(_pt(big[0], (0, side)))
    big.append(_pt(big[1], (120, side)))
    hexagon = []
    for k in range(3):
        p, q = big[k], big[(k + 1) % 3]
        ang = 120 * k
        hexagon.append(_pt(p, (ang, bb)))
        hexagon.append(_pt(q, (ang + 180, bb)))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size * UNIT:.0f}" '
        f'height="{size * UNIT:.0f}" viewBox="0 0 {size * UNIT:.0f} {size * UNIT:.0f}">',
        f"<title>region s={s} t={t} n={region.n} mu={region.mu}</title>",
        '<g id="lozenges">',
    ]
    parts += [_poly(z, fill="none", stroke="#999999", stroke_width="1") for z in lozenges]
    parts += ["</g>", '<g id="reduced">', _poly(hexagon, fill="#f4f0e6", stroke="#000000", stroke_width="2")]
    satellite = 0
    for hsize, off in region.reduced.holes:
        if hsize <= 0:
            continue
        if off:
            # base on the line through O1 O2, starting at distance off past O2,
            # then carried to the k-th lozenge by the rotation
            p0 = _pt(o2, (0, off))
            tri = [_rot(q, center, 120 * satellite) for q in (p0, _pt(p0, (0, hsize)), _pt(p0, (60, hsize)))]
            satellite += 1
        else:
            hr = hsize * UNIT / math.sqrt(3)
            p0 = (center[0] - hsize * UNIT / 2, center[1] + hr / 2)
            tri = [p0, _pt(p0, (0, hsize)), _pt(p0, (0, hsize), (120, hsize))]
        parts.append(_poly(tri, fill="#ffffff", stroke="#000000"))
    parts.append("</g>")
    if tiling:
        parts.append('<g id="paths">')
        for k in range(3):
            for path in tiling:
                pts = [_rot(_pt(o1, (0, x + 0.5), (240, y + 0.5)), center, 120 * k) for x, y in path]
                d = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
                parts.append(f'<polyline points="{d}" fill="none" stroke="#333333" stroke-width="3"/>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
