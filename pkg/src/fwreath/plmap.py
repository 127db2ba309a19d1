"""Piecewise-linear orientation-preserving homeomorphisms of [0, 1].

Maps act on the right: ``x * (a * b) == (x * a) * b``, written here as
``(a * b)(x) == b(a(x))``.  Every map is stored by its minimal breakpoint
list, so two maps are equal exactly when their breakpoints agree.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactnum import (
    ONE,
    ZERO,
    Dyadic,
    DyadicParseError,
    Interval,
    IntervalSet,
    exact,
    is_dyadic,
    parse_exact,
    render_exact,
)

__all__ = [
    "PLMap",
    "Bump",
    "PLDomainError",
    "evaluate",
    "compose",
    "invert",
    "commutator",
    "conjugate",
    "fixed_set",
    "support",
    "bump_decomposition",
    "fundamental_domain",
    "interpolate",
    "is_in_F",
    "image",
    "agrees_on",
    "is_identity_on",
]


class PLDomainError(ValueError):
    """A point or construction falls outside what the map supports."""


class PLMap:
    """A PL homeomorphism of [0, 1] given by its breakpoints.

    ``breakpoints`` is a sequence of ``(x, y)`` pairs, strictly increasing
    in both coordinates, from ``(0, 0)`` to ``(1, 1)``.  Removable
    (collinear) breakpoints are dropped on construction.
    """

    __slots__ = ("xs", "ys", "_slopes", "_hash")

    def __init__(self, breakpoints: Iterable[tuple] = ((0, 0), (1, 1))):
        pts = [(exact(x), exact(y)) for x, y in breakpoints]
        if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
            raise PLDomainError("breakpoints must run from (0,0) to (1,1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x0 < x1 and y0 < y1):
                raise PLDomainError(
                    "breakpoints must be strictly increasing in x and y: "
                    f"({render_exact(x0)},{render_exact(y0)}) -> "
                    f"({render_exact(x1)},{render_exact(y1)})"
                )
        xs, ys = _minimize([p[0] for p in pts], [p[1] for p in pts])
        self.xs = xs
        self.ys = ys
        self._slopes = None
        self._hash = None

    @classmethod
    def _trusted(cls, xs: list, ys: list) -> "PLMap":
        m = object.__new__(cls)
        m.xs, m.ys = _minimize(xs, ys)
        m._slopes = None
        m._hash = None
        return m

    @classmethod
    def identity(cls) -> "PLMap":
        return _IDENTITY

    @classmethod
    def parse(cls, text: str) -> "PLMap":
        """Parse ``"x -> y"`` pairs separated by newlines or semicolons."""
        pts = []
        for raw in text.replace(";", "\n").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" not in line:
                raise DyadicParseError(line, "expected 'x -> y'")
            left, right = line.split("->", 1)
            pts.append((parse_exact(left), parse_exact(right)))
        return cls(pts)

    def to_text(self, sep: str = "\n") -> str:
        return sep.join(
            f"{render_exact(x)} -> {render_exact(y)}" for x, y in zip(self.xs, self.ys)
        )

    @property
    def breakpoints(self) -> tuple:
        return tuple(zip(self.xs, self.ys))

    @property
    def slopes(self) -> tuple:
        if self._slopes is None:
            xs, ys = self.xs, self.ys
            self._slopes = tuple(
                exact((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])) for i in range(len(xs) - 1)
            )
        return self._slopes

    def is_identity(self) -> bool:
        return len(self.xs) == 2

    def __len__(self):
        return len(self.xs)

    def __call__(self, x):
        return evaluate(self, x)

    def inverse_evaluate(self, y):
        return _eval(self.ys, self.xs, None, y)

    def __mul__(self, other: "PLMap") -> "PLMap":
        if not isinstance(other, PLMap):
            return NotImplemented
        return compose(self, other)

    def __invert__(self) -> "PLMap":
        return invert(self)

    def __pow__(self, n: int) -> "PLMap":
        base = self if n >= 0 else invert(self)
        n = abs(n)
        result = _IDENTITY
        while n:
            if n & 1:
                result = compose(result, base)
            n >>= 1
            if n:
                base = compose(base, base)
        return result

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.xs, self.ys))
        return self._hash

    def __repr__(self):
        return f"PLMap({self.to_text('; ')})"


def _minimize(xs: list, ys: list):
    if len(xs) <= 2:
        return tuple(xs), tuple(ys)
    if all(type(v) is Dyadic for v in xs) and all(type(v) is Dyadic for v in ys):
        # collinearity on integers scaled to a common denominator
        e = max(max(v.exp for v in xs), max(v.exp for v in ys))
        ix = [v.num << (e - v.exp) for v in xs]
        iy = [v.num << (e - v.exp) for v in ys]
    else:
        ix, iy = xs, ys
    keep = [0]
    for k in range(1, len(xs) - 1):
        j = keep[-1]
        if (iy[k] - iy[j]) * (ix[k + 1] - ix[k]) != (iy[k + 1] - iy[k]) * (ix[k] - ix[j]):
            keep.append(k)
    keep.append(len(xs) - 1)
    if len(keep) == len(xs):
        return tuple(xs), tuple(ys)
    return tuple(xs[k] for k in keep), tuple(ys[k] for k in keep)


_IDENTITY = PLMap()


def _eval(xs, ys, slopes, x):
    i = bisect_right(xs, x) - 1
    if xs[i] == x:
        return ys[i]
    if slopes is not None:
        return exact(ys[i] + (x - xs[i]) * slopes[i])
    return exact(ys[i] + (x - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))


def evaluate(m: PLMap, x):
    """Exact image of ``x`` under ``m``."""
    if not (ZERO <= x <= ONE):
        raise PLDomainError(f"{render_exact(x)} is outside [0,1]")
    return _eval(m.xs, m.ys, m.slopes, x)


def compose(a: PLMap, b: PLMap) -> PLMap:
    """The map ``x -> b(a(x))`` (apply ``a`` first)."""
    if len(a.xs) == 2:
        return b
    if len(b.xs) == 2:
        return a
    axs, ays, bxs, bys = a.xs, a.ys, b.xs, b.ys
    asl, bsl = a.slopes, b.slopes
    xs = [ZERO]
    ys = [ZERO]
    i = j = 1
    na, nb = len(axs), len(bxs)
    while i < na and j < nb:
        u, v = ays[i], bxs[j]
        if u == v:
            xs.append(axs[i])
            ys.append(bys[j])
            i += 1
            j += 1
        elif u < v:
            xs.append(axs[i])
            ys.append(exact(bys[j - 1] + (u - bxs[j - 1]) * bsl[j - 1]))
            i += 1
        else:
            xs.append(exact(axs[i - 1] + (v - ays[i - 1]) / asl[i - 1]))
            ys.append(bys[j])
            j += 1
    return PLMap._trusted(xs, ys)


def invert(m: PLMap) -> PLMap:
    inv = object.__new__(PLMap)
    inv.xs, inv.ys = m.ys, m.xs
    inv._slopes = None
    inv._hash = None
    return inv


def commutator(a: PLMap, b: PLMap) -> PLMap:
    """``a^-1 b^-1 a b``."""
    return invert(a) * invert(b) * a * b


def conjugate(h: PLMap, g: PLMap) -> PLMap:
    """``g^-1 h g``; its fixed set is the image of ``h``'s under ``g``."""
    return invert(g) * h * g


def fixed_set(m: PLMap) -> IntervalSet:
    """Points with ``m(x) == x``: closed intervals plus isolated points."""
    xs, ys = m.xs, m.ys
    parts = []
    for k in range(len(xs) - 1):
        x0, x1 = xs[k], xs[k + 1]
        d0, d1 = ys[k] - x0, ys[k + 1] - x1
        if d0 == 0 and d1 == 0:
            parts.append(Interval(x0, x1))
        elif d0 == 0:
            parts.append(Interval(x0, x0))
        elif d1 == 0:
            parts.append(Interval(x1, x1))
        elif (d0 > 0) != (d1 > 0):
            p = exact(x0 + d0 * (x1 - x0) / (d0 - d1))
            parts.append(Interval(p, p))
    return IntervalSet(parts)


def support(m: PLMap) -> IntervalSet:
    """Closure of ``{x : m(x) != x}``."""
    return fixed_set(m).complement()


def image(m: PLMap, s: IntervalSet) -> IntervalSet:
    """Image of an interval set; ``m`` is increasing so parts map to parts."""
    xs, ys, sl = m.xs, m.ys, m.slopes
    return IntervalSet._from_merged(
        tuple(Interval(_eval(xs, ys, sl, p.lo), _eval(xs, ys, sl, p.hi)) for p in s.parts)
    )


def agrees_on(a: PLMap, b: PLMap, s: IntervalSet) -> bool:
    """Exact test of ``a|_s == b|_s``.

    Both maps are affine between consecutive points of the set of part
    endpoints and interior breakpoints, so checking those points suffices.
    """
    for p in s.parts:
        pts = {p.lo, p.hi}
        for xs in (a.xs, b.xs):
            lo = bisect_right(xs, p.lo)
            hi = bisect_right(xs, p.hi)
            pts.update(xs[lo:hi])
        for x in pts:
            if _eval(a.xs, a.ys, a.slopes, x) != _eval(b.xs, b.ys, b.slopes, x):
                return False
    return True


def is_identity_on(m: PLMap, s: IntervalSet) -> bool:
    return agrees_on(m, _IDENTITY, s)


@dataclass(frozen=True)
class Bump:
    """One bump of a map.

    ``map`` is the one-bump map agreeing with the parent on ``interval``;
    ``direction`` is +1 when points move right."""

    interval: Interval
    direction: int
    map: PLMap

    def __str__(self):
        sign = "+" if self.direction > 0 else "-"
        return f"bump{sign}{self.interval}"


def bump_decomposition(m: PLMap) -> list[Bump]:
    """Bumps of ``m`` from left to right; their product is ``m``."""
    fixed = fixed_set(m).parts
    bumps = []
    for left, right in zip(fixed, fixed[1:]):
        a, b = left.hi, right.lo
        mid = exact((a + b) / 2)
        direction = 1 if m(mid) > mid else -1
        lo = bisect_right(m.xs, a)
        hi = bisect_right(m.xs, b)
        if hi and m.xs[hi - 1] == b:
            hi -= 1
        xs = [ZERO, a] + list(m.xs[lo:hi]) + [b, ONE]
        ys = [ZERO, a] + list(m.ys[lo:hi]) + [b, ONE]
        xs, ys = _dedupe(xs, ys)
        bumps.append(Bump(Interval(a, b), direction, PLMap._trusted(xs, ys)))
    return bumps


def _dedupe(xs, ys):
    ox, oy = [xs[0]], [ys[0]]
    for x, y in zip(xs[1:], ys[1:]):
        if x != ox[-1]:
            ox.append(x)
            oy.append(y)
    return ox, oy


def one_bump(m: PLMap) -> Bump:
    bumps = bump_decomposition(m)
    if len(bumps) != 1:
        raise PLDomainError(f"expected a one-bump map, found {len(bumps)} bumps")
    return bumps[0]


def fundamental_domain(b: Bump, c) -> Interval:
    """``[c, c*b]`` for a positive bump, ``[c*b, c]`` for a negative one."""
    if not b.interval.interior_contains(c):
        raise PLDomainError(
            f"{render_exact(c)} is not in the interior of bump interval {b.interval}"
        )
    cb = b.map(c)
    return Interval(c, cb) if b.direction > 0 else Interval(cb, c)


def is_in_F(m: PLMap) -> bool:
    """Dyadic breakpoints and every slope an integral power of two."""
    for x, y in zip(m.xs, m.ys):
        if not (is_dyadic(x) and is_dyadic(y)):
            return False
    for s in m.slopes:
        if not isinstance(s, Dyadic) or s.num & (s.num - 1):
            return False
    return True


def _power_pieces(length: Dyadic) -> list:
    """Split a positive dyadic length into distinct powers of two, largest first."""
    out = []
    n, e = length.num, length.exp
    bit = n.bit_length() - 1
    while n:
        if n >> bit & 1:
            out.append(Dyadic(1, e - bit))
            n -= 1 << bit
        bit -= 1
    return out


def _balance(pieces: list, count: int) -> list:
    pieces = list(pieces)
    while len(pieces) < count:
        k = max(range(len(pieces)), key=lambda i: (pieces[i], -i))
        half = pieces[k].shift(-1)
        pieces[k : k + 1] = [half, half]
    return pieces


def _segment(a, b, c, d) -> list:
    """Interior breakpoints of an F-map sending [a, b] onto [c, d]."""
    if a == c and b == d:
        return []
    dom = _power_pieces(b - a)
    rng = _power_pieces(d - c)
    n = max(len(dom), len(rng))
    dom, rng = _balance(dom, n), _balance(rng, n)
    pts = None
    # prefer a piece order with no slope-1 piece lying on the diagonal
    for dorder, rorder in ((dom, rng), (dom[::-1], rng[::-1]), (dom, rng[::-1]), (dom[::-1], rng)):
        cand = []
        x, y = a, c
        on_diag = False
        for dx, dy in zip(dorder, rorder):
            if x == y and dx == dy:
                on_diag = True
            x, y = x + dx, y + dy
            cand.append((x, y))
        if pts is None:
            pts = cand
        if not on_diag:
            pts = cand
            break
    return pts[:-1]


def interpolate(xs: Sequence, ys: Sequence) -> PLMap:
    """An element of F sending ``xs[i]`` to ``ys[i]``.

    When the first and last points are fixed the result is the identity
    outside ``[xs[0], xs[-1]]``.
    """
    if len(xs) != len(ys):
        raise PLDomainError("xs and ys must have the same length")
    try:
        xs = [Dyadic.from_value(v) for v in xs]
        ys = [Dyadic.from_value(v) for v in ys]
    except ValueError as exc:
        raise PLDomainError(f"interpolation points must be dyadic: {exc}") from None
    for seq in (xs, ys):
        if any(not (ZERO <= v <= ONE) for v in seq):
            raise PLDomainError("interpolation points must lie in [0,1]")
        if any(u >= v for u, v in zip(seq, seq[1:])):
            raise PLDomainError("interpolation points must be strictly increasing")
    anchors = list(zip(xs, ys))
    if not anchors or anchors[0][0] != ZERO:
        anchors.insert(0, (ZERO, ZERO))
    if anchors[-1][0] != ONE:
        anchors.append((ONE, ONE))
    if anchors[0][1] != ZERO or anchors[-1][1] != ONE:
        raise PLDomainError("0 and 1 must be fixed")
    if any(y0 >= y1 for (_, y0), (_, y1) in zip(anchors, anchors[1:])):
        raise PLDomainError("images must lie strictly inside (0,1) when 0 and 1 are not listed")
    pts = [anchors[0]]
    for (a, c), (b, d) in zip(anchors, anchors[1:]):
        pts.extend(_segment(a, b, c, d))
        pts.append((b, d))
    return PLMap(pts)
