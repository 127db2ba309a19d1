"""Exact dyadic rationals, closed intervals and canonical interval unions.

A :class:`Dyadic` is ``num / 2**exp`` kept in canonical form (``exp == 0`` or
``num`` odd), so equality is a tuple comparison.  Arithmetic between dyadics
stays dyadic except for division, which falls back to :class:`fractions.Fraction`
when the quotient has an odd denominator.  Fractions also appear as fixed
points of PL maps whose crossing of the diagonal is not dyadic; every routine
here accepts either kind of exact value.
"""

from __future__ import annotations

import numbers
import re
import sys
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "Dyadic",
    "Exact",
    "Interval",
    "IntervalSet",
    "DyadicParseError",
    "exact",
    "parse_exact",
    "render_exact",
    "dy_add",
    "dy_mul",
    "dy_neg",
    "dy_cmp",
    "is_dyadic",
    "is_power_of_two",
]

_HASH_MODULUS = sys.hash_info.modulus


class DyadicParseError(ValueError):
    """Raised for text that does not denote a dyadic rational."""

    def __init__(self, token: str, reason: str = "not a dyadic rational"):
        self.token = token
        super().__init__(f"{reason}: {token!r}")


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


class Dyadic:
    """The rational number ``num / 2**exp`` in canonical form."""

    __slots__ = ("num", "exp", "_hash")

    def __init__(self, num: int = 0, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        elif exp and not num & 1:
            tz = _trailing_zeros(num)
            if tz >= exp:
                num >>= exp
                exp = 0
            else:
                num >>= tz
                exp -= tz
        self.num = num
        self.exp = exp
        self._hash = None

    @classmethod
    def _raw(cls, num: int, exp: int) -> "Dyadic":
        # caller guarantees canonical form
        d = object.__new__(cls)
        d.num = num
        d.exp = exp
        d._hash = None
        return d

    @classmethod
    def from_value(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0)
        if isinstance(value, Fraction):
            d = value.denominator
            if d & (d - 1):
                raise ValueError(f"{value} is not dyadic")
            return cls(value.numerator, d.bit_length() - 1)
        if isinstance(value, str):
            return parse_exact(value, dyadic_only=True)
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    # -- numbers.Rational protocol ------------------------------------
    @property
    def numerator(self) -> int:
        return self.num

    @property
    def denominator(self) -> int:
        return 1 << self.exp

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def __bool__(self) -> bool:
        return self.num != 0

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            if self.exp == 0:
                h = hash(self.num)
            else:
                dinv = pow(1 << self.exp, -1, _HASH_MODULUS)
                h = hash(hash(abs(self.num)) * dinv)
                if self.num < 0:
                    h = -h
                if h == -1:
                    h = -2
            self._hash = h
        return h

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Dyadic):
            e1, e2 = self.exp, other.exp
            if e1 == e2:
                return Dyadic(self.num + other.num, e1)
            if e1 > e2:
                return Dyadic._raw(self.num + (other.num << (e1 - e2)), e1)
            return Dyadic._raw((self.num << (e2 - e1)) + other.num, e2)
        if isinstance(other, int):
            return Dyadic._raw(self.num + (other << self.exp), self.exp)
        if isinstance(other, Fraction):
            return exact(self.as_fraction() + other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Dyadic._raw(-self.num, self.exp)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if self.num >= 0 else -self

    def __sub__(self, other):
        if isinstance(other, Dyadic):
            return self + Dyadic._raw(-other.num, other.exp)
        if isinstance(other, int):
            return self + (-other)
        if isinstance(other, Fraction):
            return exact(self.as_fraction() - other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Dyadic):
            return Dyadic(self.num * other.num, self.exp + other.exp)
        if isinstance(other, int):
            return Dyadic(self.num * other, self.exp)
        if isinstance(other, Fraction):
            return exact(self.as_fraction() * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Dyadic._raw(other, 0)
        if isinstance(other, Dyadic):
            if other.num == 0:
                raise ZeroDivisionError("division by zero")
            d = other.num
            tz = _trailing_zeros(abs(d))
            odd = d >> tz
            q, r = divmod(self.num, odd)
            if r == 0:
                return Dyadic(q, self.exp - other.exp + tz)
            return exact(self.as_fraction() / other.as_fraction())
        if isinstance(other, Fraction):
            return exact(self.as_fraction() / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return Dyadic._raw(other, 0) / self
        if isinstance(other, Fraction):
            return exact(other / self.as_fraction())
        return NotImplemented

    def shift(self, k: int) -> "Dyadic":
        """Multiply by ``2**k``."""
        return Dyadic(self.num, self.exp - k)

    # -- comparison ---------------------------------------------------
    def _cmp(self, other) -> int:
        if isinstance(other, Dyadic):
            e1, e2 = self.exp, other.exp
            if e1 == e2:
                a, b = self.num, other.num
            elif e1 > e2:
                a, b = self.num, other.num << (e1 - e2)
            else:
                a, b = self.num << (e2 - e1), other.num
        elif isinstance(other, int):
            a, b = self.num, other << self.exp
        elif isinstance(other, Fraction):
            a = self.num * other.denominator
            b = other.numerator << self.exp
        else:
            raise TypeError
        return (a > b) - (a < b)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp})"

    def __str__(self):
        return f"{self.num}/2^{self.exp}"


numbers.Rational.register(Dyadic)

Exact = Union[Dyadic, Fraction]

ZERO = Dyadic._raw(0, 0)
ONE = Dyadic._raw(1, 0)
HALF = Dyadic._raw(1, 1)


def is_power_of_two(n: int) -> bool:
    return n > 0 and not n & (n - 1)


def is_dyadic(x) -> bool:
    if isinstance(x, (Dyadic, int)):
        return True
    if isinstance(x, Fraction):
        return is_power_of_two(x.denominator)
    return False


def exact(x) -> Exact:
    """Normalize an exact rational: dyadic values become :class:`Dyadic`."""
    if isinstance(x, Dyadic):
        return x
    if isinstance(x, int):
        return Dyadic._raw(x, 0)
    if isinstance(x, Fraction):
        d = x.denominator
        if d & (d - 1) == 0:
            return Dyadic._raw(x.numerator, d.bit_length() - 1)
        return x
    raise TypeError(f"not an exact rational: {x!r}")


_DYADIC_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")
_RATIO_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_exact(text: str, dyadic_only: bool = True) -> Exact:
    """Parse ``"n/2^k"``, ``"n/d"`` or ``"n"``.

    With ``dyadic_only`` a denominator that is not a power of two raises
    :class:`DyadicParseError` naming the token.
    """
    m = _DYADIC_RE.match(text)
    if m:
        return Dyadic(int(m.group(1)), int(m.group(2)))
    m = _RATIO_RE.match(text)
    if not m:
        raise DyadicParseError(text.strip(), "malformed number")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise DyadicParseError(text.strip(), "zero denominator")
    value = exact(Fraction(num, den))
    if dyadic_only and not isinstance(value, Dyadic):
        raise DyadicParseError(text.strip())
    return value


def render_exact(x) -> str:
    x = exact(x)
    if isinstance(x, Dyadic):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


# Function-style aliases for the arithmetic primitives.
def dy_add(a: Dyadic, b: Dyadic) -> Dyadic:
    return a + b


def dy_mul(a: Dyadic, b: Dyadic) -> Dyadic:
    return a * b


def dy_neg(a: Dyadic) -> Dyadic:
    return -a


def dy_cmp(a: Dyadic, b: Dyadic) -> int:
    """Return -1, 0 or 1."""
    return a._cmp(b) if isinstance(a, Dyadic) else -exact(b)._cmp(a)


class Interval:
    """A closed interval ``[lo, hi]``; ``lo == hi`` is a single point."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo, hi = exact(lo), exact(hi)
        if hi < lo:
            raise ValueError(f"empty interval [{render_exact(lo)},{render_exact(hi)}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def parse(cls, text: str) -> "Interval":
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise DyadicParseError(s, "malformed interval")
        parts = s[1:-1].split(",")
        if len(parts) != 2:
            raise DyadicParseError(s, "malformed interval")
        return cls(parse_exact(parts[0]), parse_exact(parts[1]))

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def interior_contains(self, x) -> bool:
        return self.lo < x < self.hi

    def subset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def strictly_inside(self, other: "Interval") -> bool:
        """``self`` lies in the interior of ``other``."""
        return other.lo < self.lo and self.hi < other.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def interiors_meet(self, other: "Interval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def midpoint(self):
        return exact((self.lo + self.hi) / 2)

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __lt__(self, other):
        return (self.lo, self.hi) < (other.lo, other.hi)

    def __repr__(self):
        return f"Interval({render_exact(self.lo)}, {render_exact(self.hi)})"

    def __str__(self):
        return f"[{render_exact(self.lo)},{render_exact(self.hi)}]"


class IntervalSet:
    """A finite union of closed intervals, stored merged and sorted.

    Overlapping or touching parts are merged, so two sets are equal exactly
    when their ``parts`` tuples are equal.
    """

    __slots__ = ("parts", "_hash")

    def __init__(self, parts: Iterable = ()):
        items = []
        for p in parts:
            if isinstance(p, Interval):
                items.append(p)
            elif isinstance(p, IntervalSet):
                items.extend(p.parts)
            else:
                items.append(Interval(*p))
        self.parts = _merge(items)
        self._hash = None

    @classmethod
    def _from_merged(cls, parts: tuple) -> "IntervalSet":
        s = object.__new__(cls)
        s.parts = parts
        s._hash = None
        return s

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        s = text.strip()
        if not s or s == "{}":
            return cls()
        chunks = re.findall(r"\[[^\]]*\]", s)
        rest = re.sub(r"\[[^\]]*\]", "", s).replace(",", "").strip()
        if rest:
            raise DyadicParseError(rest, "malformed interval set")
        return cls(Interval.parse(c) for c in chunks)

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls._from_merged((Interval(ZERO, ONE),))

    def is_empty(self) -> bool:
        return not self.parts

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    @property
    def lo(self):
        return self.parts[0].lo

    @property
    def hi(self):
        return self.parts[-1].hi

    def hull(self) -> Interval:
        return Interval(self.lo, self.hi)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet._from_merged(_merge(self.parts + other.parts))

    __or__ = union

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        a, b = self.parts, other.parts
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if lo <= hi:
                out.append(Interval(lo, hi))
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet._from_merged(_merge(out))

    __and__ = intersect

    def intersects(self, other: "IntervalSet") -> bool:
        a, b = self.parts, other.parts
        i = j = 0
        while i < len(a) and j < len(b):
            if a[i].lo <= b[j].hi and b[j].lo <= a[i].hi:
                return True
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return False

    def contains(self, x) -> bool:
        return any(p.lo <= x <= p.hi for p in self.parts)

    def subset(self, other: "IntervalSet") -> bool:
        return all(any(p.subset(q) for q in other.parts) for p in self.parts)

    def complement(self, within: Interval | None = None) -> "IntervalSet":
        """Closure of ``within`` minus this set (boundary points kept)."""
        within = within or Interval(ZERO, ONE)
        out = []
        cur = within.lo
        for p in self.parts:
            if p.hi < within.lo or p.lo > within.hi:
                continue
            if cur < p.lo:
                out.append(Interval(cur, p.lo))
            cur = max(cur, p.hi)
        if cur < within.hi:
            out.append(Interval(cur, within.hi))
        return IntervalSet._from_merged(_merge(out))

    def measure(self):
        total = ZERO
        for p in self.parts:
            total = total + p.length
        return total

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.parts)
        return self._hash

    def __lt__(self, other):
        return self.parts < other.parts

    def __repr__(self):
        return f"IntervalSet({str(self)})"

    def __str__(self):
        return ",".join(str(p) for p in self.parts) if self.parts else "{}"


def _merge(items) -> tuple:
    if not items:
        return ()
    items = sorted(items, key=lambda p: (p.lo, p.hi))
    out = [items[0]]
    for p in items[1:]:
        last = out[-1]
        if p.lo <= last.hi:
            if p.hi > last.hi:
                out[-1] = Interval(last.lo, p.hi)
        else:
            out.append(p)
    return tuple(out)
