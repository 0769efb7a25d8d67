"""Exact piecewise-linear homeomorphisms of the real line.

Every coordinate is a :class:`fractions.Fraction`.  A :class:`PLMap` is kept in
canonical form at all times (strictly increasing breakpoints, no collinear
breakpoint, positive slopes), so ``==`` decides functional equality.

Canonical forms:

* the identity has no breakpoints and both tail slopes equal to 1;
* a non-identity affine map ``x -> s*x + b`` keeps the single anchor
  breakpoint ``(0, b)``;
* every other map keeps exactly its genuine corners.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "PLError",
    "NonMonotone",
    "UnsortedBreakpoints",
    "PLMap",
    "IntervalUnion",
    "Window",
    "make_pl",
    "identity",
    "affine",
    "compose",
    "invert",
    "conjugate",
    "support",
    "eval_pl",
    "to_rational",
    "format_rational",
    "parse_rational",
]


class PLError(ValueError):
    pass


class NonMonotone(PLError):
    """A slope is not positive, so the data is not an increasing bijection."""


class UnsortedBreakpoints(PLError):
    pass


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """Canonical ``p/q`` string, always with an explicit denominator."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Strict inverse of :func:`format_rational`.

    Only the canonical form ``p/q`` with ``q > 0`` and ``gcd(|p|, q) = 1`` is
    accepted, e.g. ``"-3/2"`` or ``"4/1"``.
    """
    if not isinstance(text, str):
        raise PLError(f"expected a 'p/q' string, got {text!r}")
    num, sep, den = text.partition("/")
    if not sep:
        raise PLError(f"missing denominator in {text!r}")
    if not _is_int_literal(num, signed=True) or not _is_int_literal(den, signed=False):
        raise PLError(f"malformed rational {text!r}")
    p, q = int(num), int(den)
    if q == 0:
        raise PLError(f"zero denominator in {text!r}")
    value = Fraction(p, q)
    if format_rational(value) != text:
        raise PLError(f"non-canonical rational {text!r} (expected {format_rational(value)!r})")
    return value


def _is_int_literal(s: str, signed: bool) -> bool:
    if signed and s.startswith("-"):
        s = s[1:]
    return s.isdigit() and s.isascii()


@dataclass(frozen=True)
class Window:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", to_rational(self.lo))
        object.__setattr__(self, "hi", to_rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"window needs lo < hi, got [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


class PLMap:
    """Orientation-preserving PL homeomorphism of the line.

    ``breakpoints`` is a tuple of ``(x, y)`` pairs; left of the first one the
    map has slope ``slope_left``, right of the last one ``slope_right``.
    Instances are immutable; build them through :func:`make_pl`.
    """

    __slots__ = ("breakpoints", "slope_left", "slope_right", "_xs", "_ys", "_inverse")

    def __init__(self, breakpoints, slope_left, slope_right, _trusted=False):
        if not _trusted:
            raise TypeError("use make_pl() or identity() to build PLMap values")
        self.breakpoints = breakpoints
        self.slope_left = slope_left
        self.slope_right = slope_right
        self._xs = [p[0] for p in breakpoints]
        self._ys = [p[1] for p in breakpoints]
        self._inverse = None

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x) -> Fraction:
        xs = self._xs
        if not xs:
            return x
        i = bisect.bisect_right(xs, x)
        if i == 0:
            return self._ys[0] + self.slope_left * (x - xs[0])
        if i == len(xs):
            return self._ys[-1] + self.slope_right * (x - xs[-1])
        x0, x1 = xs[i - 1], xs[i]
        y0, y1 = self._ys[i - 1], self._ys[i]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def slope_at(self, x, side: int = 1) -> Fraction:
        """Slope of the germ at ``x`` on the right (``side=1``) or left (``side=-1``)."""
        xs = self._xs
        if not xs:
            return self.slope_left
        i = bisect.bisect_right(xs, x) if side > 0 else bisect.bisect_left(xs, x)
        return self._segment_slope(i)

    def _segment_slope(self, i: int) -> Fraction:
        # segment i lies between breakpoints i-1 and i
        xs, ys = self._xs, self._ys
        if i == 0:
            return self.slope_left
        if i == len(xs):
            return self.slope_right
        return (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])

    # -- group structure ----------------------------------------------------

    def __matmul__(self, other: "PLMap") -> "PLMap":
        return compose(self, other)

    def inverse(self) -> "PLMap":
        if self._inverse is None:
            inv = PLMap(
                tuple((y, x) for x, y in self.breakpoints),
                1 / self.slope_left,
                1 / self.slope_right,
                _trusted=True,
            )
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    def is_identity(self) -> bool:
        return not self.breakpoints

    # -- lazy-homeo protocol ------------------------------------------------

    def materialize(self, window: Window | None = None) -> "PLMap":
        return self

    def accumulation_points(self, lo=None, hi=None) -> list:
        return []

    # -- comparisons and misc -----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return (
            self.breakpoints == other.breakpoints
            and self.slope_left == other.slope_left
            and self.slope_right == other.slope_right
        )

    def __hash__(self):
        return hash((self.breakpoints, self.slope_left, self.slope_right))

    def __repr__(self):
        if self.is_identity():
            return "PLMap(identity)"
        pts = ", ".join(f"({x}, {y})" for x, y in self.breakpoints)
        return f"PLMap([{pts}], left={self.slope_left}, right={self.slope_right})"

    @property
    def xs(self) -> list:
        return list(self._xs)

    def restrict(self, window: Window) -> "PLMap":
        """Canonical map agreeing with ``self`` on ``window``; tails are the boundary germs extended."""
        lo, hi = window.lo, window.hi
        pts = [(lo, self(lo))]
        pts += [(x, y) for x, y in self.breakpoints if lo < x < hi]
        pts.append((hi, self(hi)))
        return make_pl(pts, self.slope_at(lo, 1), self.slope_at(hi, -1))

    def localize(self, lo, hi) -> "PLMap":
        """Map equal to ``self`` on ``[lo, hi]`` and the identity elsewhere.

        ``self`` must fix both ``lo`` and ``hi``.
        """
        if self(lo) != lo or self(hi) != hi:
            raise PLError(f"map does not fix the endpoints of [{lo}, {hi}]")
        pts = [(lo, lo)] + [(x, y) for x, y in self.breakpoints if lo < x < hi] + [(hi, hi)]
        return make_pl(pts, 1, 1)

    def to_dict(self) -> dict:
        return {
            "breakpoints": [[format_rational(x), format_rational(y)] for x, y in self.breakpoints],
            "slope_left": format_rational(self.slope_left),
            "slope_right": format_rational(self.slope_right),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PLMap":
        """Strict inverse of :meth:`to_dict`; non-canonical data is rejected."""
        if not isinstance(data, dict) or set(data) != {"breakpoints", "slope_left", "slope_right"}:
            raise PLError("a map needs exactly the keys breakpoints, slope_left, slope_right")
        raw = data["breakpoints"]
        if not isinstance(raw, list) or any(not isinstance(p, list) or len(p) != 2 for p in raw):
            raise PLError("breakpoints must be a list of [x, y] pairs")
        pts = [(parse_rational(x), parse_rational(y)) for x, y in raw]
        sl, sr = parse_rational(data["slope_left"]), parse_rational(data["slope_right"])
        if not pts:
            if sl != 1 or sr != 1:
                raise PLError("an empty breakpoint list is only allowed for the identity")
            return identity()
        f = make_pl(pts, sl, sr)
        if f.breakpoints != tuple(pts):
            raise PLError("map is not in canonical form (collinear or redundant breakpoints)")
        return f


_IDENTITY = PLMap((), Fraction(1), Fraction(1), _trusted=True)
_IDENTITY._inverse = _IDENTITY


def identity() -> PLMap:
    return _IDENTITY


def make_pl(breakpoints: Iterable, slope_left=1, slope_right=1) -> PLMap:
    """Build a canonical :class:`PLMap`, dropping collinear breakpoints."""
    pts = [(to_rational(x), to_rational(y)) for x, y in breakpoints]
    sl, sr = to_rational(slope_left), to_rational(slope_right)
    if sl <= 0 or sr <= 0:
        raise NonMonotone(f"tail slopes must be positive, got {sl} and {sr}")
    if not pts:
        if sl != 1 or sr != 1:
            raise PLError("no breakpoints given; only the identity can be built that way")
        return _IDENTITY
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if x1 <= x0:
            raise UnsortedBreakpoints(f"x-coordinates not strictly increasing at {x0}, {x1}")
        if y1 <= y0:
            raise NonMonotone(f"map not increasing between x={x0} and x={x1}")
    slopes = [sl] + [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])] + [sr]
    kept = [p for i, p in enumerate(pts) if slopes[i] != slopes[i + 1]]
    if kept:
        return PLMap(tuple(kept), sl, sr, _trusted=True)
    x0, y0 = pts[0]
    offset = y0 - sl * x0
    if sl == 1 and offset == 0:
        return _IDENTITY
    return PLMap(((Fraction(0), offset),), sl, sr, _trusted=True)


def affine(slope, offset) -> PLMap:
    """The map ``x -> slope*x + offset``."""
    slope, offset = to_rational(slope), to_rational(offset)
    return make_pl([(0, offset)], slope, slope)


def eval_pl(f: PLMap, x) -> Fraction:
    return f(to_rational(x))


def compose(f: PLMap, g: PLMap) -> PLMap:
    """``x -> f(g(x))``."""
    if g.is_identity():
        return f
    if f.is_identity():
        return g
    ginv = g.inverse()
    xs = set(g._xs)
    xs.update(ginv(x) for x in f._xs)
    xs = sorted(xs)
    pts = [(x, f(g(x))) for x in xs]
    return make_pl(pts, f.slope_left * g.slope_left, f.slope_right * g.slope_right)


def invert(f: PLMap) -> PLMap:
    return f.inverse()


def conjugate(f: PLMap, b: PLMap) -> PLMap:
    """``b o f o b^-1``."""
    return compose(b, compose(f, b.inverse()))


def compose_all(maps: Sequence[PLMap]) -> PLMap:
    """``maps[0] o maps[1] o ... o maps[-1]``."""
    out = _IDENTITY
    for m in reversed(maps):
        out = compose(m, out)
    return out


# ---------------------------------------------------------------------------
# interval unions


class IntervalUnion:
    """Finite sorted union of disjoint, non-adjacent closed intervals.

    Endpoints are Fractions; ``None`` as the lower bound of the first
    interval (or the upper bound of the last) marks an unbounded tail.
    Overlapping or touching intervals are merged on construction.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable = ()):
        items = []
        for lo, hi in intervals:
            lo = None if lo is None else to_rational(lo)
            hi = None if hi is None else to_rational(hi)
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            items.append((lo, hi))
        items.sort(key=lambda iv: (iv[0] is not None, iv[0] if iv[0] is not None else 0))
        merged: list = []
        for lo, hi in items:
            if merged:
                plo, phi = merged[-1]
                if phi is None or lo is None or lo <= phi:
                    merged[-1] = (plo, None if (phi is None or hi is None) else max(phi, hi))
                    continue
            merged.append((lo, hi))
        self.intervals = tuple(merged)

    @classmethod
    def whole_line(cls) -> "IntervalUnion":
        return cls([(None, None)])

    @property
    def unbounded_left(self) -> bool:
        return bool(self.intervals) and self.intervals[0][0] is None

    @property
    def unbounded_right(self) -> bool:
        return bool(self.intervals) and self.intervals[-1][1] is None

    @property
    def bounded(self) -> bool:
        return not (self.unbounded_left or self.unbounded_right)

    def is_empty(self) -> bool:
        return not self.intervals

    def __bool__(self):
        return bool(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        def fmt(v, inf):
            return inf if v is None else str(v)

        body = " u ".join(f"[{fmt(a, '-inf')}, {fmt(b, '+inf')}]" for a, b in self.intervals)
        return f"IntervalUnion({body or 'empty'})"

    def contains_point(self, x) -> bool:
        return any(_lo_le(lo, x) and _le_hi(x, hi) for lo, hi in self.intervals)

    def component_of(self, x):
        for iv in self.intervals:
            if _lo_le(iv[0], x) and _le_hi(x, iv[1]):
                return iv
        return None

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.intervals + other.intervals)

    def intersection(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for a_lo, a_hi in self.intervals:
            for b_lo, b_hi in other.intervals:
                lo = _max_lo(a_lo, b_lo)
                hi = _min_hi(a_hi, b_hi)
                if lo is None or hi is None or lo <= hi:
                    out.append((lo, hi))
        return IntervalUnion(out)

    def issubset(self, other: "IntervalUnion") -> bool:
        for lo, hi in self.intervals:
            if not any(_lo_le(olo, lo) and _hi_ge(ohi, hi) for olo, ohi in other.intervals):
                return False
        return True

    def isdisjoint(self, other: "IntervalUnion") -> bool:
        return self.intersection(other).is_empty()

    def image(self, f) -> "IntervalUnion":
        """Image under an increasing map; unbounded tails stay unbounded."""
        return IntervalUnion(
            (None if lo is None else f(lo), None if hi is None else f(hi)) for lo, hi in self.intervals
        )

    def hull(self):
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def gaps(self) -> list:
        return [(a[1], b[0]) for a, b in zip(self.intervals, self.intervals[1:])]

    def to_list(self) -> list:
        return [
            [None if lo is None else format_rational(lo), None if hi is None else format_rational(hi)]
            for lo, hi in self.intervals
        ]

    @classmethod
    def from_list(cls, data) -> "IntervalUnion":
        return cls(
            (None if lo is None else parse_rational(lo), None if hi is None else parse_rational(hi))
            for lo, hi in data
        )


def _lo_le(lo, x) -> bool:
    return lo is None or (x is not None and lo <= x)


def _le_hi(x, hi) -> bool:
    return hi is None or x <= hi


def _hi_ge(hi, x) -> bool:
    return hi is None or (x is not None and x <= hi)


def _max_lo(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_hi(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def support(f: PLMap) -> IntervalUnion:
    """Closure of ``{x : f(x) != x}``, computed segment by segment."""
    if f.is_identity():
        return IntervalUnion()
    xs, ys = f._xs, f._ys
    n = len(xs)
    # segment i is fixed pointwise iff displacement vanishes at both of its ends
    fixed = []
    fixed.append(f.slope_left == 1 and ys[0] == xs[0])
    for i in range(1, n):
        fixed.append(ys[i - 1] == xs[i - 1] and ys[i] == xs[i])
    fixed.append(f.slope_right == 1 and ys[-1] == xs[-1])
    # support is the complement of the union of open fixed segments
    bounds = [None] + list(xs) + [None]
    out = []
    start = None
    started = False
    for i in range(n + 1):
        lo, hi = bounds[i], bounds[i + 1]
        if not fixed[i]:
            if not started:
                start, started = lo, True
        else:
            if started:
                out.append((start, lo))
                started = False
    if started:
        out.append((start, None))
    return IntervalUnion(out)
