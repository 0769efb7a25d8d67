"""Two PL maps of the line with disjoint, locally finite interval orbits.

We build ``S`` and ``T``, both the identity on ``(-inf, 0]``, and small
intervals ``I_0 < I_1 < ...`` in ``(0, inf)`` such that the images
``S^i I_k`` and ``T^j I_k`` (``i, j`` integers) are pairwise disjoint apart
from ``S^0 I_k = T^0 I_k``.

``S`` is ``x -> 2(x - 2) + 2`` on ``[2, inf)`` and the identity below 2, so
backward ``S``-orbits accumulate at 2.  The base ``T_0`` agrees with ``S`` on
``[3, inf)``, has slope 3/2 on ``[1, 3]`` and fixes 1, so backward
``T``-orbits accumulate at 1.  Each step picks a centre ``x_k``, a radius,
and up to two tent bumps that push ``T(I_k)`` and ``T^-1(I_k)`` off the
``S``-orbit of ``I_k``.  Everything is exact; the smooth category is replaced
by the PL one throughout.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .pl import PLMap, Window, compose, format_rational, make_pl, parse_rational

__all__ = [
    "SearchExhausted",
    "OrbitSystem",
    "base_S",
    "base_T",
    "tent",
    "identity_below",
    "stern_brocot_candidates",
    "build_orbit_system",
    "verify_orbit_system",
    "orbit_images",
    "radial_suspension",
    "RadialPoint",
    "figure_text",
]

RADIUS_CAP = Fraction(1, 3)
BUMP_CAP = Fraction(1, 2)


class SearchExhausted(RuntimeError):
    def __init__(self, k: int, detail: str = ""):
        self.k = k
        super().__init__(f"no admissible centre for I_{k} {detail}".rstrip())


def base_S() -> PLMap:
    return make_pl([(2, 2)], 1, 2)


def base_T() -> PLMap:
    return make_pl([(0, 0), (1, 1), (3, 4)], 1, 2)


def identity_below(f: PLMap, c) -> bool:
    """True when ``f`` is the identity on ``(-inf, c]``."""
    c = Fraction(c)
    if f.slope_left != 1 or f(c) != c:
        return False
    # every breakpoint left of c on the diagonal, and the first one too
    pts = [(x, y) for x, y in f.breakpoints if x <= c] or list(f.breakpoints[:1])
    return all(x == y for x, y in pts)


def tent(c, eps) -> PLMap:
    """Bump supported on ``[c - eps, c + eps]`` sending ``c`` to ``c + 3 eps/4``."""
    c, eps = Fraction(c), Fraction(eps)
    return make_pl([(c - eps, c - eps), (c, c + 3 * eps / 4), (c + eps, c + eps)], 1, 1)


def stern_brocot_candidates(lo, hi, bound: int):
    """Rationals in the open interval ``(lo, hi)`` with denominator at most ``bound``.

    Yields by increasing denominator, then increasing value, which is the
    order in which the Stern-Brocot tree first reaches them.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    for q in range(1, bound + 1):
        p = math.floor(lo * q) + 1
        while Fraction(p, q) < hi:
            if math.gcd(p, q) == 1:
                yield Fraction(p, q)
            p += 1


# ---------------------------------------------------------------------------
# images and collisions


def _img(f: PLMap, iv: tuple) -> tuple:
    return (f(iv[0]), f(iv[1]))


def orbit_images(f: PLMap, iv: tuple, depth: int) -> dict:
    """``{j: f^j(iv)}`` for ``|j| <= depth``."""
    out = {0: iv}
    finv = f.inverse()
    cur = iv
    for j in range(1, depth + 1):
        cur = _img(f, cur)
        out[j] = cur
    cur = iv
    for j in range(1, depth + 1):
        cur = _img(finv, cur)
        out[-j] = cur
    return out


def _all_images(S: PLMap, T: PLMap, intervals: list, depth: int) -> list:
    """``(lo, hi, tag)`` items; ``S^0 I_k`` stands for both zero powers."""
    items = []
    for k, iv in enumerate(intervals):
        for i, im in orbit_images(S, iv, depth).items():
            items.append((im[0], im[1], ("S", i, k) if i else ("I", 0, k)))
        for j, im in orbit_images(T, iv, depth).items():
            if j:
                items.append((im[0], im[1], ("T", j, k)))
    return items


def _collisions(items: list) -> list:
    """All pairs of closed intervals that meet, by a sweep over left ends."""
    items = sorted(items, key=lambda t: (t[0], t[1]))
    active: list = []
    out = []
    for lo, hi, tag in items:
        active = [a for a in active if a[1] >= lo]
        for a in active:
            out.append((a, (lo, hi, tag)))
        active.append((lo, hi, tag))
    return out


def _distance(x, iv: tuple) -> Fraction:
    if iv[0] <= x <= iv[1]:
        return Fraction(0)
    return iv[0] - x if x < iv[0] else x - iv[1]


# ---------------------------------------------------------------------------
# the system


@dataclass
class OrbitSystem:
    S: PLMap
    T: PLMap
    intervals: list
    construction_log: list = field(default_factory=list)
    depth: int = 16
    denominator_bound: int = 64

    def to_dict(self) -> dict:
        return {
            "S": self.S.to_dict(),
            "T": self.T.to_dict(),
            "intervals": [[format_rational(a), format_rational(b)] for a, b in self.intervals],
            "construction_log": self.construction_log,
            "depth": self.depth,
            "denominator_bound": self.denominator_bound,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OrbitSystem":
        return cls(
            PLMap.from_dict(data["S"]),
            PLMap.from_dict(data["T"]),
            [(parse_rational(a), parse_rational(b)) for a, b in data["intervals"]],
            list(data.get("construction_log", [])),
            int(data.get("depth", 16)),
            int(data.get("denominator_bound", 64)),
        )


def _bump_for(J: tuple, avoid: list) -> Optional[tuple]:
    """Tent ``(c, eps)`` pushing ``J`` off itself, supported away from ``avoid``."""
    c = (J[0] + J[1]) / 2
    w = (J[1] - J[0]) / 2
    gap = min([_distance(c, iv) for iv in avoid] + [2 * BUMP_CAP])
    eps = gap / 2
    if eps < 8 * w or eps <= 0:
        return None
    return c, eps


def _place(x, r, S, T, intervals, depth) -> Optional[tuple]:
    I = (x - r, x + r)
    prior_T = []
    for iv in intervals:
        prior_T.extend(orbit_images(T, iv, depth).values())
    entry = {"x": format_rational(x), "radius": format_rational(r), "forward_bump": None, "backward_bump": None}
    SI = _img(S, I)
    TI = _img(T, I)
    if not (TI[1] < SI[0] or SI[1] < TI[0]):
        b = _bump_for(TI, prior_T + [I])
        if b is None:
            return None
        T = compose(tent(*b), T)
        entry["forward_bump"] = [format_rational(b[0]), format_rational(b[1])]
    Sinv = S.inverse()
    SbI = _img(Sinv, I)
    TbI = _img(T.inverse(), I)
    if not (TbI[1] < SbI[0] or SbI[1] < TbI[0]):
        avoid = prior_T + [I, _img(T, I)]
        b = _bump_for(TbI, avoid)
        if b is None:
            return None
        T = compose(T, tent(*b).inverse())
        entry["backward_bump"] = [format_rational(b[0]), format_rational(b[1])]
    if _collisions(_all_images(S, T, intervals + [I], depth)):
        return None
    return I, T, entry


def build_orbit_system(K: int, denominator_bound: int, depth: int = 16) -> OrbitSystem:
    """Greedy construction of ``K`` intervals, checked exactly to iterate ``depth``.

    Centres are searched in the open unit window above
    ``max(3, S(x_{k-1}))`` and above every bump so far; radii start at half
    the distance to the nearby orbit images (capped at 1/3) and are halved
    until the bumps fit and the exact collision check passes.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if denominator_bound < 1:
        raise ValueError("denominator_bound must be >= 1")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    S, T = base_S(), base_T()
    Sinv = S.inverse()
    intervals: list = []
    log: list = []
    lower = Fraction(3)
    for k in range(K):
        orbit2 = set()
        y = Fraction(2)
        while y <= lower + 1:
            y = T(y)
            orbit2.add(y)
        prior = []
        for iv in intervals:
            prior.extend(orbit_images(S, iv, depth).values())
            prior.extend(orbit_images(T, iv, depth).values())
        tried = 0
        placed = None
        for x in stern_brocot_candidates(lower, lower + 1, denominator_bound):
            tried += 1
            if x in orbit2:
                continue
            own = [Sinv(x)]
            near = [iv for iv in prior if iv[1] > 2] + [(p, p) for p in own]
            gap = min(_distance(x, iv) for iv in near) if near else RADIUS_CAP * 2
            if gap == 0:
                continue
            r = min(RADIUS_CAP, gap / 2)
            for shrink in range(8):
                placed = _place(x, r, S, T, intervals, depth)
                if placed is not None:
                    break
                r /= 2
            if placed is not None:
                break
        if placed is None:
            raise SearchExhausted(k, f"after {tried} candidates with denominator <= {denominator_bound}")
        I, T, entry = placed
        entry.update({"k": k, "candidates_tried": tried, "avoidance_size": len(prior), "shrinks": shrink})
        intervals.append(I)
        log.append(entry)
        ends = [S(I[1])]
        for key in ("forward_bump", "backward_bump"):
            if entry[key] is not None:
                c, e = (parse_rational(v) for v in entry[key])
                ends.append(c + e)
        lower = max(lower, *ends)
    return OrbitSystem(S, T, intervals, log, depth, denominator_bound)


# ---------------------------------------------------------------------------
# verification


def _tag_str(tag) -> str:
    kind, i, k = tag
    if kind == "I":
        return f"I_{k}"
    return f"{kind}^{i} I_{k}"


def verify_orbit_system(sys: OrbitSystem, window: Window, depth: int) -> dict:
    """Exact disjointness to ``depth`` inside ``window`` plus per-unit image counts.

    Forward images move right monotonically, so each unit window meets only
    finitely many of them.  Backward images accumulate only at the fixed
    points 1 and 2, so their counts are finite on unit windows away from those
    points; windows containing 1 or 2 are flagged rather than counted as proof.
    Counts are reported for the unit windows holding an image endpoint.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    S, T = sys.S, sys.T
    items = [
        it
        for it in _all_images(S, T, list(sys.intervals), depth)
        if it[1] >= window.lo and it[0] <= window.hi
    ]
    violations = []
    for a, b in _collisions(items):
        lo, hi = max(a[0], b[0]), min(a[1], b[1])
        violations.append(
            {
                "first": _tag_str(a[2]),
                "second": _tag_str(b[2]),
                "overlap": [format_rational(lo), format_rational(hi)],
            }
        )
    fixed_checks = {
        "S(2) = 2": S(2) == 2,
        "T(1) = 1": T(1) == 1,
        "S identity on (-inf, 0]": identity_below(S, 0),
        "T identity on (-inf, 0]": identity_below(T, 0),
    }
    forward = sorted((lo, hi) for lo, hi, tag in items if tag[1] >= 0)
    backward = sorted((lo, hi) for lo, hi, tag in items if tag[1] < 0)
    counts = {}
    flagged = []
    lo_u = math.floor(window.lo)
    hi_u = math.ceil(window.hi)
    f_his = sorted(h for _, h in forward)
    b_his = sorted(h for _, h in backward)
    f_los = [l for l, _ in forward]
    b_los = [l for l, _ in backward]
    # unit windows without an endpoint lie inside a single image; skip them
    units = set()
    for lo, hi, _ in items:
        for e in (lo, hi):
            units.update((math.floor(e), math.ceil(e) - 1))
    for a in sorted(u for u in units if lo_u <= u < hi_u):
        # images meeting [a, a + 1]: lo <= a + 1 and hi >= a
        nf = bisect.bisect_right(f_los, a + 1) - bisect.bisect_left(f_his, a)
        nb = bisect.bisect_right(b_los, a + 1) - bisect.bisect_left(b_his, a)
        nf = max(nf, 0)
        nb = max(nb, 0)
        if a <= 1 <= a + 1 or a <= 2 <= a + 1:
            if nb:
                flagged.append(a)
        if nf or nb:
            counts[a] = {"forward": nf, "backward": nb}
    ok = not violations and all(fixed_checks.values())
    return {
        "passed": ok,
        "depth": depth,
        "window": [format_rational(window.lo), format_rational(window.hi)],
        "images": len(items),
        "violations": violations,
        "fixed_point_checks": fixed_checks,
        "unit_window_counts": {str(a): c for a, c in counts.items()},
        "accumulation_windows": flagged,
        "whitelisted": [f"S^0 I_{k} = T^0 I_{k}" for k in range(len(sys.intervals))],
    }


# ---------------------------------------------------------------------------
# radial suspension


@dataclass(frozen=True)
class RadialPoint:
    """The point ``direction * (rational + surd * sqrt(radicand))``, held exactly."""

    direction: tuple
    rational: Fraction
    surd: Fraction
    radicand: Fraction

    def coords(self) -> tuple:
        s = float(self.rational) + float(self.surd) * math.sqrt(self.radicand)
        return tuple(float(c) * s for c in self.direction)

    def radius_squared(self) -> Fraction:
        """Squared radius of the point; rational only when the surd part vanishes."""
        if self.surd:
            raise ValueError("radius is irrational")
        return self.rational**2 * sum(c * c for c in self.direction)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _affine_piece_at_root(h: PLMap, rho: Fraction) -> tuple:
    """``(alpha, beta)`` with ``h(x) = alpha x + beta`` near ``x = sqrt(rho)``."""
    # x < sqrt(rho) iff x < 0 or x^2 < rho
    i = sum(1 for x in h.xs if x < 0 or x * x < rho)
    if not h.breakpoints:
        alpha = h.slope_left
        return alpha, h(0)
    if i == 0:
        x0, y0 = h.breakpoints[0]
        alpha = h.slope_left
    else:
        x0, y0 = h.breakpoints[i - 1]
        alpha = h.slope_at(x0, 1)
    return alpha, y0 - alpha * x0


def radial_suspension(h: PLMap, p):
    """Apply ``h`` to the radius of ``p`` and keep its direction.

    The radial coordinate is the Euclidean radius, so ``h`` must fix 0.  When
    ``|p|`` is rational the result is a tuple of rationals.  Otherwise
    ``h(|p|) / |p|`` is ``alpha + (beta / rho) sqrt(rho)`` for the affine piece
    ``alpha x + beta`` of ``h`` at the radius, and a :class:`RadialPoint` keeps
    that surd exactly.
    """
    p = tuple(Fraction(c) for c in p)
    if h(0) != 0:
        raise ValueError("h must fix 0 to act on radii")
    rho = sum(c * c for c in p)
    if rho == 0:
        return p
    r = _rational_sqrt(rho)
    if r is not None:
        scale = h(r) / r
        return tuple(c * scale for c in p)
    alpha, beta = _affine_piece_at_root(h, rho)
    if beta == 0:
        return tuple(c * alpha for c in p)
    return RadialPoint(p, alpha, beta / rho, rho)


# ---------------------------------------------------------------------------
# text figure


def figure_text(sys: OrbitSystem, depth: int = 3, hi=None) -> str:
    """One line per iterate listing the intervals it produces, left to right."""
    lines = []
    for power in range(-depth, depth + 1):
        row = []
        for k, iv in enumerate(sys.intervals):
            for name, f in (("S", sys.S), ("T", sys.T)):
                if power == 0 and name == "T":
                    continue
                im = orbit_images(f, iv, abs(power))[power]
                if hi is not None and im[0] > hi:
                    continue
                label = f"I{k}" if power == 0 else f"{name}^{power}I{k}"
                row.append((im[0], f"{label}=[{format_rational(im[0])}, {format_rational(im[1])}]"))
        row.sort()
        lines.append(f"{power:+d} | " + "  ".join(s for _, s in row))
    return "\n".join(lines) + "\n"
