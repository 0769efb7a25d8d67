"""Splitting a sequence of homeomorphisms as ``f_n = g_n o h_n o k_n``.

``k_n`` has compact support in ``[-z_n, z_n]``, ``g_n`` is supported in the
union ``X`` of the blocks ``+-[x_m^-, x_m^+]`` and ``h_n`` in the closure
``Y`` of the complement of the unit intervals ``[+-z_m - 1/2, +-z_m + 1/2]``.

The anchor sequence is infinite; it is computed lazily and only as far as a
query needs.  Once every input is the identity outside some bounded range the
factors are finite :class:`PLMap` values.  Inputs with non-trivial affine
tails force ``g_n`` and ``h_n`` to have infinitely many (locally finite)
breakpoints; they are then :class:`~homeodistort.lazy.CellwiseHomeo` values.
"""

from __future__ import annotations

import bisect

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .checks import Report, first_difference
from .lazy import CellwiseHomeo, materialize_chain
from .pl import IntervalUnion, PLMap, Window, compose, format_rational, identity, make_pl, support

HALF = Fraction(1, 2)

__all__ = [
    "AnchorInvalid",
    "Anchors",
    "FactorizationResult",
    "normalize_sequence",
    "build_anchors",
    "build_factors",
    "factorize",
    "verify_factorization",
]


class AnchorInvalid(RuntimeError):
    pass


def normalize_sequence(fs: Sequence[PLMap]) -> list:
    """Prepend the identity, so that index ``n`` of the result is ``fs[n-1]``."""
    return [identity()] + list(fs)


def _ceil(q: Fraction) -> int:
    return math.ceil(q)


def _identity_tail(f: PLMap, side: int) -> bool:
    if f.is_identity():
        return True
    if side > 0:
        x, y = f.breakpoints[-1]
        return f.slope_right == 1 and x == y
    x, y = f.breakpoints[0]
    return f.slope_left == 1 and x == y


class Anchors:
    """The anchor points ``z_n``, ``x_n^-``, ``x_n^+`` for a normalized sequence.

    Index 0 is the base block ``X_0 = [-3, -1] u [1, 3]``; ``z_0`` is unused.
    Indices beyond the input length treat the missing maps as the identity,
    so extending the sequence never changes earlier anchors.
    """

    def __init__(self, fs: Sequence[PLMap]):
        if not fs or not fs[0].is_identity():
            raise ValueError("the sequence must start with the identity; see normalize_sequence")
        self.fs = list(fs)
        self.x_minus: list = [Fraction(1)]
        self.x_plus: list = [Fraction(3)]
        self.z: list = [None]
        self.trivial_tail = {
            side: all(_identity_tail(f, side) for f in self.fs) for side in (1, -1)
        }
        coords = [abs(c) for f in self.fs for pt in f.breakpoints for c in pt]
        self.tail_radius = max(coords, default=Fraction(0))
        self.extend_to(len(self.fs) - 1)

    @property
    def N(self) -> int:
        return len(self.fs) - 1

    def __len__(self):
        return len(self.x_minus)

    def _step(self):
        n = len(self.x_minus)
        xm = self.x_plus[-1] + 1
        active = self.fs[: min(n, self.N) + 1]
        cands = [xm]
        for j, f in enumerate(active):
            finv = f.inverse()
            # the literal candidates use x_j^-; the x_n^- ones make the images clear x_n^-
            xj = self.x_minus[j] if j < n else xm
            cands += [finv(xj), -finv(-xj), finv(xm), -finv(-xm)]
        z = Fraction(_ceil(max(cands)) + 1)
        reach = [max(f(z + HALF), -f(-z - HALF)) for f in active]
        xp = Fraction(_ceil(max(reach)) + 1)
        self.x_minus.append(xm)
        self.z.append(z)
        self.x_plus.append(xp)

    def extend_to(self, m: int):
        while len(self.x_minus) <= m:
            self._step()

    def cover(self, bound) -> int:
        """Extend until every block reaching ``[-bound, bound]`` is known; return the last index."""
        bound = abs(Fraction(bound))
        while self.x_minus[-1] <= bound + 1:
            self._step()
        return bisect.bisect_right(self.x_minus, bound + 1)

    def finite_index(self) -> Optional[int]:
        """Index beyond which every factor is the identity, or None if there is none."""
        if not (self.trivial_tail[1] and self.trivial_tail[-1]):
            return None
        m = max(self.cover(self.tail_radius), self.N + 1)
        self.extend_to(m + 1)
        return m + 1

    def X_block(self, m: int) -> IntervalUnion:
        return IntervalUnion([(-self.x_plus[m], -self.x_minus[m]), (self.x_minus[m], self.x_plus[m])])

    def X_truncated(self, m: int) -> IntervalUnion:
        self.extend_to(m)
        out = IntervalUnion()
        for j in range(m + 1):
            out = out.union(self.X_block(j))
        return out

    def Y_truncated(self, m: int) -> IntervalUnion:
        """Components of ``Y`` up to index ``m``, with unbounded tails beyond it."""
        self.extend_to(m)
        z = self.z
        ivs = [(-z[1] + HALF, z[1] - HALF)]
        for j in range(1, m):
            ivs.append((z[j] + HALF, z[j + 1] - HALF))
            ivs.append((-z[j + 1] + HALF, -z[j] - HALF))
        ivs.append((z[m] + HALF, None))
        ivs.append((None, -z[m] - HALF))
        return IntervalUnion(ivs)

    def to_dict(self, upto: Optional[int] = None) -> dict:
        m = self.N if upto is None else upto
        self.extend_to(m)
        fr = format_rational
        return {
            "z": [None] + [fr(v) for v in self.z[1 : m + 1]],
            "x_minus": [fr(v) for v in self.x_minus[: m + 1]],
            "x_plus": [fr(v) for v in self.x_plus[: m + 1]],
            "X": self.X_truncated(m).to_list(),
            "Y": self.Y_truncated(max(m, 1)).to_list(),
        }


def build_anchors(fs: Sequence[PLMap]) -> Anchors:
    return Anchors(fs)


def _window_hits(lo, hi, a, b) -> bool:
    return b >= lo and a <= hi


class _Factors:
    """Cell maps of ``g_n`` and ``h_n``, memoized per (n, m, side)."""

    def __init__(self, anchors: Anchors):
        self.an = anchors
        self._g_cells: dict = {}
        self._h_cells: dict = {}
        self.g: list = []
        self.h: list = []
        self.k: list = []

    def g_cell(self, n: int, m: int, side: int) -> PLMap:
        key = (n, m, side)
        if key not in self._g_cells:
            an, f = self.an, self.an.fs[n]
            lo, hi, z = an.x_minus[m], an.x_plus[m], an.z[m]
            if side < 0:
                lo, hi, z = -hi, -lo, -z
            a, b = z - HALF, z + HALF
            pts = [(lo, lo), (a, f(a))] + [(x, y) for x, y in f.breakpoints if a < x < b] + [(b, f(b)), (hi, hi)]
            try:
                self._g_cells[key] = make_pl(pts, 1, 1)
            except ValueError as exc:
                raise AnchorInvalid(f"block {m} cannot carry f_{n}: {exc}") from exc
        return self._g_cells[key]

    def g_cells(self, n: int, lo, hi) -> list:
        if n == 0:
            return []
        an = self.an
        top = an.cover(max(abs(lo), abs(hi)))
        out = []
        for m in range(max(n, 1), top + 1):
            for side in (-1, 1):
                a, b = an.x_minus[m], an.x_plus[m]
                if side < 0:
                    a, b = -b, -a
                if _window_hits(lo, hi, a, b):
                    cell = self.g_cell(n, m, side)
                    if not cell.is_identity():
                        out.append((a, b, cell))
        return out

    def phi_on(self, n: int, lo, hi) -> PLMap:
        """A PLMap agreeing with ``g_n^-1 o f_n`` on ``[lo, hi]``."""
        f = self.an.fs[n]
        ginv = self.g[n].inverse().materialize(Window(f(lo), f(hi)))
        return compose(ginv, f)

    def h_cell(self, n: int, m: int, side: int) -> PLMap:
        key = (n, m, side)
        if key not in self._h_cells:
            z = self.an.z
            lo, hi = z[m] + HALF, z[m + 1] - HALF
            if side < 0:
                lo, hi = -hi, -lo
            try:
                self._h_cells[key] = self.phi_on(n, lo, hi).localize(lo, hi)
            except ValueError as exc:
                raise AnchorInvalid(f"g_{n}^-1 f_{n} does not fix the ends of Y-cell {m}") from exc
        return self._h_cells[key]

    def h_cells(self, n: int, lo, hi) -> list:
        if n == 0:
            return []
        an = self.an
        top = an.cover(max(abs(lo), abs(hi)))
        an.extend_to(top + 1)
        out = []
        for m in range(n, top + 1):
            for side in (-1, 1):
                a, b = an.z[m] + HALF, an.z[m + 1] - HALF
                if side < 0:
                    a, b = -b, -a
                if _window_hits(lo, hi, a, b):
                    cell = self.h_cell(n, m, side)
                    if not cell.is_identity():
                        out.append((a, b, cell))
        return out


@dataclass
class FactorizationResult:
    anchors: Anchors
    g: list
    h: list
    k: list
    inputs: list
    finite: bool
    cells: Optional[_Factors] = None

    def extent(self) -> Fraction:
        """A radius containing every non-trivial finite piece of the prefix."""
        return self.anchors.x_plus[self.anchors.N] + 1

    def to_dict(self) -> dict:
        def enc(m):
            return m.to_dict() if isinstance(m, PLMap) else {"lazy": m.name}

        return {
            "anchors": self.anchors.to_dict(),
            "inputs": [f.to_dict() for f in self.inputs],
            "g": [enc(m) for m in self.g],
            "h": [enc(m) for m in self.h],
            "k": [m.to_dict() for m in self.k],
            "finite": self.finite,
        }


def build_factors(fs: Sequence[PLMap], anchors: Anchors) -> FactorizationResult:
    fac = _Factors(anchors)
    fin = anchors.finite_index()
    extent = None
    if fin is not None:
        extent = (-anchors.x_plus[fin] - 1, anchors.x_plus[fin] + 1)
    for n in range(len(fs)):
        g = CellwiseHomeo(lambda lo, hi, n=n: fac.g_cells(n, lo, hi), f"g_{n}", extent)
        trivial = fs[n].is_identity()
        fac.g.append(identity() if trivial else g)
        if trivial:
            fac.k.append(identity())
            fac.h.append(identity())
            continue
        z = anchors.z[n]
        try:
            k = fac.phi_on(n, -z, z).localize(-z, z)
        except ValueError as exc:
            raise AnchorInvalid(f"g_{n}^-1 f_{n} does not fix +-z_{n}") from exc
        fac.k.append(k)
        fac.h.append(CellwiseHomeo(lambda lo, hi, n=n: fac.h_cells(n, lo, hi), f"h_{n}", extent))
    if fin is not None:
        fac.g = [m if isinstance(m, PLMap) else m.as_plmap() for m in fac.g]
        fac.h = [m if isinstance(m, PLMap) else m.as_plmap() for m in fac.h]
    return FactorizationResult(anchors, fac.g, fac.h, fac.k, list(fs), fin is not None, fac)


def factorize(fs: Sequence[PLMap]) -> FactorizationResult:
    """Normalize ``fs`` (identity prepended) and factor every entry."""
    seq = normalize_sequence(fs)
    return build_factors(seq, build_anchors(seq))


def _candidates(maps, window: Window) -> list:
    pts = {window.lo, window.hi, Fraction(0)}
    for m in maps:
        if isinstance(m, PLMap):
            pts.update(x for x in m.xs if window.lo <= x <= window.hi)
    pts = sorted(p for p in pts if window.lo <= p <= window.hi)
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts) | set(mids))


def verify_factorization(res: FactorizationResult, windows: Optional[Sequence[Window]] = None) -> Report:
    """Exact re-check of the product identity and the three support containments."""
    rep = Report("factorization")
    if not res.inputs:
        return rep
    an = res.anchors
    rep.add("base block X_0 = [-3,-1] u [1,3]", an.x_minus[0] == 1 and an.x_plus[0] == 3)
    for n in range(1, an.N + 1):
        ok = an.z[n] > an.x_minus[n] > an.x_plus[n - 1]
        rep.add("anchors strictly increasing", ok, n)
    if windows is None:
        r = res.extent()
        windows = [Window(-r, r)]
    for n, f in enumerate(res.inputs):
        g, h, k = res.g[n], res.h[n], res.k[n]
        if res.finite:
            prod = compose(g, compose(h, k))
            same = prod == f
            wit = None if same else first_difference(prod, f, _product_candidates(prod, f))
            rep.add("f_n = g_n h_n k_n (structural)", same, n, wit)
        else:
            for w in windows:
                prod = materialize_chain([g, h, k], w)
                same = prod.restrict(w) == f.restrict(w)
                wit = None if same else first_difference(prod, f, _candidates([prod, f], w))
                rep.add(f"f_n = g_n h_n k_n on [{w.lo}, {w.hi}]", same, n, wit)
        zn = an.z[n] if n else Fraction(0)
        ks = support(k)
        rep.add("supp k_n in [-z_n, z_n]", ks.issubset(IntervalUnion([(-zn, zn)])) if n else ks.is_empty(), n)
        rep.add("supp g_n in X", _lazy_support_ok(g, an, "X", windows), n)
        rep.add("supp h_n in Y", _lazy_support_ok(h, an, "Y", windows), n)
    # agreement intervals sit inside X_m and meet Y only at their endpoints
    top = an.N + 1
    an.extend_to(top + 1)
    Y = an.Y_truncated(top + 1)
    for m in range(1, top + 1):
        z = an.z[m]
        units = [(z - HALF, z + HALF), (-z - HALF, -z + HALF)]
        inside = IntervalUnion(units).issubset(an.X_block(m))
        interiors = IntervalUnion([(a + HALF / 2, b - HALF / 2) for a, b in units])
        rep.add("[+-z_m +- 1/2] inside X_m and off Y", inside and interiors.isdisjoint(Y), m)
    return rep


def _product_candidates(p: PLMap, f: PLMap) -> list:
    pts = sorted(set(p.xs) | set(f.xs) | {Fraction(0)})
    if not pts:
        return [Fraction(0)]
    ext = [pts[0] - 1] + pts + [pts[-1] + 1]
    mids = [(a + b) / 2 for a, b in zip(ext, ext[1:])]
    return sorted(set(ext) | set(mids))


def _lazy_support_ok(m, an: Anchors, which: str, windows) -> bool:
    if isinstance(m, PLMap):
        supp = support(m)
        if supp.is_empty():
            return True
        if not supp.bounded:
            return False
        top = an.cover(max(abs(supp.hull()[0]), abs(supp.hull()[1])))
        target = an.X_truncated(top) if which == "X" else an.Y_truncated(top + 1)
        return supp.issubset(target)
    for w in windows:
        top = an.cover(max(abs(w.lo), abs(w.hi)))
        target = an.X_truncated(top) if which == "X" else an.Y_truncated(top + 1)
        for a, b, cell in m.cells(w.lo, w.hi):
            if not support(cell).issubset(IntervalUnion([(a, b)])) or not IntervalUnion([(a, b)]).issubset(target):
                return False
    return True
