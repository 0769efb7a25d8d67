"""Homeomorphisms with infinitely many, locally finite, linear pieces.

The main object is :class:`FisherProduct`, the infinite product

    A = prod_{n <= N, m >= 0}  (T^n S^m) a_n (T^n S^m)^-1

of conjugates of finitely many maps ``a_n`` supported in a set ``Z``.  Its
breakpoints accumulate at the points ``T^n(p)`` where ``p`` runs over the
attracting fixed points of ``S``, so ``A`` is never stored as a single
:class:`~homeodistort.pl.PLMap`.  It is evaluated exactly point by point and
materialized on windows that stay away from the accumulation set.

Termination of both operations rests on a *contraction witness*: for every
component ``C`` of ``Z`` the mover ``S`` pushes ``C`` into a region
``[S(C), p]`` that contains no other fixed point and on which the germ of
``S`` at ``p`` has slope < 1.  The same is required of ``T`` and the
components of ``supp(S)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .pl import IntervalUnion, PLMap, Window, compose, compose_all, identity, support

__all__ = [
    "DisjointnessViolation",
    "NoDecayWitness",
    "WindowHitsAccumulation",
    "LazyHomeo",
    "ConjugatedFamilySpec",
    "ContractionWitness",
    "FamilyReport",
    "FisherProduct",
    "CellwiseHomeo",
    "SupplierHomeo",
    "check_family",
    "build_A",
    "point_eval",
    "materialize",
    "next_fixed_point",
    "find_witness",
    "power",
    "materialize_chain",
]


class DisjointnessViolation(ValueError):
    def __init__(self, which: str, i: int, j: int, overlap: IntervalUnion):
        self.which, self.i, self.j, self.overlap = which, i, j, overlap
        super().__init__(f"{which}: iterates {i} and {j} overlap in {overlap}")


class NoDecayWitness(ValueError):
    pass


class WindowHitsAccumulation(ValueError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"window contains the accumulation point {point}")


class LazyHomeo:
    """Protocol shared with :class:`PLMap`: call, ``inverse``, ``materialize``."""

    def __call__(self, x):
        raise NotImplementedError

    def inverse(self) -> "LazyHomeo":
        raise NotImplementedError

    def materialize(self, window: Window) -> PLMap:
        raise NotImplementedError

    def accumulation_points(self, lo=None, hi=None) -> list:
        return []

    def is_identity(self) -> bool:
        return False

    def check_window(self, window: Window) -> None:
        pts = self.accumulation_points(window.lo, window.hi)
        if pts:
            raise WindowHitsAccumulation(min(pts))


def point_eval(h, x):
    return h(Fraction(x))


def materialize(h, window: Window) -> PLMap:
    return h.materialize(window)


def materialize_chain(maps: Sequence, window: Window) -> PLMap:
    """A PLMap agreeing with ``maps[0] o ... o maps[-1]`` on ``window``.

    Each map is materialized on the image of the window under the maps to
    its right, so every intermediate window must avoid accumulation points.
    """
    out = identity()
    w = window
    for m in reversed(maps):
        piece = m.materialize(w)
        out = compose(piece, out)
        w = Window(piece(w.lo), piece(w.hi))
    return out


def power(f: PLMap, k: int) -> PLMap:
    """``f`` composed with itself ``k`` times (``k`` may be negative)."""
    base = f if k >= 0 else f.inverse()
    out = identity()
    for _ in range(abs(k)):
        out = compose(base, out)
    return out


# ---------------------------------------------------------------------------
# fixed points and contraction witnesses


def next_fixed_point(f: PLMap, x, direction: int) -> Optional[Fraction]:
    """First fixed point of ``f`` strictly right (``direction=1``) or left of ``x``."""
    xs = f.xs
    if direction > 0:
        knots = [b for b in xs if b > x]
        lo = x
        for b in knots + [None]:
            slope = f.slope_at(lo, 1)
            d_lo = f(lo) - lo
            if b is None:
                if slope < 1 and d_lo > 0:
                    return lo + d_lo / (1 - slope)
                if d_lo < 0 and slope > 1:
                    return lo + d_lo / (1 - slope)
                return None
            d_hi = f(b) - b
            if d_hi == 0:
                return b
            if (d_lo > 0) != (d_hi > 0) and d_lo != 0:
                return lo + (b - lo) * d_lo / (d_lo - d_hi)
            lo = b
        return None
    knots = [b for b in reversed(xs) if b < x]
    hi = x
    for b in knots + [None]:
        slope = f.slope_at(hi, -1)
        d_hi = f(hi) - hi
        if b is None:
            if slope != 1 and (d_hi != 0):
                root = hi - d_hi / (slope - 1)
                if root < hi:
                    return root
            return None
        d_lo = f(b) - b
        if d_lo == 0:
            return b
        if (d_lo > 0) != (d_hi > 0) and d_hi != 0:
            return b + (hi - b) * d_lo / (d_lo - d_hi)
        hi = b
    return None


@dataclass(frozen=True)
class ContractionWitness:
    """``mover`` sends ``component`` into ``region``, which shrinks to ``fixed_point``.

    ``direction`` is +1 when the images move right.  ``ratio`` is the slope of
    the germ of the mover at the fixed point on the side of the region.
    """

    component: tuple
    fixed_point: Fraction
    region: tuple
    ratio: Fraction
    direction: int

    def in_region(self, y) -> bool:
        lo, hi = self.region
        if y == self.fixed_point:
            return False
        return lo <= y <= hi

    def to_dict(self) -> dict:
        from .pl import format_rational as fr

        return {
            "component": [fr(self.component[0]), fr(self.component[1])],
            "fixed_point": fr(self.fixed_point),
            "region": [fr(self.region[0]), fr(self.region[1])],
            "ratio": fr(self.ratio),
            "direction": self.direction,
        }


def find_witness(mover: PLMap, component: tuple) -> ContractionWitness:
    a, b = component
    if a is None or b is None:
        raise NoDecayWitness(f"component {component} is unbounded")
    ia, ib = mover(a), mover(b)
    if ia > b:
        p = next_fixed_point(mover, b, 1)
        if p is None:
            raise NoDecayWitness(f"iterates of [{a}, {b}] escape to +inf")
        ratio = mover.slope_at(p, -1)
        region = (ia, p)
        direction = 1
    elif ib < a:
        p = next_fixed_point(mover, a, -1)
        if p is None:
            raise NoDecayWitness(f"iterates of [{a}, {b}] escape to -inf")
        ratio = mover.slope_at(p, 1)
        region = (p, ib)
        direction = -1
    else:
        raise NoDecayWitness(f"[{a}, {b}] is not displaced off itself")
    if not ratio < 1:
        raise NoDecayWitness(f"germ at fixed point {p} has slope {ratio}, no contraction")
    if not (region[0] < region[1] or region[0] == region[1] == p):
        raise NoDecayWitness(f"empty region for [{a}, {b}]")
    return ContractionWitness((a, b), p, region, ratio, direction)


# ---------------------------------------------------------------------------
# conjugated families


@dataclass
class ConjugatedFamilySpec:
    terms: list
    mover_T: PLMap
    mover_S: PLMap
    Z: IntervalUnion


@dataclass
class FamilyReport:
    ok: bool
    depth: int
    s_witnesses: list
    t_witnesses: list
    ratio: Optional[Fraction]
    pairs_checked: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        from .pl import format_rational as fr

        return {
            "ok": self.ok,
            "depth": self.depth,
            "ratio": None if self.ratio is None else fr(self.ratio),
            "pairs_checked": self.pairs_checked,
            "s_witnesses": [w.to_dict() for w in self.s_witnesses],
            "t_witnesses": [w.to_dict() for w in self.t_witnesses],
            "notes": list(self.notes),
        }


def _iterates(f: PLMap, base: IntervalUnion, depth: int) -> list:
    out = [base]
    for _ in range(depth):
        out.append(out[-1].image(f))
    return out


def _check_pairwise(which: str, sets: list) -> int:
    count = 0
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            count += 1
            overlap = sets[i].intersection(sets[j])
            if overlap:
                raise DisjointnessViolation(which, i, j, overlap)
    return count


def check_family(spec: ConjugatedFamilySpec, depth: int = 20) -> FamilyReport:
    """Exact check of the displacement hypotheses, plus structural decay witnesses.

    The prefix ``0..depth`` is checked by interval arithmetic; the witnesses
    prove disjointness and shrinking for every iterate.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    Z, S, T = spec.Z, spec.mover_S, spec.mover_T
    for n, a in enumerate(spec.terms):
        if not support(a).issubset(Z):
            raise ValueError(f"term {n} is not supported in Z")
    W = support(S)
    pairs = _check_pairwise("S-iterates of Z", _iterates(S, Z, depth))
    pairs += _check_pairwise("T-iterates of supp(S)", _iterates(T, W, depth))

    s_w = [find_witness(S, c) for c in Z]
    t_w = [find_witness(T, c) for c in W]
    # every iterate S^k(Z), k >= 1, lies in the union of regions; those must miss Z
    s_regions = IntervalUnion(w.region for w in s_w)
    if not s_regions.isdisjoint(Z):
        raise DisjointnessViolation("S-regions vs Z", 0, -1, s_regions.intersection(Z))
    t_regions = IntervalUnion(w.region for w in t_w)
    if not t_regions.isdisjoint(W):
        raise DisjointnessViolation("T-regions vs supp(S)", 0, -1, t_regions.intersection(W))
    ratios = [w.ratio for w in s_w + t_w]
    return FamilyReport(True, depth, s_w, t_w, max(ratios) if ratios else None, pairs)


class FisherProduct(LazyHomeo):
    """Infinite product of conjugates; see the module docstring."""

    def __init__(self, terms: Sequence[PLMap], S: PLMap, T: PLMap, Z: IntervalUnion, s_witnesses, name="A"):
        self.terms = list(terms)
        self.S, self.T, self.Z = S, T, Z
        self.W = support(S)
        self.s_witnesses = list(s_witnesses)
        self.name = name
        self._inverse = None
        self._t_powers = {}
        # which components of Z each term actually moves
        self._active = []
        for a in self.terms:
            supp = support(a)
            self._active.append(
                [k for k, c in enumerate(Z) if not a.is_identity() and not supp.isdisjoint(IntervalUnion([c]))]
            )

    @classmethod
    def from_spec(cls, spec: ConjugatedFamilySpec, report: FamilyReport, name="A"):
        return cls(spec.terms, spec.mover_S, spec.mover_T, spec.Z, report.s_witnesses, name)

    def is_identity(self) -> bool:
        return all(not act for act in self._active)

    def _t_power(self, n: int) -> PLMap:
        if n not in self._t_powers:
            self._t_powers[n] = power(self.T, n)
        return self._t_powers[n]

    def __call__(self, x):
        x = Fraction(x)
        if self.is_identity():
            return x
        Tinv = self.T.inverse()
        y = x
        layer = None
        for n in range(len(self.terms)):
            if n:
                y = Tinv(y)
            if self.W.contains_point(y):
                layer = n
                break
        if layer is None or not self._active[layer]:
            return x
        a = self.terms[layer]
        Sinv = self.S.inverse()
        m = 0
        while True:
            if self.Z.contains_point(y):
                out = a(y)
                for _ in range(m):
                    out = self.S(out)
                for _ in range(layer):
                    out = self.T(out)
                return out
            if any(w.in_region(y) for w in self.s_witnesses):
                y = Sinv(y)
                m += 1
                continue
            return x

    def inverse(self) -> "FisherProduct":
        if self._inverse is None:
            inv = FisherProduct(
                [a.inverse() for a in self.terms], self.S, self.T, self.Z, self.s_witnesses, self.name + "^-1"
            )
            inv._inverse = self
            inv._t_powers = self._t_powers
            self._inverse = inv
        return self._inverse

    def accumulation_points(self, lo=None, hi=None) -> list:
        pts = set()
        for n, comps in enumerate(self._active):
            for k in comps:
                pts.add(self.T_n(n)(self.s_witnesses[k].fixed_point))
        return sorted(p for p in pts if (lo is None or p >= lo) and (hi is None or p <= hi))

    def T_n(self, n: int) -> PLMap:
        return self._t_power(n)

    def materialize(self, window: Window) -> PLMap:
        self.check_window(window)
        pieces = []
        for n, comps in enumerate(self._active):
            Tn = self._t_power(n)
            for k in comps:
                w = self.s_witnesses[k]
                lo, hi = w.component
                local = self.terms[n].localize(lo, hi)
                target = Tn(w.fixed_point)
                if (w.direction > 0 and window.lo > target) or (w.direction < 0 and window.hi < target):
                    continue
                conj = Tn
                while True:
                    plo, phi = conj(lo), conj(hi)
                    if w.direction > 0 and plo > window.hi:
                        break
                    if w.direction < 0 and phi < window.lo:
                        break
                    if phi >= window.lo and plo <= window.hi:
                        pieces.append(compose(conj, compose(local, conj.inverse())))
                    conj = compose(conj, self.S)
        return compose_all(pieces)

    def __repr__(self):
        return f"FisherProduct({self.name}, {len(self.terms)} terms, {len(self.Z)} components)"


def build_A(spec: ConjugatedFamilySpec, depth: int = 4, name="A") -> FisherProduct:
    report = check_family(spec, depth)
    return FisherProduct.from_spec(spec, report, name)


class CellwiseHomeo(LazyHomeo):
    """Homeomorphism acting separately on a locally finite family of cells.

    ``cells(lo, hi)`` returns ``(cell_lo, cell_hi, map)`` for every cell
    meeting ``[lo, hi]``; each map is supported in its cell.  Outside all
    cells the homeomorphism is the identity.
    """

    def __init__(self, cells: Callable, name="h", finite_extent=None):
        self._cells = cells
        self.name = name
        self.finite_extent = finite_extent
        self._inverse = None

    def cells(self, lo, hi) -> list:
        return self._cells(lo, hi)

    def __call__(self, x):
        x = Fraction(x)
        for clo, chi, m in self._cells(x, x):
            if clo <= x <= chi:
                return m(x)
        return x

    def inverse(self) -> "CellwiseHomeo":
        if self._inverse is None:
            cells = self._cells

            def inv_cells(lo, hi):
                return [(a, b, m.inverse()) for a, b, m in cells(lo, hi)]

            inv = CellwiseHomeo(inv_cells, self.name + "^-1", self.finite_extent)
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    def accumulation_points(self, lo=None, hi=None) -> list:
        pts = []
        for _, _, m in self._cells(lo, hi):
            pts.extend(m.accumulation_points(lo, hi))
        return sorted(set(pts))

    def materialize(self, window: Window) -> PLMap:
        self.check_window(window)
        return compose_all([m.materialize(window) for _, _, m in self._cells(window.lo, window.hi)])

    def as_plmap(self) -> PLMap:
        """The whole map as one finite PLMap, when all its cells lie in a bounded range."""
        if self.finite_extent is None:
            raise ValueError(f"{self.name} has infinitely many nontrivial cells")
        lo, hi = self.finite_extent
        parts = [m for _, _, m in self._cells(lo, hi)]
        if any(not isinstance(m, PLMap) for m in parts):
            raise ValueError(f"{self.name} has lazy cells")
        return compose_all(parts)

    def __repr__(self):
        return f"CellwiseHomeo({self.name})"


class SupplierHomeo(LazyHomeo):
    """A homeomorphism given only by a coherent window -> PLMap supplier."""

    def __init__(self, supplier: Callable, accumulation: Iterable = (), inverse_supplier=None, name="h"):
        self.supplier = supplier
        self.accumulation = sorted(Fraction(p) for p in accumulation)
        self.inverse_supplier = inverse_supplier
        self.name = name

    def accumulation_points(self, lo=None, hi=None) -> list:
        return [p for p in self.accumulation if (lo is None or p >= lo) and (hi is None or p <= hi)]

    def __call__(self, x):
        x = Fraction(x)
        if x in self.accumulation:
            return x
        gap = min([abs(x - p) for p in self.accumulation] + [Fraction(2)]) / 2
        return self.materialize(Window(x - gap, x + gap))(x)

    def materialize(self, window: Window) -> PLMap:
        self.check_window(window)
        return self.supplier(window)

    def inverse(self) -> "SupplierHomeo":
        if self.inverse_supplier is None:
            raise NotImplementedError("no inverse supplier was given")
        return SupplierHomeo(self.inverse_supplier, self.accumulation, self.supplier, self.name + "^-1")
