"""Ten homeomorphisms and short words realizing an arbitrary sequence.

Given ``f_1, ..., f_N`` the pipeline is

1. factor ``f_n = g_n o h_n o k_n`` (:mod:`homeodistort.factorization`);
2. squeeze the compactly supported ``k_n`` into one interval with a single
   expanding map ``d``;
3. encode each of the three sequences in one infinite product ``A`` with two
   movers ``S``, ``T``, so that ``a_n = [T^-n A T^n, S]``.

The word for ``f_n`` is ``F_g(n) . F_h(n) . d^n F_k(n) d^-n`` where ``F(n)``
is the commutator word of length ``4n + 4``.  Words are applied right to
left, i.e. the rightmost letter acts first.
"""

from __future__ import annotations

import bisect
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .checks import Report
from .factorization import FactorizationResult, factorize
from .lazy import (
    CellwiseHomeo,
    ConjugatedFamilySpec,
    FamilyReport,
    FisherProduct,
    WindowHitsAccumulation,
    check_family,
    find_witness,
    materialize_chain,
)
from .pl import (
    IntervalUnion,
    NonMonotone,
    PLError,
    PLMap,
    Window,
    compose,
    format_rational,
    identity,
    make_pl,
    support,
)

__all__ = [
    "MarginTooSmall",
    "NotCompactlySupported",
    "UnboundGenerator",
    "NotOrientationPreserving",
    "Word",
    "FisherSystem",
    "DistortionCertificate",
    "GENERATOR_NAMES",
    "build_displacement_pair",
    "build_squeeze",
    "fisher_word",
    "evaluate_word",
    "materialize_word",
    "distort",
    "verify_certificate",
    "embed_ordered",
    "default_windows",
    "CertificateFormatError",
    "certificate_from_dict",
    "load_certificate",
]

GENERATOR_NAMES = ("d", "A1", "S1", "T1", "A2", "S2", "T2", "A3", "S3", "T3")
CELL_MARGIN = Fraction(1, 4)
CORE_MARGIN = Fraction(1)


class MarginTooSmall(ValueError):
    pass


class NotCompactlySupported(ValueError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"k_{n} is not compactly supported")


class UnboundGenerator(KeyError):
    pass


class NotOrientationPreserving(ValueError):
    def __init__(self, index: int, reason: str = ""):
        self.index = index
        super().__init__(f"map {index} is not orientation preserving {reason}".rstrip())


# ---------------------------------------------------------------------------
# words


class Word:
    """Freely reduced word; ``letters`` is a tuple of ``(name, exponent)``."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        out: list = []
        for name, e in letters:
            e = int(e)
            if e == 0:
                continue
            if out and out[-1][0] == name:
                merged = out[-1][1] + e
                out.pop()
                if merged:
                    out.append((name, merged))
            else:
                out.append((name, e))
        self.letters = tuple(out)

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word((n, -e) for n, e in reversed(self.letters))

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        if not self.letters:
            return "Word(1)"
        return "Word(" + " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.letters) + ")"

    def names(self) -> set:
        return {n for n, _ in self.letters}

    def to_list(self) -> list:
        return [[n, e] for n, e in self.letters]

    @classmethod
    def from_list(cls, data) -> "Word":
        if not isinstance(data, list):
            raise ValueError("a word is a list of [name, exponent] pairs")
        letters = []
        for item in data:
            if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], str) or type(item[1]) is not int:
                raise ValueError(f"bad letter {item!r}")
            letters.append((item[0], item[1]))
        return cls(letters)


def fisher_word(n: int, names=("A", "S", "T")) -> Word:
    """``T^-n A T^n S T^-n A^-1 T^n S^-1``, of length ``4n + 4``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    A, S, T = names
    return Word([(T, -n), (A, 1), (T, n), (S, 1), (T, -n), (A, -1), (T, n), (S, -1)])


def _unit_letters(word: Word, gens) -> list:
    """Maps of the word, leftmost first, one entry per unit exponent."""
    out = []
    for name, e in word.letters:
        try:
            g = gens[name]
        except KeyError:
            raise UnboundGenerator(name) from None
        m = g if e > 0 else g.inverse()
        out.extend([m] * abs(e))
    return out


def evaluate_word(w: Word, gens, x) -> Fraction:
    x = Fraction(x)
    for m in reversed(_unit_letters(w, gens)):
        x = m(x)
    return x


def materialize_word(w: Word, gens, window: Window) -> PLMap:
    return materialize_chain(_unit_letters(w, gens), window)


# ---------------------------------------------------------------------------
# movers and the squeeze map


def _component_movers(a, b, delta) -> tuple:
    """Local ``(T, S)`` on ``[a - delta, b + delta]`` displacing ``[a, b]`` to the right.

    ``S`` fixes ``p = b + delta/4`` and is affine with slope 1/2 on ``[b, p]``;
    ``T`` fixes ``q = b + 3 delta/4`` and is affine with slope 1/2 on ``[p, q]``.
    """
    p = b + delta / 4
    q = b + 3 * delta / 4
    S = make_pl([(a - delta / 2, a - delta / 2), (a, b + delta / 16), (b, b + delta / 8), (p, p)], 1, 1)
    T = make_pl([(a - delta, a - delta), (a - delta / 2, b + 3 * delta / 8), (p, b + delta / 2), (q, q)], 1, 1)
    return T, S


def build_displacement_pair(Z: IntervalUnion, margin) -> tuple:
    """Movers ``(T, S)`` for conjugated products over ``Z``.

    ``S`` displaces every component of ``Z`` inside its ``margin``-neighborhood
    and ``T`` displaces ``supp(S)``; both contract by 1/2 toward their fixed
    points.  The margin is clipped to a third of each neighbouring gap so the
    neighbourhoods stay pairwise disjoint.
    """
    margin = Fraction(margin)
    if margin <= 0:
        raise MarginTooSmall(f"margin must be positive, got {margin}")
    if not Z.bounded:
        raise ValueError("Z must be bounded")
    comps = list(Z)
    if any(a == b for a, b in comps):
        raise ValueError("Z must not have degenerate components")
    Ts, Ss = [], []
    for i, (a, b) in enumerate(comps):
        delta = margin
        if i > 0:
            delta = min(delta, (a - comps[i - 1][1]) / 3)
        if i + 1 < len(comps):
            delta = min(delta, (comps[i + 1][0] - b) / 3)
        T, S = _component_movers(a, b, delta)
        Ts.append(T)
        Ss.append(S)
    return _glue(Ts), _glue(Ss)


def _glue(maps) -> PLMap:
    out = identity()
    for m in maps:
        out = compose(m, out)
    return out


def build_squeeze(ks: Sequence[PLMap]) -> tuple:
    """Expanding ``d`` and nested ``K_n = [-r_n, r_n]`` with ``d^-n(supp k_n)`` inside ``K_0``.

    ``d`` is odd, sends ``r_i`` to ``r_{i+1}`` and has slope 2 beyond ``r_N``.
    """
    radii = []
    for n, k in enumerate(ks):
        supp = support(k)
        if not supp.bounded:
            raise NotCompactlySupported(n)
        need = 1
        if supp:
            lo, hi = supp.hull()
            need = max(1, math.ceil(max(abs(lo), abs(hi))))
        if radii:
            need = max(need, radii[-1] + 1)
        radii.append(Fraction(need))
    if not radii:
        radii = [Fraction(1)]
    ext = radii + [2 * radii[-1]]
    pts = [(-r, -ext[i + 1]) for i, r in reversed(list(enumerate(radii)))]
    pts += [(Fraction(0), Fraction(0))]
    pts += [(r, ext[i + 1]) for i, r in enumerate(radii)]
    d = make_pl(pts, 2, 2)
    K = [IntervalUnion([(-r, r)]) for r in radii]
    dinv = d.inverse()
    conj = identity()
    for n, k in enumerate(ks):
        a = compose(conj.inverse(), compose(k, conj)) if n else k
        if not support(a).issubset(K[0]):
            raise AssertionError(f"conjugate of k_{n} escapes K_0")
        conj = compose(d, conj)
    return d, K


def squeezed_terms(d: PLMap, ks: Sequence[PLMap]) -> list:
    """``a_n = d^-n k_n d^n``."""
    out = []
    dn = identity()
    for k in ks:
        out.append(compose(dn.inverse(), compose(k, dn)))
        dn = compose(d, dn)
    return out


# ---------------------------------------------------------------------------
# one encoded sequence: (A, S, T)


@dataclass
class FisherSystem:
    """Generators ``A, S, T`` with ``[T^-n A T^n, S] = a_n`` for every term."""

    label: str
    A: object
    S: object
    T: object
    spec: Optional[ConjugatedFamilySpec] = None
    report: Optional[FamilyReport] = None
    finite: bool = True
    trivial: list = field(default_factory=list)

    @classmethod
    def from_terms(cls, label: str, terms: Sequence[PLMap], Z: IntervalUnion, margin) -> "FisherSystem":
        trivial = [a.is_identity() for a in terms]
        if Z.is_empty():
            return cls(label, identity(), identity(), identity(), None, None, True, trivial)
        T, S = build_displacement_pair(Z, margin)
        spec = ConjugatedFamilySpec(list(terms), T, S, Z)
        report = check_family(spec, depth=4)
        A = FisherProduct.from_spec(spec, report, name=f"A{label}")
        return cls(label, A, S, T, spec, report, True, trivial)

    def to_dict(self) -> dict:
        if self.spec is None:
            if not self.finite:
                return {"kind": "lazy-system"}
            return {"kind": "trivial"}
        return {
            "kind": "family",
            "terms": [a.to_dict() for a in self.spec.terms],
            "S": self.spec.mover_S.to_dict(),
            "T": self.spec.mover_T.to_dict(),
            "Z": self.spec.Z.to_list(),
            "ratio": format_rational(self.report.ratio) if self.report.ratio is not None else None,
        }


class _CellSystems:
    """Per-cell Fisher systems for the blocks of ``X`` or the cells of ``Y``."""

    def __init__(self, fac: FactorizationResult, which: str):
        self.fac = fac
        self.which = which
        self.an = fac.anchors
        self._local: dict = {}
        self._ends: list = []

    def comp(self, m: int, side: int) -> tuple:
        an = self.an
        if self.which == "X":
            a, b = an.x_minus[m], an.x_plus[m]
        else:
            an.extend_to(m + 1)
            a, b = an.z[m] + Fraction(1, 2), an.z[m + 1] - Fraction(1, 2)
        return (-b, -a) if side < 0 else (a, b)

    def local(self, m: int, side: int):
        key = (m, side)
        if key not in self._local:
            cells = self.fac.cells
            N = self.an.N
            terms = [identity()]
            for n in range(1, N + 1):
                if n > m:
                    terms.append(identity())
                elif self.which == "X":
                    terms.append(cells.g_cell(n, m, side))
                else:
                    terms.append(cells.h_cell(n, m, side))
            if all(t.is_identity() for t in terms):
                self._local[key] = None
            else:
                a, b = self.comp(m, side)
                Z = IntervalUnion([(a, b)])
                T, S = build_displacement_pair(Z, CELL_MARGIN)
                witnesses = [find_witness(S, (a, b))]
                A = FisherProduct(terms, S, T, Z, witnesses, name=f"A[{self.which}{m}{'+' if side > 0 else '-'}]")
                self._local[key] = (a - CELL_MARGIN, b + CELL_MARGIN, A, S, T)
        return self._local[key]

    def _right_ends(self, top: int) -> list:
        while len(self._ends) < top:
            self._ends.append(self.comp(len(self._ends) + 1, 1)[1])
        return self._ends

    def cells(self, lo, hi, slot: int) -> list:
        r = max(abs(lo), abs(hi))
        top = self.an.cover(r + 1)
        ends = self._right_ends(top)
        # right components are increasing; the mirror images share the indices
        first = bisect.bisect_left(ends, min(abs(lo), abs(hi)) - CELL_MARGIN if lo * hi > 0 else 0) + 1
        out = []
        for m in range(first, top + 1):
            a0, _ = self.comp(m, 1)
            if a0 - CELL_MARGIN > r:
                break
            for side in (-1, 1):
                a, b = self.comp(m, side)
                if b + CELL_MARGIN < lo or a - CELL_MARGIN > hi:
                    continue
                loc = self.local(m, side)
                if loc is not None:
                    out.append((loc[0], loc[1], loc[slot]))
        return out


def _cell_system(fac: FactorizationResult, which: str, label: str) -> FisherSystem:
    cs = _CellSystems(fac, which)
    A = CellwiseHomeo(lambda lo, hi: cs.cells(lo, hi, 2), f"A{label}")
    S = CellwiseHomeo(lambda lo, hi: cs.cells(lo, hi, 3), f"S{label}")
    T = CellwiseHomeo(lambda lo, hi: cs.cells(lo, hi, 4), f"T{label}")
    seq = fac.g if which == "X" else fac.h
    trivial = [isinstance(m, PLMap) and m.is_identity() for m in seq]
    return FisherSystem(label, A, S, T, None, None, False, trivial)


def _finite_support_union(maps: Sequence[PLMap], comps: list) -> IntervalUnion:
    """Union of the components that meet the support of some map."""
    used = []
    for c in comps:
        cu = IntervalUnion([c])
        if any(not support(m).isdisjoint(cu) for m in maps):
            used.append(c)
    return IntervalUnion(used)


def _finite_system(fac: FactorizationResult, which: str, label: str) -> FisherSystem:
    an = fac.anchors
    top = an.finite_index()
    if which == "X":
        comps = list(an.X_truncated(top))
        maps = fac.g
    else:
        comps = [c for c in an.Y_truncated(top + 1) if c[0] is not None and c[1] is not None]
        maps = fac.h
    Z = _finite_support_union(maps, comps)
    return FisherSystem.from_terms(label, maps, Z, CELL_MARGIN)


# ---------------------------------------------------------------------------
# the certificate


@dataclass
class DistortionCertificate:
    inputs: list
    generators: dict
    words: list
    ledger: list
    factorization: FactorizationResult
    systems: dict
    squeeze: tuple
    verification: Optional[Report] = None

    @property
    def sequence(self) -> list:
        """Normalized sequence: index 0 is the identity, index n is ``inputs[n-1]``."""
        return self.factorization.inputs

    def to_dict(self) -> dict:
        gens = {}
        for name in GENERATOR_NAMES:
            g = self.generators[name]
            if isinstance(g, PLMap):
                gens[name] = {"kind": "pl", "map": g.to_dict()}
            else:
                gens[name] = {"kind": "lazy", "rebuild": "from inputs"}
        d, K = self.squeeze
        return {
            "format": "homeodistort.certificate/1",
            "inputs": [f.to_dict() for f in self.inputs],
            "generators": gens,
            "systems": {k: s.to_dict() for k, s in self.systems.items()},
            "squeeze": {"K": [k.to_list() for k in K]},
            "words": [w.to_list() for w in self.words],
            "ledger": self.ledger,
            "anchors": self.factorization.anchors.to_dict(),
            "observations": [
                "constructed words depend only on n; only the generators depend on the sequence",
                "reduced words omit commutator factors whose target is the identity",
            ],
            "verification": None if self.verification is None else self.verification.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


def _ledger_row(n: int, word: Word) -> dict:
    return {
        "n": n,
        "k": 6 * n + 4,
        "g": 4 * n + 4,
        "h": 4 * n + 4,
        "total": 14 * n + 12,
        "bound": 14 * n + 12,
        "reduced": len(word),
    }


def distort(fs: Sequence[PLMap]) -> DistortionCertificate:
    """Ten generators and words ``W_n`` with ``W_n = f_n`` and ``|W_n| <= 14n + 12``."""
    fac = factorize(fs)
    seq = fac.inputs
    d, K = build_squeeze(fac.k)
    a_k = squeezed_terms(d, fac.k)
    sys_k = FisherSystem.from_terms("1", a_k, K[0], CORE_MARGIN)
    if fac.finite:
        sys_g = _finite_system(fac, "X", "2")
        sys_h = _finite_system(fac, "Y", "3")
    else:
        sys_g = _cell_system(fac, "X", "2")
        sys_h = _cell_system(fac, "Y", "3")
    gens = {"d": d}
    for s in (sys_k, sys_g, sys_h):
        gens["A" + s.label], gens["S" + s.label], gens["T" + s.label] = s.A, s.S, s.T
    words, ledger = [], []
    for n in range(len(seq)):
        parts = []
        if not (isinstance(fac.g[n], PLMap) and fac.g[n].is_identity()):
            parts.append(fisher_word(n, ("A2", "S2", "T2")))
        if not (isinstance(fac.h[n], PLMap) and fac.h[n].is_identity()):
            parts.append(fisher_word(n, ("A3", "S3", "T3")))
        if not fac.k[n].is_identity():
            parts.append(Word([("d", n)]) * fisher_word(n, ("A1", "S1", "T1")) * Word([("d", -n)]))
        w = Word()
        for p in parts:
            w = w * p
        words.append(w)
        ledger.append(_ledger_row(n, w))
    return DistortionCertificate(
        list(fs), gens, words, ledger, fac, {"1": sys_k, "2": sys_g, "3": sys_h}, (d, K)
    )


# ---------------------------------------------------------------------------
# verification


def default_windows() -> list:
    return [Window(-100, -50), Window(-50, 0), Window(0, 50), Window(50, 100)]


def _sample_points(window: Window, count: int, rng: random.Random) -> list:
    pts = {window.lo, window.hi}
    den_max = 997
    while len(pts) < count:
        den = rng.randint(1, den_max)
        num = rng.randint(math.ceil(window.lo * den), math.floor(window.hi * den))
        pts.add(Fraction(num, den))
    return sorted(pts)


def _critical_points(f: PLMap, windows) -> list:
    """Breakpoints of ``f`` and the midpoints between them, inside the windows."""
    xs = list(f.xs)
    pts = xs + [(a + b) / 2 for a, b in zip(xs, xs[1:])]
    if xs:
        pts += [xs[0] - Fraction(1, 3), xs[-1] + Fraction(1, 3)]
    return [x for x in pts if any(w.lo <= x <= w.hi for w in windows)]


def _structural_windows(word: Word, gens, target: PLMap, count: int, lo=-100, hi=100, centers=()) -> list:
    """Small windows on which every letter of ``word`` materializes, with the results.

    Windows around ``centers`` are tried first, then a sweep of ``[lo, hi]``.
    """
    found = []
    width = Fraction(1, 7)
    for x in centers:
        if len(found) >= (count + 1) // 2:
            break
        w = Window(x - width / 2, x + width / 2)
        try:
            found.append((w, materialize_word(word, gens, w)))
        except WindowHitsAccumulation:
            continue
    c = Fraction(lo)
    step = Fraction(hi - lo, 37)
    tried = 0
    while len(found) < count and c < hi and tried < 200:
        tried += 1
        w = Window(c, c + width)
        try:
            m = materialize_word(word, gens, w)
        except WindowHitsAccumulation:
            c += step / 3
            continue
        found.append((w, m))
        c += step
    return found


def verify_certificate(
    cert: DistortionCertificate,
    windows: Optional[Sequence[Window]] = None,
    samples_per_window: int = 250,
    seed: int = 0,
    structural_windows: int = 3,
) -> Report:
    """Replay the certificate: ledger arithmetic, generator count, exact word values."""
    rep = Report("distortion certificate")
    if not cert.inputs:
        return rep
    if windows is None:
        windows = default_windows()
    rng = random.Random(seed)
    rep.add("|S| = 10", len(cert.generators) == 10 and set(cert.generators) == set(GENERATOR_NAMES))
    seq = cert.sequence
    for n, row in enumerate(cert.ledger):
        ok = (
            row["n"] == n
            and row["k"] == 6 * n + 4
            and row["g"] == 4 * n + 4
            and row["h"] == 4 * n + 4
            and row["k"] + row["g"] + row["h"] == row["total"] == 14 * n + 12
        )
        rep.add("ledger 6n+4 + 4n+4 + 4n+4 = 14n+12", ok, n)
        w = cert.words[n]
        rep.add("|W_n| <= 14n+12", len(w) <= 14 * n + 12 and row["reduced"] == len(w), n, detail=f"|W_n|={len(w)}")
    points = []
    for w in windows:
        points.extend(_sample_points(w, samples_per_window, rng))
    points = sorted(set(points))
    for n, f in enumerate(seq):
        word = cert.words[n]
        witness = None
        for x in sorted(set(points) | set(_critical_points(f, windows))):
            try:
                val = evaluate_word(word, cert.generators, x)
            except UnboundGenerator:
                witness = x
                break
            if val != f(x):
                witness = x
                break
        rep.add("W_n(x) = f_n(x) at sampled points", witness is None, n, witness, f"{len(points)} points")
        if structural_windows:
            got = _structural_windows(word, cert.generators, f, structural_windows, centers=f.xs)
            bad = [(w, m) for w, m in got if m.restrict(w) != f.restrict(w)]
            ok = len(got) >= structural_windows and not bad
            wit = None
            if bad:
                w, m = bad[0]
                wit = next((x for x in _sample_points(w, 20, rng) if m(x) != f(x)), w.lo)
            rep.add("W_n = f_n structurally on windows", ok, n, wit, f"{len(got)} windows")
    return rep


# ---------------------------------------------------------------------------
# left orders


def _coerce_orientation(items) -> list:
    out = []
    for i, g in enumerate(items):
        if isinstance(g, PLMap):
            out.append(g)
            continue
        try:
            if isinstance(g, dict):
                out.append(PLMap.from_dict(g))
            else:
                pts, sl, sr = g
                out.append(make_pl(pts, sl, sr))
        except NonMonotone as exc:
            raise NotOrientationPreserving(i, f"({exc})") from exc
        except PLError as exc:
            raise NotOrientationPreserving(i, f"({exc})") from exc
    return out


def embed_ordered(gs) -> dict:
    """Certificate placing ``gs`` in a 10-generated group, plus the orbit order of 0."""
    maps = _coerce_orientation(gs)
    if not maps:
        return {"generators": 0, "orbit": [], "order": [], "certificate": None}
    cert = distort(maps)
    cert.verification = verify_certificate(cert, samples_per_window=50, structural_windows=0)
    orbit = []
    for i, g in enumerate(maps):
        v = g(Fraction(0))
        rel = "<" if v > 0 else (">" if v < 0 else "fixed")
        orbit.append({"index": i, "value": format_rational(v), "relation": rel})
    order = sorted(range(len(maps)), key=lambda i: maps[i](Fraction(0)))
    return {
        "generators": len(cert.generators),
        "orbit": orbit,
        "order": order,
        "certificate": cert,
    }


# ---------------------------------------------------------------------------
# replay


class CertificateFormatError(ValueError):
    pass


def certificate_from_dict(data: dict) -> DistortionCertificate:
    """Rebuild a certificate from its JSON form.

    Lazy generators are rebuilt from the inputs.  Generators stored as explicit
    maps and the words are taken from the file as written, so tampering with
    either shows up as a failed check with a witness point.
    """
    if not isinstance(data, dict) or data.get("format") != "homeodistort.certificate/1":
        raise CertificateFormatError("not a homeodistort certificate")
    try:
        inputs = [PLMap.from_dict(f) for f in data["inputs"]]
        words = [Word.from_list(w) for w in data["words"]]
        ledger = data["ledger"]
        stored = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(str(exc)) from exc
    cert = distort(inputs)
    if len(words) != len(cert.words):
        raise CertificateFormatError(f"expected {len(cert.words)} words, found {len(words)}")
    if not isinstance(stored, dict):
        raise CertificateFormatError("generators must be an object")
    for name, entry in stored.items():
        if name not in cert.generators:
            raise CertificateFormatError(f"unknown generator {name}")
        if isinstance(entry, dict) and entry.get("kind") == "pl":
            try:
                cert.generators[name] = PLMap.from_dict(entry["map"])
            except (KeyError, PLError) as exc:
                raise CertificateFormatError(f"generator {name}: {exc}") from exc
    cert.words = words
    cert.ledger = ledger
    return cert


def load_certificate(text: str) -> DistortionCertificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"invalid JSON: {exc}") from exc
    return certificate_from_dict(data)
