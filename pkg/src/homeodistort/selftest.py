"""Quick end-to-end battery used by ``homeodistort selftest``."""

from __future__ import annotations

import random
from fractions import Fraction

from . import counterexamples as cx
from .distortion import distort, load_certificate, verify_certificate
from .factorization import factorize, verify_factorization
from .io import parse_sequence, serialize_sequence
from .orbits import build_orbit_system, verify_orbit_system
from .pl import PLMap, Window, compose, identity, invert, make_pl


def random_pl(rng: random.Random, k: int = 4, span: int = 10) -> PLMap:
    """Random canonical PL map with up to ``k`` breakpoints in ``[-span, span]``."""
    xs = sorted({Fraction(rng.randint(-span * 8, span * 8), 8) for _ in range(rng.randint(0, k))})
    y = Fraction(rng.randint(-span * 4, span * 4), 4)
    pts = []
    for x in xs:
        pts.append((x, y))
        y += Fraction(rng.randint(1, 16), 8)
    sl = Fraction(rng.randint(1, 8), rng.randint(1, 8))
    sr = Fraction(rng.randint(1, 8), rng.randint(1, 8))
    if not pts:
        return make_pl([(Fraction(0), y)], sl, sl)
    return make_pl(pts, sl, sr)


def run_selftest(seed: int = 0, samples: int = 40) -> tuple:
    rng = random.Random(seed)
    lines = []
    ok = True

    def record(name, passed):
        nonlocal ok
        ok = ok and passed
        lines.append(f"{'PASS' if passed else 'FAIL'}\t{name}")

    maps = [random_pl(rng) for _ in range(30)]
    assoc = all(
        compose(compose(f, g), h) == compose(f, compose(g, h))
        for f, g, h in (rng.sample(maps, 3) for _ in range(50))
    )
    record("associativity on 50 random triples", assoc)
    record("f o f^-1 = id on 30 random maps", all(compose(f, invert(f)) == identity() for f in maps))
    record("sequence round trip", serialize_sequence(parse_sequence(serialize_sequence(maps))) == serialize_sequence(maps))

    fs = [
        make_pl([(0, 0), (Fraction(1, 2), Fraction(3, 4)), (1, 1)]),
        make_pl([(0, 1)]),
        identity(),
        make_pl([(-2, -2), (-1, 0), (1, 1)]),
    ]
    res = factorize(fs)
    record("factorization f_n = g_n h_n k_n", verify_factorization(res).passed)
    cert = distort(fs)
    rep = verify_certificate(cert, samples_per_window=samples, seed=seed)
    record("certificate words evaluate to f_n", rep.passed)
    record("certificate has 10 generators", len(cert.generators) == 10)
    record("certificate is deterministic", distort(fs).to_json() == cert.to_json())
    replay = verify_certificate(load_certificate(cert.to_json()), samples_per_window=samples, seed=seed)
    record("certificate replay", replay.passed)

    system = build_orbit_system(3, 64)
    orep = verify_orbit_system(system, Window(0, 1000), 10)
    record("orbit system K=3 disjoint to depth 10", orep["passed"])

    G = cx.symmetric_group_3()
    S = [tuple(rng.randrange(6) for _ in range(40)) for _ in range(2)]
    record("pigeonhole class in S3^40", max(len(c) for c in cx.agreement_partition(S)) >= 2)
    return lines, ok
