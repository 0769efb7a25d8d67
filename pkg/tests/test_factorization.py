import math
import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from homeodistort.factorization import (
    FactorizationResult,
    build_anchors,
    factorize,
    normalize_sequence,
    verify_factorization,
)
from homeodistort.pl import IntervalUnion, PLMap, Window, affine, compose, identity, make_pl, support

from conftest import compact_pl_maps, pl_maps

F = Fraction
HALF = F(1, 2)


def oracle_anchors(fs, count):
    """Independent recomputation of the anchor recursion from its definition.

    z_n is one more than the ceiling of the largest point that the inverse of any
    f_j (j <= n) sends to +-x_j^- or +-x_n^-; x_n^+ is one more than the ceiling of
    the farthest image of +-(z_n + 1/2).
    """
    fs = list(fs) + [identity()] * max(0, count + 1 - len(fs))
    xm, xp, z = [F(1)], [F(3)], [None]
    for n in range(1, count + 1):
        lo = xp[n - 1] + 1
        xm.append(lo)
        pts = [lo]
        for j in range(min(n, len(fs) - 1) + 1):
            inv = fs[j].inverse()
            for t in (xm[j], lo):
                pts += [inv(t), -inv(-t)]
        z.append(F(math.ceil(max(pts)) + 1))
        far = max(max(fs[j](z[n] + HALF), -fs[j](-z[n] - HALF)) for j in range(min(n, len(fs) - 1) + 1))
        xp.append(F(math.ceil(far) + 1))
    return z, xm, xp


def bump(a, b):
    a, b = F(a), F(b)
    return make_pl([(a, a), ((a + b) / 2, (3 * a + 5 * b) / 8), (b, b)])


# -- anchors ---------------------------------------------------------------


def test_base_block():
    an = build_anchors(normalize_sequence([]))
    assert (an.x_minus[0], an.x_plus[0]) == (1, 3)
    assert an.X_block(0) == IntervalUnion([(-3, -1), (1, 3)])


def test_first_anchor_for_small_bump():
    # f_1 supported in [-1, 1]: x_1^- = 4, z_1 = 5, x_1^+ = 7
    an = build_anchors(normalize_sequence([bump(-1, 1)]))
    assert (an.x_minus[1], an.z[1], an.x_plus[1]) == (4, 5, 7)


def test_translation_pushes_anchors():
    an = build_anchors(normalize_sequence([affine(1, 10)]))
    # f^-1(4) = -6, -f^-1(-4) = 14: z_1 = 15, images of +-15.5 reach 25.5
    assert an.z[1] == 15
    assert an.x_plus[1] == 27


@settings(max_examples=40)
@given(st.lists(pl_maps(), min_size=1, max_size=4))
def test_anchors_match_oracle(fs):
    seq = normalize_sequence(fs)
    an = build_anchors(seq)
    count = len(seq) + 2
    an.extend_to(count)
    z, xm, xp = oracle_anchors(seq, count)
    assert an.z[1 : count + 1] == z[1:]
    assert an.x_minus[: count + 1] == xm
    assert an.x_plus[: count + 1] == xp


@settings(max_examples=40)
@given(st.lists(pl_maps(), min_size=1, max_size=4))
def test_anchor_requirements(fs):
    seq = normalize_sequence(fs)
    an = build_anchors(seq)
    for n in range(1, an.N + 1):
        assert an.z[n] > an.x_minus[n] > an.x_plus[n - 1]
        assert an.x_minus[n] == an.x_plus[n - 1] + 1
        for f in seq[: n + 1]:
            for end in (an.z[n] - HALF, an.z[n] + HALF):
                assert f(end) > an.x_minus[n] and f(-end) < -an.x_minus[n]
                assert abs(f(end)) <= an.x_plus[n] and abs(f(-end)) <= an.x_plus[n]


def test_prefix_stability():
    fs = [bump(-1, 1), affine(2, 0), bump(3, 9)]
    short = build_anchors(normalize_sequence(fs[:2]))
    long = build_anchors(normalize_sequence(fs))
    short.extend_to(3)
    assert short.x_plus[:2] == long.x_plus[:2]
    assert short.z[:2] == long.z[:2]


# -- factors ---------------------------------------------------------------


def test_identity_entries_give_identity_factors():
    res = factorize([identity(), identity()])
    for n in range(3):
        assert res.g[n] == res.h[n] == res.k[n] == identity()
    assert verify_factorization(res).passed


def test_small_bump_is_its_own_k():
    f = bump(-1, 1)
    res = factorize([f])
    assert res.finite
    assert compose(res.g[1], compose(res.h[1], res.k[1])) == f
    assert support(res.k[1]).issubset(IntervalUnion([(-5, 5)]))
    assert verify_factorization(res).passed


def test_translation_has_nontrivial_h():
    res = factorize([affine(1, 1)])
    assert not res.finite
    w = Window(-40, 40)
    h = res.h[1].materialize(w).restrict(w)
    assert not h.is_identity()
    rep = verify_factorization(res, [Window(-40, 40), Window(100, 130)])
    assert rep.passed, rep.summary()


@settings(max_examples=25)
@given(st.lists(compact_pl_maps(), min_size=1, max_size=4))
def test_compact_inputs_factor_exactly(fs):
    res = factorize(fs)
    assert res.finite
    for n, f in enumerate(res.inputs):
        g, h, k = res.g[n], res.h[n], res.k[n]
        assert compose(g, compose(h, k)) == f
        assert all(isinstance(m, PLMap) for m in (g, h, k))
    assert verify_factorization(res).passed


def test_random_six_map_suite():
    rng = random.Random(6)
    fs = []
    for _ in range(6):
        a = F(rng.randint(-20, 10))
        b = a + rng.randint(1, 8)
        c = a + (b - a) * F(rng.randint(1, 9), 10)
        fs.append(make_pl([(a, a), (c, c + (b - c) * F(rng.randint(1, 9), 10)), (b, b)]))
    res = factorize(fs)
    rep = verify_factorization(res)
    assert rep.passed, rep.summary()
    assert len(rep.checks) > 6 * 4


def test_tampered_k_detected():
    res = factorize([bump(-1, 1), bump(2, 5)])
    k = list(res.k)
    k[1] = affine(1, 1)
    bad = FactorizationResult(res.anchors, res.g, res.h, k, res.inputs, res.finite)
    rep = verify_factorization(bad)
    assert not rep.passed
    fails = [c for c in rep.failures() if c.name.startswith("f_n = g_n h_n k_n")]
    assert fails and fails[0].index == 1
    w = fails[0].witness
    prod = compose(bad.g[1], compose(bad.h[1], bad.k[1]))
    assert prod(w) != bad.inputs[1](w)


def test_empty_input_passes():
    res = factorize([])
    rep = verify_factorization(res)
    assert rep.passed
