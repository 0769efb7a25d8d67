import random
from fractions import Fraction

import pytest

from homeodistort.distortion import build_displacement_pair, fisher_word, evaluate_word, materialize_word
from homeodistort.lazy import (
    CellwiseHomeo,
    ConjugatedFamilySpec,
    DisjointnessViolation,
    NoDecayWitness,
    WindowHitsAccumulation,
    build_A,
    check_family,
    find_witness,
    point_eval,
    power,
)
from homeodistort.pl import IntervalUnion, Window, compose, identity, make_pl

F = Fraction
Z = IntervalUnion([(0, 1)])


def bump_on(a, b, lift=F(1, 4)):
    a, b = F(a), F(b)
    m = (a + b) / 2
    return make_pl([(a, a), (m, m + (b - a) * lift), (b, b)])


def terms3():
    return [bump_on(0, 1), bump_on(F(1, 4), F(3, 4), F(1, 8)), make_pl([(0, 0), (F(1, 4), F(1, 2)), (1, 1)])]


@pytest.fixture
def family():
    T, S = build_displacement_pair(Z, 1)
    spec = ConjugatedFamilySpec(terms3(), T, S, Z)
    return spec, build_A(spec)


def direct_conjugate(spec, n, m):
    """``(T^n S^m) a_n (T^n S^m)^-1`` as one finite map."""
    c = compose(power(spec.mover_T, n), power(spec.mover_S, m))
    return compose(c, compose(spec.terms[n], c.inverse())), c


def sample(lo, hi, k, rng):
    lo, hi = F(lo), F(hi)
    return [lo + (hi - lo) * F(rng.randint(0, 1000), 1000) for _ in range(k)]


def test_check_family_passes_to_depth_20(family):
    spec, _ = family
    rep = check_family(spec, depth=20)
    assert rep.ok
    assert rep.ratio == F(1, 2)
    assert rep.pairs_checked == 2 * (21 * 20 // 2)


def test_identity_mover_violates():
    T, _ = build_displacement_pair(Z, 1)
    spec = ConjugatedFamilySpec([bump_on(0, 1)], T, identity(), Z)
    with pytest.raises(DisjointnessViolation) as exc:
        check_family(spec, depth=3)
    assert (exc.value.i, exc.value.j) == (0, 1)


def test_empty_terms_ok():
    T, S = build_displacement_pair(Z, 1)
    assert check_family(ConjugatedFamilySpec([], T, S, Z), depth=5).ok


def test_term_outside_Z_rejected():
    T, S = build_displacement_pair(Z, 1)
    with pytest.raises(ValueError):
        check_family(ConjugatedFamilySpec([bump_on(0, 2)], T, S, Z), depth=2)


def test_witness_requires_contraction():
    with pytest.raises(NoDecayWitness):
        find_witness(make_pl([(0, 0)], 1, 2), (1, 2))  # escapes to infinity
    with pytest.raises(NoDecayWitness):
        find_witness(identity(), (0, 1))


def test_all_identity_terms_give_identity():
    T, S = build_displacement_pair(Z, 1)
    A = build_A(ConjugatedFamilySpec([identity(), identity()], T, S, Z))
    assert A.is_identity()
    assert A(F(1, 3)) == F(1, 3)
    assert A.materialize(Window(-5, 5)) == identity()


def test_A_on_Z_is_a0(family):
    spec, A = family
    for x in sample(0, 1, 50, random.Random(1)):
        assert A(x) == spec.terms[0](x)
    assert A.materialize(Window(F(1, 10), F(9, 10))).restrict(Window(F(1, 10), F(9, 10))) == spec.terms[0].restrict(
        Window(F(1, 10), F(9, 10))
    )


@pytest.mark.parametrize("n,m", [(0, 1), (0, 5), (1, 0), (2, 1), (1, 10), (2, 7)])
def test_A_matches_single_conjugate(family, n, m):
    spec, A = family
    conj, c = direct_conjugate(spec, n, m)
    lo, hi = c(0), c(1)
    for x in sample(lo, hi, 40, random.Random(n * 100 + m)):
        assert point_eval(A, x) == conj(x)


def test_A_is_identity_off_supports(family):
    spec, A = family
    for x in [F(-3), F(-1, 2), F(50), F(7, 1)]:
        assert A(x) == x
    # fixed points of the movers are accumulation points
    for p in A.accumulation_points():
        assert A(p) == p


def test_A_inverse(family):
    _, A = family
    Ainv = A.inverse()
    for x in sample(-1, 3, 100, random.Random(2)):
        assert Ainv(A(x)) == x


def test_point_eval_monotone(family):
    _, A = family
    xs = sorted(set(sample(-1, 3, 300, random.Random(3))))
    ys = [A(x) for x in xs]
    assert ys == sorted(ys) and len(set(ys)) == len(ys)


def test_materialize_refuses_accumulation(family):
    _, A = family
    p = A.accumulation_points()[0]
    with pytest.raises(WindowHitsAccumulation):
        A.materialize(Window(p - 1, p + 1))


def test_materialize_agrees_with_point_eval(family):
    _, A = family
    pts = A.accumulation_points()
    w = Window(-1, min(pts) - F(1, 100))
    M = A.materialize(w)
    for x in sample(w.lo, w.hi, 100, random.Random(4)):
        assert M(x) == A(x)


def test_materialize_coherent_on_nested_windows(family):
    _, A = family
    top = min(A.accumulation_points()) - F(1, 50)
    big, small = Window(-1, top), Window(F(1, 2), top - F(1, 10))
    Mb, Ms = A.materialize(big), A.materialize(small)
    for x in sample(small.lo, small.hi, 60, random.Random(5)):
        assert Mb(x) == Ms(x)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_commutator_identity(family, n):
    spec, A = family
    gens = {"A": A, "S": spec.mover_S, "T": spec.mover_T}
    w = fisher_word(n)
    for x in sample(-2, 4, 200, random.Random(10 + n)):
        assert evaluate_word(w, gens, x) == spec.terms[n](x)


def test_commutator_identity_structural(family):
    spec, A = family
    gens = {"A": A, "S": spec.mover_S, "T": spec.mover_T}
    for n in range(3):
        done = 0
        for k in range(-20, 30):
            w = Window(F(k, 10), F(k, 10) + F(1, 20))
            try:
                M = materialize_word(fisher_word(n), gens, w)
            except WindowHitsAccumulation:
                continue
            assert M.restrict(w) == spec.terms[n].restrict(w)
            done += 1
        assert done >= 3


def test_cellwise_homeo():
    cells = [(F(0), F(1), bump_on(0, 1)), (F(5), F(6), bump_on(5, 6))]
    h = CellwiseHomeo(lambda lo, hi: [c for c in cells if c[1] >= lo and c[0] <= hi], "h", (F(-1), F(7)))
    assert h(F(1, 2)) == F(3, 4)
    assert h(F(11, 2)) == F(23, 4)
    assert h(3) == 3
    assert h.inverse()(h(F(5, 3))) == F(5, 3)
    assert h.as_plmap() == compose(bump_on(0, 1), bump_on(5, 6))
