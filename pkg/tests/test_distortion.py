import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homeodistort.distortion import (
    GENERATOR_NAMES,
    MarginTooSmall,
    NotCompactlySupported,
    NotOrientationPreserving,
    UnboundGenerator,
    Word,
    build_displacement_pair,
    build_squeeze,
    distort,
    embed_ordered,
    evaluate_word,
    fisher_word,
    load_certificate,
    squeezed_terms,
    verify_certificate,
)
from homeodistort.lazy import WindowHitsAccumulation
from homeodistort.pl import IntervalUnion, Window, affine, compose, identity, make_pl, support

from conftest import compact_pl_maps

F = Fraction
SMALL = [Window(-30, -10), Window(-10, 10), Window(10, 30)]


def bump(a, b):
    a, b = F(a), F(b)
    return make_pl([(a, a), ((a + b) / 2, (3 * a + 5 * b) / 8), (b, b)])


# -- words -----------------------------------------------------------------


def test_word_reduction():
    w = Word([("a", 1), ("b", 2), ("b", -2), ("a", 1)])
    assert w.letters == (("a", 2),)
    assert len(Word([("a", 3), ("b", -2)])) == 5
    assert len(w * w.inverse()) == 0


@given(st.lists(st.tuples(st.sampled_from("abc"), st.integers(-3, 3)), max_size=12))
def test_word_inverse_cancels(letters):
    w = Word(letters)
    assert (w * w.inverse()).letters == ()
    assert Word.from_list(w.to_list()) == w


@pytest.mark.parametrize("n,length", [(0, 4), (1, 8), (3, 16)])
def test_fisher_word_length(n, length):
    assert len(fisher_word(n)) == length == 4 * n + 4


def test_fisher_word_negative():
    with pytest.raises(ValueError):
        fisher_word(-1)


def test_evaluate_word_examples():
    gens = {"a": affine(1, 1), "b": affine(2, 0)}
    # rightmost letter acts first
    assert evaluate_word(Word([("a", 1), ("b", 1)]), gens, 3) == 7
    assert evaluate_word(Word([("b", 1), ("a", 1)]), gens, 3) == 8
    assert evaluate_word(Word(), gens, F(5, 7)) == F(5, 7)
    assert evaluate_word(Word([("b", -2)]), gens, 8) == 2
    with pytest.raises(UnboundGenerator):
        evaluate_word(Word([("c", 1)]), gens, 0)


# -- movers and squeeze ----------------------------------------------------


def test_margin_must_be_positive():
    with pytest.raises(MarginTooSmall):
        build_displacement_pair(IntervalUnion([(0, 1)]), 0)


def test_movers_displace_each_component():
    Z = IntervalUnion([(0, 1), (2, 3)])
    T, S = build_displacement_pair(Z, 1)
    for a, b in Z:
        img = IntervalUnion([(S(a), S(b))])
        assert img.isdisjoint(IntervalUnion([(a, b)]))
        hull = support(S).intersection(IntervalUnion([(a - 1, b + 1)]))
        for lo, hi in hull:
            assert IntervalUnion([(T(lo), T(hi))]).isdisjoint(IntervalUnion([(lo, hi)]))
    # neighbourhoods of the two components stay apart
    comps = list(support(S))
    assert len(comps) == 2


def test_squeeze_example():
    ks = [bump(-1, 1), bump(-2, 2), bump(-4, 4)]
    d, K = build_squeeze(ks)
    assert d == affine(2, 0)
    assert [k.hull() for k in K] == [(-1, 1), (-2, 2), (-4, 4)]
    for a in squeezed_terms(d, ks):
        assert support(a).issubset(K[0])


def test_squeeze_rejects_unbounded():
    with pytest.raises(NotCompactlySupported) as exc:
        build_squeeze([bump(0, 1), affine(1, 1)])
    assert exc.value.n == 1


@settings(max_examples=30)
@given(st.lists(compact_pl_maps(), min_size=1, max_size=5))
def test_squeezed_terms_land_in_K0(ks):
    d, K = build_squeeze(ks)
    for n, a in enumerate(squeezed_terms(d, ks)):
        assert support(a).issubset(K[0])
        dn = identity()
        for _ in range(n):
            dn = compose(d, dn)
        assert compose(dn, compose(a, dn.inverse())) == ks[n]


# -- distort ---------------------------------------------------------------


def test_identity_input_gives_empty_words():
    cert = distort([identity()])
    assert [len(w) for w in cert.words] == [0, 0]
    assert len(cert.generators) == 10
    assert verify_certificate(cert, SMALL, 20).passed


def test_empty_certificate():
    cert = distort([])
    assert cert.words == [Word()]
    assert verify_certificate(cert).passed


def test_compact_suite_verifies():
    fs = [bump(-1, 1), bump(0, 5), identity(), make_pl([(-2, -2), (0, 1), (3, 3)])]
    cert = distort(fs)
    assert set(cert.generators) == set(GENERATOR_NAMES)
    for row in cert.ledger:
        n = row["n"]
        assert (row["k"], row["g"], row["h"]) == (6 * n + 4, 4 * n + 4, 4 * n + 4)
        assert row["reduced"] <= row["bound"] == 14 * n + 12
    rep = verify_certificate(cert, SMALL, 40)
    assert rep.passed, rep.summary()


def test_unbounded_inputs_verify():
    cert = distort([affine(1, 1), affine(2, 0)])
    rep = verify_certificate(cert, SMALL, 25)
    assert rep.passed, rep.summary()


def test_word_values_match_inputs():
    fs = [bump(-3, 2), affine(1, -1)]
    cert = distort(fs)
    rng = random.Random(0)
    for n, f in enumerate(cert.sequence):
        for _ in range(30):
            x = F(rng.randint(-4000, 4000), rng.randint(1, 97))
            assert evaluate_word(cert.words[n], cert.generators, x) == f(x)


def test_deleted_letter_gives_witness():
    cert = distort([bump(-1, 1), bump(2, 6)])
    letters = list(cert.words[2].letters)
    name, e = letters[0]
    letters[0] = (name, e - 1 if e > 0 else e + 1)
    cert.words[2] = Word(letters)
    rep = verify_certificate(cert, SMALL, 40)
    assert not rep.passed
    fail = next(c for c in rep.failures() if c.name.startswith("W_n(x)"))
    assert fail.index == 2
    x = fail.witness
    assert evaluate_word(cert.words[2], cert.generators, x) != cert.sequence[2](x)


def test_distort_is_deterministic():
    fs = [bump(-1, 1), affine(1, 1)]
    assert distort(fs).to_json() == distort(fs).to_json()


def test_certificate_round_trip():
    cert = distort([bump(-1, 1), bump(0, 3)])
    again = load_certificate(cert.to_json())
    assert again.words == cert.words
    assert again.to_json() == cert.to_json()
    assert verify_certificate(again, SMALL, 20).passed


def test_tampered_generator_in_file():
    cert = distort([bump(-1, 1)])
    data = json.loads(cert.to_json())
    data["generators"]["d"]["map"] = affine(3, 0).to_dict()
    rep = verify_certificate(load_certificate(json.dumps(data)), SMALL, 20)
    assert not rep.passed


def test_structural_equality_refuses_accumulation():
    cert = distort([bump(-1, 1), bump(0, 2)])
    A = cert.generators["A1"]
    if hasattr(A, "accumulation_points") and A.accumulation_points():
        p = A.accumulation_points()[0]
        with pytest.raises(WindowHitsAccumulation):
            A.materialize(Window(p - 1, p + 1))


# -- left orders -----------------------------------------------------------


def test_embed_ordered():
    out = embed_ordered([affine(1, 1), affine(1, -2), bump(1, 2)])
    assert out["generators"] == 10
    assert [o["relation"] for o in out["orbit"]] == ["<", ">", "fixed"]
    assert out["order"] == [1, 2, 0]
    assert out["certificate"].verification.passed


def test_embed_rejects_orientation_reversing():
    with pytest.raises(NotOrientationPreserving) as exc:
        embed_ordered([affine(1, 1), ([(0, 1), (1, 0)], 1, 1)])
    assert exc.value.index == 1


def test_embed_empty():
    assert embed_ordered([])["generators"] == 0
