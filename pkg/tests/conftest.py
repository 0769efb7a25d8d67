from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from homeodistort.pl import affine, identity, make_pl

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(lo=-20, hi=20, max_den=12):
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    ).filter(lambda q: lo <= q <= hi)


positive_slopes = st.builds(lambda n, d: Fraction(n, d), st.integers(1, 6), st.integers(1, 6))


@st.composite
def pl_maps(draw, max_points=5):
    xs = sorted(set(draw(st.lists(rationals(-10, 10, 8), max_size=max_points))))
    y = draw(rationals(-10, 10, 4))
    pts = []
    for x in xs:
        pts.append((x, y))
        y += draw(st.builds(lambda n: Fraction(n, 8), st.integers(1, 24)))
    sl, sr = draw(positive_slopes), draw(positive_slopes)
    if not pts:
        return affine(sl, y)
    return make_pl(pts, sl, sr)


@st.composite
def compact_pl_maps(draw, lo=-6, hi=6):
    """Maps that are the identity outside ``[lo, hi]``."""
    xs = sorted(set(draw(st.lists(rationals(lo + 1, hi - 1, 6), min_size=0, max_size=4))))
    if not xs:
        return identity()
    ys = sorted(set(draw(st.lists(rationals(lo + 1, hi - 1, 6), min_size=len(xs), max_size=len(xs)))))
    if len(ys) != len(xs):
        return identity()
    return make_pl([(Fraction(lo), Fraction(lo))] + list(zip(xs, ys)) + [(Fraction(hi), Fraction(hi))])


@pytest.fixture
def bump():
    return make_pl([(0, 0), (Fraction(1, 2), Fraction(3, 4)), (1, 1)])


# acceptance lines, echoed in the terminal summary so they survive output capture
ACCEPTANCE: list = []


@pytest.fixture
def acceptance():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
