from fractions import Fraction

from hypothesis import given, settings, strategies as st

from blochforms.intervals import CIv, RIv, civ, riv, riv_between, set_prec

set_prec(64)

fr = st.fractions(min_value=-1000, max_value=1000)


@given(fr, fr)
def test_add_mul_containment(a, b):
    ia, ib = riv(a), riv(b)
    assert (ia + ib).contains(a + b)
    assert (ia * ib).contains(a * b)
    assert (ia - ib).contains(a - b)


@given(fr, fr)
def test_div_containment(a, b):
    if b == 0:
        return
    assert (riv(a) / riv(b)).contains(Fraction(a) / Fraction(b))


@given(st.fractions(min_value=0, max_value=10**6))
def test_sqrt_containment(a):
    s = riv(a).sqrt()
    assert s.lo() * s.lo() <= a <= s.hi() * s.hi()


@given(fr, fr, fr, fr)
def test_complex_mul(a, b, c, d):
    z = CIv(riv(a), riv(b)) * CIv(riv(c), riv(d))
    assert z.re.contains(Fraction(a) * c - Fraction(b) * d)
    assert z.im.contains(Fraction(a) * d + Fraction(b) * c)


def test_between_and_intersect():
    x = riv_between(Fraction(1, 3), Fraction(2, 3))
    y = riv_between(Fraction(1, 2), Fraction(3, 4))
    z = x.intersect(y)
    assert z.contains(Fraction(21, 40))
    assert x.overlaps(y)
    assert x.hull(y).contains_interval(x)


def test_signs():
    assert riv_between(1, 2).is_positive()
    assert riv_between(-2, -1).is_negative()
    assert not riv_between(-1, 1).is_positive()
