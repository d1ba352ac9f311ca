from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psibound.errors import DomainError
from psibound.rounding import Enclosure, Rounder, to_rational

rationals = st.fractions(
    min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**6
)
nonzero_rationals = rationals.filter(lambda q: abs(q) > Fraction(1, 10**4))


def test_to_rational_exact_conversions():
    assert to_rational("3/5") == Fraction(3, 5)
    assert to_rational("0.6") == Fraction(3, 5)
    assert to_rational(7) == Fraction(7)
    assert to_rational(0.25) == Fraction(1, 4)
    assert to_rational(gmpy2.mpfr("0.5")) == Fraction(1, 2)
    with pytest.raises((ValueError, TypeError)):
        to_rational(float("nan"))


def test_rational_bracket_is_directed():
    r = Rounder(64)
    for q in (Fraction(1, 3), Fraction(-1, 3), Fraction(10**40, 3), Fraction(-7, 11)):
        enc = r.rational(q)
        assert enc.contains(q)
        if q.denominator != 1:
            assert enc.lo < enc.hi  # not binary-representable, strict bracket


def test_enclosure_invariants():
    r = Rounder(64)
    enc = r.rational(Fraction(1, 3))
    assert enc.lo <= enc.midpoint() <= enc.hi
    assert enc.width() >= 0
    with pytest.raises(ValueError):
        Enclosure(gmpy2.mpfr(2), gmpy2.mpfr(1))
    with pytest.raises(ValueError):
        Enclosure(gmpy2.mpfr("nan"), gmpy2.mpfr(1))


def test_zero_has_zero_width():
    z = Rounder(64).zero()
    assert z.width() == 0 and z.contains(0)


@given(a=rationals, b=rationals)
def test_add_sub_mul_containment(a, b):
    r = Rounder(64)
    A, B = r.rational(a), r.rational(b)
    assert r.add(A, B).contains(a + b)
    assert r.sub(A, B).contains(a - b)
    assert r.mul(A, B).contains(a * b)
    assert r.mul_rational(A, b).contains(a * b)
    assert r.add_rational(A, b).contains(a + b)
    assert r.neg(A).contains(-a)


@given(a=rationals, b=nonzero_rationals)
def test_div_containment(a, b):
    r = Rounder(64)
    A, B = r.rational(a), r.rational(b)
    if B.lo <= 0 <= B.hi:
        with pytest.raises(ZeroDivisionError):
            r.div(A, B)
    else:
        assert r.div(A, B).contains(a / b)


def test_mixed_sign_rational_product_regression():
    # a negative razor-thin interval times a positive rational must not invert
    r = Rounder(192)
    a = r.rational(Fraction(-389246882801728731551179838706017, 10**42))
    out = r.mul_rational(a, Fraction(10, 7) ** 8)
    assert out.lo <= out.hi
    assert out.contains(Fraction(-389246882801728731551179838706017, 10**42) * Fraction(10, 7) ** 8)


def test_log_exp_directed():
    r = Rounder(96)
    two = r.rational(Fraction(2))
    lg = r.log(two)
    assert lg.lo < lg.hi
    back = r.exp(lg)
    assert back.contains(Fraction(2))
    with pytest.raises(DomainError):
        r.log_rational(Fraction(0))
    with pytest.raises(DomainError):
        r.log_rational(Fraction(-1))


def test_log_sqrt_two_pi_value():
    # log(sqrt(2 pi)) = 0.91893853320467274178...
    enc = Rounder(128).log_sqrt_two_pi()
    ref = Fraction("0.918938533204672741780329736405")
    assert abs(to_rational(enc.midpoint()) - ref) < Fraction(1, 10**28)
    assert enc.lo < enc.hi


def test_pow_int_containment():
    r = Rounder(64)
    a = r.rational(Fraction(3, 7))
    assert r.pow_int(a, 5).contains(Fraction(3, 7) ** 5)
    with pytest.raises(ValueError):
        r.pow_int(r.rational(Fraction(-1)), 2)


def test_higher_precision_nests_inside_lower():
    q = Fraction(1, 3)
    coarse = Rounder(64).rational(q)
    fine = Rounder(128).rational(q)
    assert coarse.encloses(fine)


def test_euler_constant_bracket():
    enc = Rounder(128).euler_constant()
    ref = Fraction("0.57721566490153286060651209008240243104")
    assert enc.contains(ref) or abs(to_rational(enc.midpoint()) - ref) < Fraction(1, 10**36)
    assert enc.width() < Fraction(1, 10**30)
