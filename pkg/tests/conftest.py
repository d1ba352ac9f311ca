from fractions import Fraction

import gmpy2
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def euler_interval():
    """Certified bracket of the Euler-Mascheroni constant at 320 bits."""
    down = gmpy2.context(precision=320, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=320, round=gmpy2.RoundUp)
    return down.const_euler(), up.const_euler()


@pytest.fixture(scope="session")
def pi_squared_over_six_interval():
    """Certified bracket of pi^2 / 6 at 320 bits."""
    down = gmpy2.context(precision=320, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=320, round=gmpy2.RoundUp)
    lo = down.div(down.mul(down.const_pi(), down.const_pi()), 6)
    hi = up.div(up.mul(up.const_pi(), up.const_pi()), 6)
    return lo, hi


def fraction_of(mpfr_value) -> Fraction:
    q = gmpy2.mpq(mpfr_value)
    return Fraction(int(q.numerator), int(q.denominator))
