"""Directed-rounding scalar substrate and certified enclosures.

Built on gmpy2/MPFR.  Every primitive used here (add, sub, mul, div, log,
exp, integer powers, the constants pi and the Euler constant) is correctly
rounded, so evaluating once under a round-down context and once under a
round-up context brackets the exact result.  That pair of evaluations is
the only source of rigor in the package: everything downstream composes
these brackets with interval arithmetic, which is inclusion-isotone.

``Scalar`` is an alias for ``gmpy2.mpfr``: an arbitrary-precision binary
float that carries its own precision tag.  Exact rational data enters the
floating-point world only through :meth:`Rounder.rational`, which returns
a two-sided bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import DomainError

Scalar = mpfr
NumberLike = Union[int, float, str, Fraction, mpq, mpfr]

DEFAULT_PRECISION = 128

_WIDTH_PREC = 64


def to_rational(value: NumberLike) -> Fraction:
    """Convert exactly to a Fraction; no rounding is ever introduced.

    mpfr values are dyadic rationals, floats likewise; strings accept both
    "p/q" and decimal forms ("0.6" becomes exactly 3/5).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a number here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, mpq):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, mpfr):
        if not gmpy2.is_finite(value):
            raise ValueError(f"cannot convert non-finite value {value!r}")
        q = mpq(value)
        return Fraction(int(q.numerator), int(q.denominator))
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"cannot convert non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


@dataclass(frozen=True)
class Enclosure:
    """A closed interval [lo, hi] certified to contain a real value.

    ``width()`` (hi - lo, rounded up) is the guaranteed error bound for
    either endpoint taken as an approximation.
    """

    lo: mpfr
    hi: mpfr

    def __post_init__(self):
        if gmpy2.is_nan(self.lo) or gmpy2.is_nan(self.hi):
            raise ValueError("NaN endpoint in enclosure")
        if self.lo > self.hi:
            raise ValueError(f"inverted enclosure [{self.lo}, {self.hi}]")

    def width(self) -> mpfr:
        prec = max(self.lo.precision, self.hi.precision, _WIDTH_PREC)
        ctx = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
        return ctx.sub(self.hi, self.lo)

    def midpoint(self) -> mpfr:
        prec = max(self.lo.precision, self.hi.precision)
        ctx = gmpy2.context(precision=prec, round=gmpy2.RoundToNearest)
        return ctx.div(ctx.add(self.lo, self.hi), 2)

    def contains(self, value: NumberLike) -> bool:
        q = mpq(to_rational(value).numerator, to_rational(value).denominator)
        return self.lo <= q <= self.hi

    def encloses(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __contains__(self, value) -> bool:
        return self.contains(value)

    def __repr__(self):
        return f"Enclosure({self.lo!r}, {self.hi!r})"

    def __str__(self):
        return f"[{self.lo} .. {self.hi}]"


class Rounder:
    """Interval operations at a fixed working precision.

    Wraps a round-down and a round-up MPFR context.  All methods take and
    return :class:`Enclosure` values unless stated otherwise, and every
    result interval contains the exact image of the inputs.
    """

    __slots__ = ("precision", "down", "up")

    def __init__(self, precision: int = DEFAULT_PRECISION):
        if precision < 8:
            raise ValueError("precision must be at least 8 bits")
        self.precision = int(precision)
        self.down = gmpy2.context(precision=self.precision, round=gmpy2.RoundDown)
        self.up = gmpy2.context(precision=self.precision, round=gmpy2.RoundUp)

    # --- conversions ---------------------------------------------------

    def scalar_down(self, q: Fraction) -> mpfr:
        return self.down.add(mpq(q.numerator, q.denominator), mpfr(0))

    def scalar_up(self, q: Fraction) -> mpfr:
        return self.up.add(mpq(q.numerator, q.denominator), mpfr(0))

    def rational(self, q: Fraction) -> Enclosure:
        return Enclosure(self.scalar_down(q), self.scalar_up(q))

    def zero(self) -> Enclosure:
        z = mpfr(0)
        return Enclosure(z, z)

    # --- arithmetic -----------------------------------------------------

    def add(self, a: Enclosure, b: Enclosure) -> Enclosure:
        return Enclosure(self.down.add(a.lo, b.lo), self.up.add(a.hi, b.hi))

    def sub(self, a: Enclosure, b: Enclosure) -> Enclosure:
        return Enclosure(self.down.sub(a.lo, b.hi), self.up.sub(a.hi, b.lo))

    def neg(self, a: Enclosure) -> Enclosure:
        return Enclosure(-a.hi, -a.lo)

    def mul(self, a: Enclosure, b: Enclosure) -> Enclosure:
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        lo = min(self.down.mul(p, q) for p, q in pairs)
        hi = max(self.up.mul(p, q) for p, q in pairs)
        return Enclosure(lo, hi)

    def div(self, a: Enclosure, b: Enclosure) -> Enclosure:
        if b.lo <= 0 <= b.hi:
            raise ZeroDivisionError("division by interval containing zero")
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        lo = min(self.down.div(p, q) for p, q in pairs)
        hi = max(self.up.div(p, q) for p, q in pairs)
        return Enclosure(lo, hi)

    def mul_rational(self, a: Enclosure, q: Fraction) -> Enclosure:
        # Mixed mpq*mpfr context ops convert the rational under the context
        # rounding before multiplying, which flips the bound direction when
        # the other operand is negative.  Convert to a bracket first and use
        # the pure-mpfr interval product.
        return self.mul(a, self.rational(q))

    def add_rational(self, a: Enclosure, q: Fraction) -> Enclosure:
        c = mpq(q.numerator, q.denominator)
        return Enclosure(self.down.add(a.lo, c), self.up.add(a.hi, c))

    def sum(self, terms) -> Enclosure:
        acc = self.zero()
        for t in terms:
            acc = self.add(acc, t)
        return acc

    # --- transcendental -------------------------------------------------

    def log(self, a: Enclosure) -> Enclosure:
        if a.lo <= 0:
            raise DomainError("log of interval touching (-inf, 0]")
        return Enclosure(self.down.log(a.lo), self.up.log(a.hi))

    def log_rational(self, q: Fraction) -> Enclosure:
        if q <= 0:
            raise DomainError("log of non-positive rational")
        return self.log(self.rational(q))

    def exp(self, a: Enclosure) -> Enclosure:
        return Enclosure(self.down.exp(a.lo), self.up.exp(a.hi))

    def pow_int(self, a: Enclosure, k: int) -> Enclosure:
        """a**k for a >= 0 and integer k >= 1 (monotone case only)."""
        if k < 1:
            raise ValueError("pow_int needs k >= 1")
        if a.lo < 0:
            raise ValueError("pow_int needs a non-negative interval")
        return Enclosure(self.down.pow(a.lo, k), self.up.pow(a.hi, k))

    def euler_constant(self) -> Enclosure:
        return Enclosure(self.down.const_euler(), self.up.const_euler())

    def log_sqrt_two_pi(self) -> Enclosure:
        """Enclosure of log(sqrt(2*pi)) = log(2*pi) / 2."""
        two_pi = Enclosure(self.down.mul(self.down.const_pi(), 2),
                           self.up.mul(self.up.const_pi(), 2))
        lg = self.log(two_pi)
        return Enclosure(self.down.div(lg.lo, 2), self.up.div(lg.hi, 2))
