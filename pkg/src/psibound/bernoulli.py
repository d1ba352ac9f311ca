"""Exact Bernoulli numbers, Bernoulli polynomials, and the validity classifier.

All values here are exact ``Fraction`` arithmetic; nothing is ever rounded.
The classifier :func:`validity` decides, for a truncation order N and a
rational shift ``lam`` in [0, 1/2], whether the truncated series is a
certified lower bound, upper bound, or neither.  The frontier is the unique
root of an even-index Bernoulli polynomial on [0, 1/2]; we never materialize
that root as a float.  Comparisons against it go through exact sign
evaluation of the polynomial, so the classification is certificate-grade.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, List, Tuple

from .errors import DomainError

__all__ = [
    "BoundDirection",
    "BernoulliPolynomial",
    "RootBracket",
    "bernoulli_number",
    "bernoulli_poly",
    "eval_poly",
    "lambda0",
    "validity",
    "max_abs_on_unit_interval",
    "load_cache",
    "dump_cache",
]

DEFAULT_ROOT_TOL = Fraction(1, 2**64)


class BoundDirection(Enum):
    LOWER = "lower"
    UPPER = "upper"
    INVALID = "invalid"


@dataclass(frozen=True)
class BernoulliPolynomial:
    """Coefficients of B_n, ascending powers, all exact."""

    degree: int
    coefficients: Tuple[Fraction, ...]

    def __call__(self, lam: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * lam + c
        return acc

    def derivative(self) -> "BernoulliPolynomial":
        cs = tuple(k * c for k, c in enumerate(self.coefficients) if k > 0)
        return BernoulliPolynomial(max(self.degree - 1, 0), cs or (Fraction(0),))

    def integral_over_unit_interval(self) -> Fraction:
        return sum(c / (k + 1) for k, c in enumerate(self.coefficients))


@dataclass(frozen=True)
class RootBracket:
    """Certified bracket: the polynomial changes sign exactly once between lo and hi."""

    lo: Fraction
    hi: Fraction

    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi


# Memo caches.  Readers take the current tuple without locking (assignment is
# atomic); writers extend under the lock and swap in a fresh tuple.
_lock = threading.Lock()
_numbers: Tuple[Fraction, ...] = (Fraction(1), Fraction(-1, 2))
_polys: Tuple[BernoulliPolynomial, ...] = ()


def _numbers_upto(n: int) -> Tuple[Fraction, ...]:
    global _numbers
    cached = _numbers
    if len(cached) > n:
        return cached
    with _lock:
        cached = _numbers
        if len(cached) > n:
            return cached
        work: List[Fraction] = list(cached)
        for k in range(len(work), n + 1):
            if k % 2 == 1:
                work.append(Fraction(0))
                continue
            # sum_{j=0}^{k-1} C(k+1, j) B_j = -C(k+1, k) B_k
            s = Fraction(1) + Fraction(k + 1) * Fraction(-1, 2)
            for j in range(2, k, 2):
                s += comb(k + 1, j) * work[j]
            work.append(-s / (k + 1))
        _numbers = tuple(work)
        return _numbers


def bernoulli_number(n: int) -> Fraction:
    """Exact B_n.  B_1 = -1/2 under the recurrence sum C(n+1,k) B_k = 0."""
    if n < 0:
        raise DomainError("Bernoulli index must be non-negative")
    return _numbers_upto(n)[n]


def bernoulli_poly(n: int) -> BernoulliPolynomial:
    """Exact coefficient vector of B_n, built from B_n(x) = sum C(n,k) B_k x^(n-k)."""
    global _polys
    if n < 0:
        raise DomainError("Bernoulli index must be non-negative")
    cached = _polys
    if len(cached) > n:
        return cached[n]
    numbers = _numbers_upto(n)
    with _lock:
        cached = _polys
        if len(cached) > n:
            return cached[n]
        work = list(cached)
        for m in range(len(work), n + 1):
            coeffs = tuple(comb(m, k) * numbers[k] for k in range(m, -1, -1))
            work.append(BernoulliPolynomial(m, coeffs))
        _polys = tuple(work)
        return _polys[n]


def eval_poly(n: int, lam: Fraction) -> Fraction:
    """Exact B_n(lam) for rational lam.

    The high-traffic abscissas 0, 1/2, 1 short-circuit through closed forms
    (B_n(1/2) = -(1 - 2^(1-n)) B_n and the reflection B_n(1) = (-1)^n B_n);
    tests verify these against honest polynomial evaluation.
    """
    lam = Fraction(lam)
    if lam == 0:
        return bernoulli_number(n)
    if lam == Fraction(1, 2):
        return -(1 - Fraction(2) ** (1 - n)) * bernoulli_number(n)
    if lam == 1:
        return Fraction((-1) ** n) * bernoulli_number(n)
    return bernoulli_poly(n)(lam)


def max_abs_on_unit_interval(n: int) -> Fraction:
    """Crude but safe bound: max |B_n| on [0,1] <= sum of |coefficients|."""
    return sum(abs(c) for c in bernoulli_poly(n).coefficients)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def lambda0(m: int, tol: Fraction = DEFAULT_ROOT_TOL) -> RootBracket:
    """Certified bracket of width <= tol for the unique root of B_m on [0, 1/2].

    m must be even and >= 2.  Bisection runs on exact rational sign
    evaluations, so the returned bracket is a certificate: the polynomial
    has opposite signs at the two endpoints.
    """
    if m < 2 or m % 2 != 0:
        raise DomainError(f"root isolation needs an even index >= 2, got {m}")
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    poly = bernoulli_poly(m)
    lo, hi = Fraction(0), Fraction(1, 2)
    sign_lo = _sign(poly(lo))
    sign_hi = _sign(poly(hi))
    # B_m(1/2) = -(1 - 2^(1-m)) B_m guarantees the sign change for even m.
    if sign_lo == 0 or sign_hi == 0 or sign_lo == sign_hi:
        raise DomainError(f"no sign change for B_{m} on [0, 1/2]")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = _sign(poly(mid))
        if s == 0:
            # Rational midpoint landed on the root; shrink a hair on both sides.
            quarter = (hi - lo) / 4
            lo, hi = mid - quarter, mid + quarter
            if _sign(poly(lo)) == _sign(poly(hi)):
                raise DomainError(f"degenerate bracket for B_{m}")
            break
        if s == sign_lo:
            lo = mid
        else:
            hi = mid
    return RootBracket(lo, hi)


def _at_most_root(m: int, lam: Fraction) -> bool:
    """Exact test for lam <= (root of B_m in [0, 1/2]), m even.

    B_m is monotone on [0, 1/2] with B_m(0) = B_m, so lam lies at or left of
    the root iff B_m(lam) has the sign of B_m (or vanishes).
    """
    v = eval_poly(m, lam)
    return v == 0 or _sign(v) == _sign(bernoulli_number(m))


def _at_least_root(m: int, lam: Fraction) -> bool:
    """Exact test for lam >= (root of B_m in [0, 1/2]), m even."""
    v = eval_poly(m, lam)
    return v == 0 or _sign(v) == -_sign(bernoulli_number(m))


def validity(n: int, lam: Fraction) -> BoundDirection:
    """Classify the truncation (n, lam): certified lower bound, upper bound, or invalid.

    For odd n the frontier is the root of B_{n+1} and lam must sit at or
    right of it; for even n the frontier is the root of B_n and lam must sit
    at or left of it.  Direction then follows n mod 4: residues 1 and 2 give
    lower bounds for psi, residues 3 and 0 give upper bounds.
    """
    if n < 1:
        raise DomainError("truncation order must be >= 1")
    lam = Fraction(lam)
    if not (0 <= lam <= Fraction(1, 2)):
        raise DomainError(
            f"lambda = {lam} outside [0, 1/2]; the (1/2, 1] branch is not supported"
        )
    if n % 2 == 1:
        ok = _at_least_root(n + 1, lam)
        if not ok:
            return BoundDirection.INVALID
        return BoundDirection.LOWER if n % 4 == 1 else BoundDirection.UPPER
    ok = _at_most_root(n, lam)
    if not ok:
        return BoundDirection.INVALID
    return BoundDirection.LOWER if n % 4 == 2 else BoundDirection.UPPER


def invalidity_reason(n: int, lam: Fraction) -> str:
    """Human-readable reason a spec is invalid (assumes validity() returned INVALID)."""
    lam = Fraction(lam)
    if n % 2 == 1:
        return (
            f"invalid (N, lambda): N = {n} = 4k+{n % 4} needs lambda >= root of "
            f"B_{n + 1} on [0, 1/2], but lambda = {lam} lies below it"
        )
    return (
        f"invalid (N, lambda): N = {n} = 4k+{n % 4} needs lambda <= root of "
        f"B_{n} on [0, 1/2], but lambda = {lam} exceeds it"
    )


# --- optional cache spill (used by the CLI) --------------------------------

def dump_cache(path) -> int:
    """Write the memoized Bernoulli numbers as 'n: num/den' lines; returns count."""
    cached = _numbers
    with open(path, "w", encoding="ascii") as fh:
        for n, b in enumerate(cached):
            fh.write(f"{n}: {b.numerator}/{b.denominator}\n")
    return len(cached)


def load_cache(path) -> int:
    """Merge 'n: num/den' lines into the memo cache; returns entries accepted.

    Only a contiguous prefix consistent with the recurrence base is used;
    entries are re-validated cheaply (odd indices zero, correct B_0, B_1).
    """
    entries = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            idx, _, frac = line.partition(":")
            num, _, den = frac.strip().partition("/")
            entries[int(idx)] = Fraction(int(num), int(den))
    global _numbers
    prefix: List[Fraction] = []
    n = 0
    while n in entries:
        prefix.append(entries[n])
        n += 1
    if len(prefix) < 2 or prefix[0] != 1 or prefix[1] != Fraction(-1, 2):
        return 0
    for k in range(3, len(prefix), 2):
        if prefix[k] != 0:
            return 0
    # Recurrence check at the top index ties every even entry together; a
    # corrupt cache line fails here unless errors conspire to cancel.
    top = len(prefix) - 1
    if top >= 2:
        if sum(comb(top + 1, k) * prefix[k] for k in range(top + 1)) != 0:
            return 0
    with _lock:
        if len(prefix) > len(_numbers):
            _numbers = tuple(prefix)
    return len(prefix)
