"""Certified evaluation of the truncated asymptotic expansions.

Two series families share one engine room here.  Writing w = x - lam and
u = 1/w, the log-gamma truncation of order N is

    L(x) = log(sqrt(2*pi)) + (x - 1/2) log w - w
           + sum_{n=2}^{N} (-1)^n B_n(lam) / (n (n-1)) * u^(n-1),

and its derivative, the digamma truncation, is

    F(x) = log w - sum_{n=1}^{N} (-1)^n B_n(lam) / n * u^n.

Termwise m-th derivatives of L share the same shape: an exact-rational core
plus a power series in u whose coefficients pick up rising-factorial
factors.  Coefficients are exact rationals injected once per working
precision as rounded-down/rounded-up pairs; all x-dependent arithmetic is
outward-rounded interval work, so the returned enclosures are certificates.

Series sums run Horner-style in u from the highest power down, which keeps
interval growth small because the smallest terms accumulate first.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from gmpy2 import mpfr

from . import bernoulli
from .errors import DomainError
from .rounding import DEFAULT_PRECISION, Enclosure, NumberLike, Rounder, to_rational

__all__ = [
    "TruncationSpec",
    "eval_psi_series",
    "eval_log_gamma_series",
    "eval_log_gamma_series_derivative",
    "eval_gamma_approximant",
    "first_omitted_term",
    "next_nonzero_term_bound",
    "series_coefficient",
    "series_term_magnitude",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class TruncationSpec:
    """One truncated expansion: shift lam in [0, 1/2] and order n >= 1."""

    lam: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if not (0 <= self.lam <= HALF):
            raise DomainError(f"lambda = {self.lam} outside [0, 1/2]")
        if self.n < 1:
            raise DomainError(f"truncation order must be >= 1, got {self.n}")


def series_coefficient(lam: Fraction, n: int, m: int) -> Fraction:
    """Exact coefficient of u^(n-1+m) in the m-th derivative series, n >= 2.

    m = 0 is the log-gamma series itself, m = 1 its derivative (the digamma
    series, whose n-th coefficient of u^n this reproduces), m >= 2 higher
    derivatives.  The n = 1 digamma term B_1(lam) u lives in the series core,
    not here.
    """
    if n < 2:
        raise ValueError("series coefficients start at n = 2")
    b = bernoulli.eval_poly(n, lam)
    base = Fraction((-1) ** n, n * (n - 1))
    if m == 0:
        return base * b
    rising = 1
    for j in range(m):
        rising *= n - 1 + j
    return Fraction((-1) ** m) * base * b * rising


def series_term_magnitude(lam: Fraction, n: int, m: int, w: Fraction) -> Fraction:
    """|coefficient| * w^(-(power)) for the index-n term, exact rational."""
    if n == 1:
        if m != 1:
            raise ValueError("only the digamma series has an n = 1 term")
        return abs(lam - HALF) / w
    return abs(series_coefficient(lam, n, m)) * Fraction(1, w ** (n - 1 + m))


# Coefficient caches: exact values per (lam, m), dyadic bracket pairs per
# (lam, m, precision).  Tuples are swapped atomically; extension happens
# under the lock.
_lock = threading.Lock()
_exact: Dict[Tuple[Fraction, int], Tuple[Fraction, ...]] = {}
_pairs: Dict[Tuple[Fraction, int, int], Tuple[Tuple[mpfr, mpfr], ...]] = {}


def _exact_coefficients(lam: Fraction, m: int, n_max: int) -> Tuple[Fraction, ...]:
    key = (lam, m)
    cached = _exact.get(key, ())
    want = max(n_max - 1, 0)  # slots for n = 2 .. n_max
    if len(cached) >= want:
        return cached
    with _lock:
        cached = _exact.get(key, ())
        if len(cached) >= want:
            return cached
        new = list(cached)
        for n in range(len(new) + 2, n_max + 1):
            new.append(series_coefficient(lam, n, m))
        _exact[key] = tuple(new)
        return _exact[key]


def _coefficient_pairs(lam: Fraction, m: int, n_max: int,
                       rounder: Rounder) -> Tuple[Tuple[mpfr, mpfr], ...]:
    key = (lam, m, rounder.precision)
    cached = _pairs.get(key, ())
    want = max(n_max - 1, 0)
    if len(cached) >= want:
        return cached
    exact = _exact_coefficients(lam, m, n_max)
    with _lock:
        cached = _pairs.get(key, ())
        if len(cached) >= want:
            return cached
        new = list(cached)
        for i in range(len(new), want):
            q = exact[i]
            new.append((rounder.scalar_down(q), rounder.scalar_up(q)))
        _pairs[key] = tuple(new)
        return _pairs[key]


def _series_sum(lam: Fraction, n_trunc: int, m: int, u: Fraction,
                rounder: Rounder) -> Enclosure:
    """Enclosure of sum_{n=2}^{n_trunc} coeff(n, m) u^(n-1+m)."""
    if n_trunc < 2:
        return rounder.zero()
    pairs = _coefficient_pairs(lam, m, n_trunc, rounder)
    u_iv = rounder.rational(u)
    acc = Enclosure(*pairs[n_trunc - 2])
    for i in range(n_trunc - 3, -1, -1):
        acc = rounder.mul(acc, u_iv)
        lo, hi = pairs[i]
        acc = Enclosure(rounder.down.add(acc.lo, lo), rounder.up.add(acc.hi, hi))
    return rounder.mul_rational(acc, u ** (m + 1))


def _checked_offset(spec: TruncationSpec, x: NumberLike) -> Fraction:
    xq = to_rational(x)
    w = xq - spec.lam
    if w <= 0:
        raise DomainError(f"x = {xq} must exceed lambda = {spec.lam}")
    return w


def _log_plus_rational(r: Rounder, w: Fraction, shift: Fraction) -> Enclosure:
    """log(w) + shift with exact rational shift."""
    return r.add_rational(r.log_rational(w), shift)


def eval_psi_series(spec: TruncationSpec, x: NumberLike,
                    precision: int = DEFAULT_PRECISION) -> Enclosure:
    """Enclosure of the order-n digamma truncation at x (x > lam required)."""
    w = _checked_offset(spec, x)
    r = Rounder(precision)
    u = 1 / w
    core = _log_plus_rational(r, w, (spec.lam - HALF) * u)
    return r.add(core, _series_sum(spec.lam, spec.n, 1, u, r))


def eval_log_gamma_series(spec: TruncationSpec, x: NumberLike,
                          precision: int = DEFAULT_PRECISION) -> Enclosure:
    """Enclosure of the order-n log-gamma truncation at x (x > lam required).

    Order 1 is allowed and means the bare Stirling-type core with an empty
    correction sum.
    """
    w = _checked_offset(spec, x)
    xq = w + spec.lam
    r = Rounder(precision)
    u = 1 / w
    core = r.mul_rational(r.log_rational(w), xq - HALF)
    core = r.add_rational(core, -w)
    core = r.add(core, r.log_sqrt_two_pi())
    return r.add(core, _series_sum(spec.lam, spec.n, 0, u, r))


def eval_log_gamma_series_derivative(spec: TruncationSpec, m: int, x: NumberLike,
                                     precision: int = DEFAULT_PRECISION) -> Enclosure:
    """Enclosure of the m-th derivative (m >= 1) of the log-gamma truncation.

    Uses the closed-form termwise derivative; for m = 1 this assembles the
    digamma truncation through the derivative code path rather than through
    :func:`eval_psi_series`, so cross-checks between the two are meaningful.
    """
    if m < 1:
        raise DomainError("derivative order must be >= 1 (use eval_log_gamma_series for m = 0)")
    w = _checked_offset(spec, x)
    r = Rounder(precision)
    u = 1 / w
    delta = spec.lam - HALF
    if m == 1:
        core = _log_plus_rational(r, w, delta * u)
    else:
        fact = 1
        for j in range(1, m - 1):
            fact *= j
        # d^m/dx^m of (w + delta) log w - w, entirely rational for m >= 2
        lead = Fraction((-1) ** m * fact) * u ** (m - 1)
        tail = delta * Fraction((-1) ** (m - 1) * fact * (m - 1)) * u ** m
        core = r.rational(lead + tail)
    return r.add(core, _series_sum(spec.lam, spec.n, m, u, r))


def eval_gamma_approximant(pairs: int, x: NumberLike,
                           precision: int = DEFAULT_PRECISION) -> Enclosure:
    """Enclosure of the exponentiated half-shift approximant with `pairs` even terms.

    This is exp of the lam = 1/2 log-gamma truncation of order 2*pairs,
    evaluated in the log domain to preserve the directed bounds.  Requires
    x > 1/2.
    """
    if pairs < 1:
        raise DomainError("need at least one series pair")
    xq = to_rational(x)
    if xq <= HALF:
        raise DomainError(f"x = {xq} must exceed 1/2")
    spec = TruncationSpec(HALF, 2 * pairs)
    r = Rounder(precision)
    return r.exp(eval_log_gamma_series(spec, xq, precision))


def first_omitted_term(spec: TruncationSpec, x: NumberLike,
                       family: str = "psi") -> mpfr:
    """Magnitude upper bound for the first omitted series term, rounded up.

    families: "psi" gives |B_{N+1}(lam)| / (N+1) * w^-(N+1); "loggamma"
    gives |B_{N+1}(lam)| / ((N+1) N) * w^-N.  The value is exactly zero
    whenever B_{N+1}(lam) vanishes (odd index at lam in {0, 1/2}); planning
    code must then look one term further (see next_nonzero_term_bound).
    This is a planning heuristic only -- certification always comes from a
    bracketing pair of truncations.
    """
    w = _checked_offset(spec, x)
    n1 = spec.n + 1
    b = abs(bernoulli.eval_poly(n1, spec.lam))
    if family == "psi":
        q = b / n1 * Fraction(1, w ** n1)
    elif family == "loggamma":
        q = b / (n1 * spec.n) * Fraction(1, w ** spec.n)
    else:
        raise ValueError(f"unknown family {family!r}")
    return Rounder(64).scalar_up(q)


def next_nonzero_term_bound(spec: TruncationSpec, x: NumberLike,
                            family: str = "psi") -> mpfr:
    """Like first_omitted_term but skips vanishing coefficients.

    At lam = 1/2 or lam = 0 every other Bernoulli value is zero, so the
    literal next term can be 0; the first nonzero omitted term is the
    quantity a planner actually wants.
    """
    w = _checked_offset(spec, x)
    n = spec.n + 1
    while bernoulli.eval_poly(n, spec.lam) == 0:
        n += 1
        if n > spec.n + 4:
            raise RuntimeError("no nonzero coefficient found near the truncation order")
    b = abs(bernoulli.eval_poly(n, spec.lam))
    if family == "psi":
        q = b / n * Fraction(1, w ** n)
    elif family == "loggamma":
        q = b / (n * (n - 1)) * Fraction(1, w ** (n - 1))
    else:
        raise ValueError(f"unknown family {family!r}")
    return Rounder(64).scalar_up(q)
