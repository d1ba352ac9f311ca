"""Certified evaluation core.

Given a target (a digamma derivative, log-gamma, or gamma itself), an
argument x, and an absolute tolerance, the engine produces an enclosure by

  1. choosing a shift K and evaluating at y = x + K, where the truncated
     expansions are tight;
  2. evaluating two truncations whose validity classification gives one
     certified lower and one certified upper bound at y;
  3. subtracting an enclosure of the exactly-summable functional-equation
     correction, with outward rounding throughout.

Certification never relies on first-omitted-term estimates: those are
planning heuristics only.  Every returned enclosure is backed by the
bracketing pair, so it is valid for every shift lam in [0, 1/2], not just
the symmetric ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial
from typing import Optional, Tuple

from gmpy2 import mpfr

from . import bernoulli
from .bernoulli import BoundDirection, invalidity_reason, validity
from .errors import DomainError, ToleranceError
from .expansions import (
    TruncationSpec,
    eval_log_gamma_series,
    eval_log_gamma_series_derivative,
    eval_psi_series,
    series_coefficient,
)
from .rounding import Enclosure, NumberLike, Rounder, to_rational

__all__ = [
    "Target",
    "Query",
    "Plan",
    "shift_sum",
    "bound_psi_side",
    "bound_derivative_side",
    "direction_for",
    "plan",
    "enclose",
]

HALF = Fraction(1, 2)
ESCALATION_CAP = 64
_K_CAP = 1 << 22
_PAIR_ORDER_CAP = 1600
_SERIES_TERM_COST = 32


def _fmt_eps(eps: Fraction) -> str:
    try:
        f = float(eps)
    except OverflowError:
        f = 0.0
    return repr(f) if f > 0 else f"~2^-{(eps.denominator // max(eps.numerator, 1)).bit_length()}"


@dataclass(frozen=True)
class Target:
    """What to enclose: psi^(m), log Gamma, or Gamma."""

    kind: str  # "psi" | "loggamma" | "gamma"
    order: int = 0  # derivative order, psi only

    def __post_init__(self):
        if self.kind not in ("psi", "loggamma", "gamma"):
            raise ValueError(f"unknown target kind {self.kind!r}")
        if self.order < 0:
            raise ValueError("derivative order must be >= 0")
        if self.kind != "psi" and self.order != 0:
            raise ValueError("only psi targets take a derivative order")

    @classmethod
    def psi(cls, order: int = 0) -> "Target":
        return cls("psi", order)

    @classmethod
    def loggamma(cls) -> "Target":
        return cls("loggamma")

    @classmethod
    def gamma(cls) -> "Target":
        return cls("gamma")

    def loggamma_derivative_order(self) -> int:
        """The target expressed as the m-th derivative of log Gamma."""
        if self.kind == "psi":
            return self.order + 1
        return 0

    def describe(self) -> str:
        if self.kind == "psi":
            return "psi" if self.order == 0 else f"psi^({self.order})"
        return self.kind


@dataclass(frozen=True)
class Query:
    """An evaluation request; overrides pin planner knobs when set."""

    target: Target
    x: Fraction
    eps: Fraction
    lam: Optional[Fraction] = None
    n_anchor: Optional[int] = None
    k: Optional[int] = None
    precision: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "x", to_rational(self.x))
        object.__setattr__(self, "eps", to_rational(self.eps))
        if self.eps <= 0:
            raise DomainError("tolerance must be positive")
        if self.lam is not None:
            object.__setattr__(self, "lam", to_rational(self.lam))
        if self.k is not None and self.k < 0:
            raise DomainError("shift override must be non-negative")
        if self.n_anchor is not None and self.n_anchor < 1:
            raise DomainError("truncation anchor must be >= 1")
        if self.precision is not None and self.precision < 8:
            raise DomainError("precision must be at least 8 bits")


@dataclass(frozen=True)
class Plan:
    """Concrete evaluation recipe produced by the planner."""

    lam: Fraction
    n_lower: int
    n_upper: int
    k: int
    precision: int
    log_domain_eps: Optional[Fraction] = None  # gamma targets only

    def orders(self) -> Tuple[int, int]:
        return (min(self.n_lower, self.n_upper), max(self.n_lower, self.n_upper))

    def nonzero_terms(self) -> int:
        """Nonzero series terms in the shorter bracket member (diagnostic)."""
        n_short = min(self.n_lower, self.n_upper)
        return sum(1 for n in range(1, n_short + 1) if bernoulli.eval_poly(n, self.lam) != 0)


def direction_for(n: int, m: int) -> BoundDirection:
    """Bound direction of the order-n truncation for the m-th log-gamma derivative.

    The sign of (log Gamma - L_n)^(m) on the validity range is
    (-1)^(ceil(n/2) + m); positive sign means the truncation sits below the
    true value.
    """
    sign = -1 if ((n + 1) // 2 + m) % 2 else 1
    return BoundDirection.LOWER if sign == 1 else BoundDirection.UPPER


def shift_sum(target: Target, x: NumberLike, k: int, precision: int) -> Enclosure:
    """Enclosure of the correction C with target(x) = target(x + k) - C.

    For psi the correction is sum_j 1/(x+j); for log Gamma, sum_j log(x+j);
    for psi^(m), sum_j (-1)^m m! / (x+j)^(m+1).  Factorials and the
    per-term rationals are exact; only the final rounding to the working
    precision is inexact.
    """
    xq = to_rational(x)
    if k < 0:
        raise DomainError("shift must be non-negative")
    r = Rounder(precision)
    acc = r.zero()
    if k == 0:
        return acc
    kind = "loggamma" if target.kind == "gamma" else target.kind
    m = target.order if kind == "psi" else 0
    sign_fact = Fraction((-1) ** m * factorial(m)) if kind == "psi" and m else None
    for j in range(k):
        base = xq + j
        if base <= 0:
            raise DomainError(f"shift crosses a pole at x + {j} = {base}")
        if kind == "loggamma":
            term = r.log_rational(base)
        elif m == 0:
            term = r.rational(Fraction(1, 1) / base)
        else:
            term = r.rational(sign_fact / base ** (m + 1))
        acc = r.add(acc, term)
    return acc


def bound_psi_side(spec: TruncationSpec, x: NumberLike,
                   precision: int) -> Tuple[BoundDirection, mpfr]:
    """One-sided certified bound on psi(x) from the digamma truncation.

    Returns the rounded-down endpoint for a lower bound, the rounded-up
    endpoint for an upper bound.  Invalid (n, lam) combinations are rejected
    with a diagnostic naming the violated frontier condition.
    """
    d = validity(spec.n, spec.lam)
    if d == BoundDirection.INVALID:
        raise DomainError(invalidity_reason(spec.n, spec.lam))
    enc = eval_psi_series(spec, x, precision)
    return d, (enc.lo if d == BoundDirection.LOWER else enc.hi)


def bound_derivative_side(spec: TruncationSpec, m: int, x: NumberLike,
                          precision: int) -> Tuple[BoundDirection, mpfr]:
    """One-sided certified bound on the m-th derivative of log Gamma.

    m = 0 bounds log Gamma itself, m = 1 bounds psi, and so on.  The
    direction follows the complete-monotonicity sign rule; the same (n, lam)
    validity frontier applies for every derivative order.
    """
    if validity(spec.n, spec.lam) == BoundDirection.INVALID:
        raise DomainError(invalidity_reason(spec.n, spec.lam))
    d = direction_for(spec.n, m)
    if m == 0:
        enc = eval_log_gamma_series(spec, x, precision)
    else:
        enc = eval_log_gamma_series_derivative(spec, m, x, precision)
    return d, (enc.lo if d == BoundDirection.LOWER else enc.hi)


# --- planning ----------------------------------------------------------------


def _valid_orders(lam: Fraction):
    for n in itertools.count(1):
        if n > _PAIR_ORDER_CAP:
            return
        if validity(n, lam) != BoundDirection.INVALID:
            yield n


def _pairs(lam: Fraction):
    """Consecutive valid truncation orders; directions always alternate."""
    prev = None
    for n in _valid_orders(lam):
        if prev is not None:
            yield prev, n
        prev = n


class _GapModel:
    """Up-rounded 64-bit magnitudes of series terms, for planning only."""

    def __init__(self, lam: Fraction, m: int):
        self.lam = lam
        self.m = m
        self.r = Rounder(64)
        self._terms = {}

    def _coef_power(self, n: int) -> Tuple[mpfr, int]:
        hit = self._terms.get(n)
        if hit is None:
            c = abs(series_coefficient(self.lam, n, self.m))
            hit = (self.r.scalar_up(c), n - 1 + self.m)
            self._terms[n] = hit
        return hit

    def gap(self, pair: Tuple[int, int], w: Fraction) -> mpfr:
        """Upper estimate of the bracket width from the terms separating the pair."""
        a, b = pair
        u_up = self.r.scalar_up(1 / w)
        total = mpfr(0)
        for n in range(a + 1, b + 1):
            coef, power = self._coef_power(n)
            total = self.r.up.add(total, self.r.up.mul(coef, self.r.up.pow(u_up, power)))
        return total


def _k_floor(x: Fraction, lam: Fraction) -> int:
    """Smallest k >= 0 with x + k > lam + 1."""
    gap = lam + 1 - x
    if gap < 0:
        return 0
    k = int(gap)
    while x + k <= lam + 1:
        k += 1
    return k


def _search_k(model: _GapModel, pair, x: Fraction, lam: Fraction,
              target: mpfr, k_min: int) -> Optional[int]:
    """Minimal k >= k_min with predicted gap at x + k below target, or None."""

    def ok(k: int) -> bool:
        return model.gap(pair, x + k - lam) <= target

    if ok(k_min):
        return k_min
    hi = max(k_min, 1)
    while not ok(hi):
        hi *= 2
        if hi > _K_CAP:
            return None
    lo = max(k_min, hi // 2)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _precision_for(eps: Fraction, override: Optional[int]) -> int:
    if override is not None:
        return override
    inv = 1 / eps
    bits = max(0, (inv.numerator // inv.denominator).bit_length())
    return max(64, bits + 128)


def _anchored_pair(lam: Fraction, anchor: int) -> Tuple[int, int]:
    if validity(anchor, lam) == BoundDirection.INVALID:
        raise DomainError(invalidity_reason(anchor, lam))
    for n in itertools.count(anchor + 1):
        if n - anchor > 8:
            raise DomainError(f"no valid partner order found above N = {anchor}")
        if validity(n, lam) != BoundDirection.INVALID:
            return anchor, n


def _assign_directions(pair: Tuple[int, int], m: int) -> Tuple[int, int]:
    """Return (n_lower, n_upper) from an (ascending) valid pair."""
    a, b = pair
    if direction_for(a, m) == BoundDirection.LOWER:
        return a, b
    return b, a


def _plan_psi_or_loggamma(query: Query) -> Plan:
    target = query.target
    lam = query.lam if query.lam is not None else HALF
    if not (0 <= lam <= HALF):
        raise DomainError(f"lambda = {lam} outside [0, 1/2]")
    x = query.x
    if x <= 0:
        raise DomainError(f"argument must be positive, got {x}")
    if query.k is not None and x + query.k <= lam:
        raise DomainError(
            f"x + K = {x + query.k} does not exceed lambda = {lam}; "
            "raise K or drop the override"
        )
    m = target.loggamma_derivative_order()
    model = _GapModel(lam, m)
    eps_margin = query.eps / 16
    gap_target = Rounder(64).scalar_down(eps_margin)
    precision = _precision_for(query.eps, query.precision)
    k_min = _k_floor(x, lam)

    if query.n_anchor is not None:
        pair = _anchored_pair(lam, query.n_anchor)
        if query.k is not None:
            k = query.k
        else:
            k = _search_k(model, pair, x, lam, gap_target, k_min)
            if k is None:
                k = k_min
        n_lo, n_up = _assign_directions(pair, m)
        return Plan(lam, n_lo, n_up, k, precision)

    best = None  # (cost, pair, k)
    fallback = None  # (gap, pair, k) when nothing reaches the target
    worsening = 0
    for pair in _pairs(lam):
        if query.k is not None:
            # Shift pinned: take the smallest pair whose predicted gap fits,
            # giving up once the series has visibly started to diverge.
            k = query.k
            g = model.gap(pair, x + k - lam)
            if g <= gap_target:
                best = (0, pair, k)
                break
            if fallback is None or g < fallback[0]:
                fallback = (g, pair, k)
                worsening = 0
            else:
                worsening += 1
                if worsening >= 4:
                    break
            continue
        if best is not None and _SERIES_TERM_COST * pair[1] >= best[0]:
            break
        k = _search_k(model, pair, x, lam, gap_target, k_min)
        if k is None:
            g = model.gap(pair, x + _K_CAP - lam)
            if fallback is None or g < fallback[0]:
                fallback = (g, pair, _K_CAP)
            continue
        cost = k + _SERIES_TERM_COST * pair[1]
        if best is None or cost < best[0]:
            best = (cost, pair, k)
    if best is None:
        if fallback is None:
            raise DomainError("no valid truncation pair exists for these parameters")
        _, pair, k = fallback
    else:
        _, pair, k = best
    n_lo, n_up = _assign_directions(pair, m)
    return Plan(lam, n_lo, n_up, k, precision)


def _gamma_log_eps(query: Query) -> Tuple[Fraction, Query]:
    """Convert the absolute gamma tolerance into a log-domain tolerance.

    Uses a cheap certified coarse pass (eps = 1/4) of the log-gamma engine to
    size the magnitude, then applies the safety factor 1/2.
    """
    coarse_query = replace(query, target=Target.loggamma(), eps=Fraction(1, 4),
                           precision=None)
    coarse, _ = enclose(coarse_query)
    r = Rounder(64)
    mag_up = r.up.exp(coarse.hi)
    mag = to_rational(mag_up)
    if mag <= 0:
        mag = Fraction(1)
    eps_log = query.eps / (2 * mag)
    inner = replace(query, target=Target.loggamma(), eps=eps_log)
    return eps_log, inner


def plan(query: Query) -> Plan:
    """The plan :func:`enclose` would start from, without evaluating bounds."""
    if query.target.kind == "gamma":
        eps_log, inner = _gamma_log_eps(query)
        inner_plan = _plan_psi_or_loggamma(inner)
        return replace(inner_plan, log_domain_eps=eps_log)
    return _plan_psi_or_loggamma(query)


# --- evaluation --------------------------------------------------------------


def _one_sided(target: Target, spec: TruncationSpec, y: Fraction,
               precision: int) -> Tuple[BoundDirection, mpfr]:
    if target.kind == "psi" and target.order == 0:
        return bound_psi_side(spec, y, precision)
    return bound_derivative_side(spec, target.loggamma_derivative_order(), y, precision)


def _evaluate(target: Target, x: Fraction, pl: Plan) -> Optional[Enclosure]:
    y = x + pl.k
    d_lo, v_lo = _one_sided(target, TruncationSpec(pl.lam, pl.n_lower), y, pl.precision)
    d_up, v_up = _one_sided(target, TruncationSpec(pl.lam, pl.n_upper), y, pl.precision)
    if d_lo != BoundDirection.LOWER or d_up != BoundDirection.UPPER:
        raise DomainError(
            f"plan pair ({pl.n_lower}, {pl.n_upper}) does not bracket at lambda = {pl.lam}"
        )
    corr = shift_sum(target, x, pl.k, pl.precision)
    r = Rounder(pl.precision)
    lo = r.down.sub(v_lo, corr.hi)
    hi = r.up.sub(v_up, corr.lo)
    if lo > hi:
        return None  # rounding swamped the bracket; caller escalates precision
    return Enclosure(lo, hi)


def _next_pair_after(lam: Fraction, n_from: int) -> Tuple[int, int]:
    found = []
    for n in _valid_orders(lam):
        if n > n_from:
            found.append(n)
            if len(found) == 2:
                return found[0], found[1]
    raise DomainError("ran out of valid truncation orders while escalating")


def _escalate(query: Query, pl: Plan, knob: int) -> Plan:
    if knob == 0 and query.k is None and pl.k < _K_CAP:
        return replace(pl, k=max(2 * pl.k, 4))
    if knob <= 1 and query.n_anchor is None:
        m = query.target.loggamma_derivative_order()
        pair = _next_pair_after(pl.lam, max(pl.n_lower, pl.n_upper))
        n_lo, n_up = _assign_directions(pair, m)
        return replace(pl, n_lower=n_lo, n_upper=n_up)
    return replace(pl, precision=pl.precision * 3 // 2 + 64)


def enclose(query: Query) -> Tuple[Enclosure, Plan]:
    """Certified enclosure of width <= eps, plus the plan that produced it.

    Escalates shift, truncation order, then precision (in that rotation) up
    to a fixed cap; raises ToleranceError carrying the best enclosure found
    if the tolerance remains out of reach.
    """
    if query.target.kind == "gamma":
        return _enclose_gamma(query)
    pl = _plan_psi_or_loggamma(query)
    best: Optional[Enclosure] = None
    best_plan = pl
    for attempt in range(ESCALATION_CAP):
        enc = _evaluate(query.target, query.x, pl)
        if enc is not None:
            if enc.width() <= query.eps:
                return enc, pl
            if best is None or enc.width() < best.width():
                best, best_plan = enc, pl
        pl = _escalate(query, pl, attempt % 3)
    raise ToleranceError(
        f"tolerance {_fmt_eps(query.eps)} unreachable for {query.target.describe()} "
        f"at x = {query.x} within {ESCALATION_CAP} escalations",
        best=best,
        plan=best_plan,
    )


def _enclose_gamma(query: Query) -> Tuple[Enclosure, Plan]:
    if query.x <= 0:
        raise DomainError(f"argument must be positive, got {query.x}")
    eps_log, inner = _gamma_log_eps(query)
    for _ in range(2):
        log_enc, log_plan = enclose(inner)
        r = Rounder(log_plan.precision)
        enc = r.exp(log_enc)
        if enc.width() <= query.eps:
            return enc, replace(log_plan, log_domain_eps=inner.eps)
        inner = replace(inner, eps=inner.eps / 8)
    raise ToleranceError(
        f"gamma tolerance {_fmt_eps(query.eps)} unreachable at x = {query.x}",
        best=enc,
        plan=replace(log_plan, log_domain_eps=inner.eps),
    )
