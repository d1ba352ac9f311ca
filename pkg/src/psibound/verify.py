"""Independent oracles and desk-scale property checks.

Everything here deliberately avoids the engine's own certification route:
quadrature estimates the one-period remainder integral directly, the
series oracle telescopes the product formula for the gamma function, and
the asymptote check leans only on elementary logarithms.  Quadrature
results carry an error *estimate* (with a stiff safety factor), not a
certified bound -- certifying is the engine's job; this module's job is to
disagree loudly if the engine or the sign table is wrong.

Each check returns a :class:`CheckRecord` so the command-line front end can
emit one JSON line per check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import bernoulli, engine
from .bernoulli import BoundDirection, validity
from .engine import Query, Target
from .errors import DomainError
from .expansions import TruncationSpec, eval_gamma_approximant, eval_log_gamma_series, \
    eval_log_gamma_series_derivative, eval_psi_series
from .rounding import Enclosure, NumberLike, Rounder, to_rational

__all__ = [
    "QuadratureResult",
    "SignReport",
    "CheckRecord",
    "quadrature_remainder",
    "check_remainder_sign",
    "check_functional_identity",
    "check_tail_representation",
    "check_complete_monotonicity",
    "find_sign_change",
    "gamma_sandwich_check",
    "gamma_sandwich_nesting",
    "psi_diff_series",
    "check_psi_log_asymptote",
    "run_suite",
    "SUITES",
]

HALF = Fraction(1, 2)

SAFETY_FACTOR = 10.0
EPS_LADDER = (Fraction(1, 10**12), Fraction(1, 10**18), Fraction(1, 10**24),
              Fraction(1, 10**30), Fraction(1, 10**40))


@dataclass(frozen=True)
class QuadratureResult:
    estimate: float
    radius: float
    subdivisions: int


@dataclass(frozen=True)
class SignReport:
    grid: Tuple[Fraction, ...]
    signs: Tuple[str, ...]  # "+", "-", "indeterminate"
    first_change: Optional[Tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class CheckRecord:
    check: str
    params: dict
    status: str  # "pass" | "fail" | "inconclusive"
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {"check": self.check, "params": self.params, "status": self.status,
             "detail": self.detail},
            sort_keys=True,
        )

    @property
    def passed(self) -> bool:
        return self.status == "pass"


# --- quadrature for the one-period remainder integral -----------------------


def _poly_floats(coeffs: Sequence[Fraction]) -> List[float]:
    return [float(c) for c in coeffs]


def _poly_eval(coeffs: Sequence[float], t: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _poly_derivatives(coeffs: Sequence[Fraction], orders: int) -> List[List[float]]:
    out = [_poly_floats(coeffs)]
    current = list(coeffs)
    for _ in range(orders):
        current = [k * c for k, c in enumerate(current)][1:] or [Fraction(0)]
        out.append(_poly_floats(current))
    return out

_RISING4 = {}


def _rising(m: int, i: int) -> int:
    key = (m, i)
    hit = _RISING4.get(key)
    if hit is None:
        hit = 1
        for j in range(i):
            hit *= m + j
        _RISING4[key] = hit
    return hit


def _piece_simpson(coeffs: Sequence[Fraction], lo: float, hi: float, x: float,
                   power: int, n: int) -> Tuple[float, float]:
    """Composite Simpson of P(t) / (x+t)^power over [lo, hi] with error estimate.

    The error model is the classical (b-a) h^4 |f''''| / 180 bound with the
    fourth derivative sampled on the Simpson grid, times SAFETY_FACTOR.
    """
    if hi <= lo:
        return 0.0, 0.0
    if n % 2:
        n += 1
    derivs = _poly_derivatives(coeffs, 4)

    def f(t: float) -> float:
        return _poly_eval(derivs[0], t) * (x + t) ** (-power)

    def f4(t: float) -> float:
        total = 0.0
        for j in range(5):
            pj = _poly_eval(derivs[j], t)
            sign = -1.0 if (4 - j) % 2 else 1.0
            total += comb(4, j) * pj * sign * _rising(power, 4 - j) * (x + t) ** (-(power + 4 - j))
        return total

    h = (hi - lo) / n
    total = f(lo) + f(hi)
    max_f4 = abs(f4(lo))
    for i in range(1, n):
        t = lo + i * h
        total += f(t) * (4.0 if i % 2 else 2.0)
        max_f4 = max(max_f4, abs(f4(t)))
    estimate = total * h / 3.0
    radius = (hi - lo) * h**4 / 180.0 * max_f4 * SAFETY_FACTOR
    return estimate, radius


def quadrature_remainder(spec: TruncationSpec, x: NumberLike,
                         subdivisions: int = 128) -> QuadratureResult:
    """Estimate of the one-period remainder integral

        R = integral over [-lam, 1-lam] of B_n({t}) / (x+t)^(n+1) dt,

    split at t = 0 where the fractional part resets: the integrand is
    B_n(t+1) on [-lam, 0) and B_n(t) on [0, 1-lam].  Needs x > lam + 1 so
    each piece is smooth and pole-free.
    """
    xq = to_rational(x)
    if xq <= spec.lam + 1:
        raise DomainError(f"quadrature needs x > lambda + 1, got x = {xq}")
    if subdivisions < 2:
        raise DomainError("need at least 2 subdivisions")
    lam = float(spec.lam)
    xf = float(xq)
    power = spec.n + 1
    base = bernoulli.bernoulli_poly(spec.n).coefficients
    # B_n(t+1) = B_n(t) + n t^(n-1), cheaper than recomposing the shift
    shifted = list(base)
    if spec.n >= 1:
        shifted[spec.n - 1] += spec.n
    est_a, rad_a = _piece_simpson(shifted, -lam, 0.0, xf, power, subdivisions)
    est_b, rad_b = _piece_simpson(base, 0.0, 1.0 - lam, xf, power, subdivisions)
    return QuadratureResult(est_a + est_b, rad_a + rad_b, subdivisions)


def check_remainder_sign(spec: TruncationSpec, x: NumberLike,
                         subdivisions: int = 128) -> CheckRecord:
    """The remainder integral must be positive for lower-bound truncations
    and negative for upper-bound ones; sign resolved only when the estimate
    clears its own error radius."""
    direction = validity(spec.n, spec.lam)
    if direction == BoundDirection.INVALID:
        raise DomainError(bernoulli.invalidity_reason(spec.n, spec.lam))
    expected = 1 if direction == BoundDirection.LOWER else -1
    params = {"lambda": str(spec.lam), "n": spec.n, "x": str(to_rational(x))}
    subs = subdivisions
    for _ in range(3):
        qr = quadrature_remainder(spec, x, subs)
        if abs(qr.estimate) > qr.radius:
            ok = (qr.estimate > 0) == (expected > 0)
            return CheckRecord(
                "remainder_sign", params, "pass" if ok else "fail",
                f"estimate={qr.estimate:.6e} radius={qr.radius:.2e} expected_sign={expected:+d}",
            )
        subs *= 4
    return CheckRecord("remainder_sign", params, "inconclusive",
                       f"radius {qr.radius:.2e} never cleared estimate {qr.estimate:.6e}")


def check_functional_identity(spec: TruncationSpec, x: NumberLike,
                              subdivisions: int = 256) -> CheckRecord:
    """F(x+1) - F(x) - 1/x must equal the remainder integral, within radii."""
    xq = to_rational(x)
    lhs = Rounder(192).sub(eval_psi_series(spec, xq + 1, 192),
                           eval_psi_series(spec, xq, 192))
    lhs = Rounder(192).add_rational(lhs, -1 / xq)
    qr = quadrature_remainder(spec, xq, subdivisions)
    mid = float(lhs.midpoint())
    tol = qr.radius + float(lhs.width()) + 1e-14 * max(1.0, abs(qr.estimate))
    ok = abs(mid - qr.estimate) <= tol
    return CheckRecord(
        "functional_identity",
        {"lambda": str(spec.lam), "n": spec.n, "x": str(xq)},
        "pass" if ok else "fail",
        f"series_side={mid:.6e} quadrature={qr.estimate:.6e} tol={tol:.2e}",
    )


def check_tail_representation(spec: TruncationSpec, x: NumberLike, periods: int,
                              subdivisions: int = 64) -> CheckRecord:
    """psi(x) - F(x) equals the infinite remainder integral; we sum `periods`
    unit intervals of quadrature plus a rigorous tail bound and ask the
    engine's enclosure of the left side to land inside the window."""
    xq = to_rational(x)
    est = 0.0
    rad = 0.0
    for i in range(periods):
        qr = quadrature_remainder(spec, xq + i, subdivisions)
        est += qr.estimate
        rad += qr.radius
    tail = float(bernoulli.max_abs_on_unit_interval(spec.n)) / (
        spec.n * float(xq + periods - spec.lam) ** spec.n)
    psi_enc, _ = engine.enclose(Query(Target.psi(), xq, Fraction(1, 10**15)))
    diff = Rounder(128).sub(psi_enc, eval_psi_series(spec, xq, 128))
    lo, hi = float(diff.lo), float(diff.hi)
    window = rad + tail + 1e-14 * max(1.0, abs(est))
    ok = (est - window) <= lo and hi <= (est + window)
    status = "pass" if ok else "fail"
    return CheckRecord(
        "tail_representation",
        {"lambda": str(spec.lam), "n": spec.n, "x": str(xq), "periods": periods},
        status,
        f"engine=[{lo:.10e}, {hi:.10e}] quadrature={est:.10e} window={window:.2e}",
    )


# --- complete monotonicity and sign scans ------------------------------------


def _loggamma_derivative_enclosure(m: int, x: Fraction, eps: Fraction) -> Enclosure:
    target = Target.loggamma() if m == 0 else Target.psi(m - 1)
    enc, _ = engine.enclose(Query(target, x, eps))
    return enc


def _certified_sign(difference: Callable[[Fraction], Enclosure],
                    ladder=EPS_LADDER) -> str:
    for eps in ladder:
        enc = difference(eps)
        if enc.lo > 0:
            return "+"
        if enc.hi < 0:
            return "-"
    return "indeterminate"


def check_complete_monotonicity(spec: TruncationSpec, m_max: int,
                                grid: Sequence[NumberLike]) -> Dict[int, SignReport]:
    """Sample the alternating-sign property of the truncation defect.

    For each derivative order m <= m_max and each grid point, the sign of
    (-1)^(ceil(n/2) + m) (log Gamma^(m)(x) - series^(m)(x)) must come out
    certified positive.  Only finitely many (m, x) pairs are checkable; the
    all-orders statement is sampled, never asserted.
    """
    if validity(spec.n, spec.lam) == BoundDirection.INVALID:
        raise DomainError(bernoulli.invalidity_reason(spec.n, spec.lam))
    points = tuple(to_rational(g) for g in grid)
    reports: Dict[int, SignReport] = {}
    for m in range(m_max + 1):
        flip = -1 if (((spec.n + 1) // 2 + m) % 2) else 1
        signs = []
        for xq in points:
            def diff(eps: Fraction, xq=xq, m=m, flip=flip) -> Enclosure:
                prec = max(96, (1 / eps).numerator.bit_length() + 96)
                series = (eval_log_gamma_series(spec, xq, prec) if m == 0 else
                          eval_log_gamma_series_derivative(spec, m, xq, prec))
                r = Rounder(prec)
                d = r.sub(_loggamma_derivative_enclosure(m, xq, eps), series)
                return d if flip == 1 else r.neg(d)

            signs.append(_certified_sign(diff))
        reports[m] = SignReport(points, tuple(signs), None)
    return reports


def find_sign_change(spec: TruncationSpec, grid: Sequence[NumberLike]) -> SignReport:
    """Certified signs of psi(x) - F(x) along the grid, with the first
    adjacent certified sign flip reported as a bracket."""
    points = tuple(sorted(to_rational(g) for g in grid))
    if points and points[0] <= spec.lam:
        raise DomainError("grid extends to or below lambda")
    signs = []
    for xq in points:
        def diff(eps: Fraction, xq=xq) -> Enclosure:
            prec = max(96, (1 / eps).numerator.bit_length() + 96)
            psi_enc, _ = engine.enclose(Query(Target.psi(), xq, eps))
            return Rounder(prec).sub(psi_enc, eval_psi_series(spec, xq, prec))

        signs.append(_certified_sign(diff))
    first = None
    for a, b in zip(range(len(points) - 1), range(1, len(points))):
        sa, sb = signs[a], signs[b]
        if sa in "+-" and sb in "+-" and sa != sb:
            first = (points[a], points[b])
            break
    return SignReport(points, tuple(signs), first)


# --- gamma sandwich -----------------------------------------------------------


def gamma_sandwich_check(n: int, grid: Sequence[NumberLike],
                         precision: int = 192) -> CheckRecord:
    """Certify approximant(2n-1) < Gamma < approximant(2n) at every grid point."""
    points = [to_rational(g) for g in grid]
    failures = []
    for xq in points:
        ok = _sandwich_at(n, xq, precision)
        if not ok:
            failures.append(str(xq))
    status = "pass" if not failures else "fail"
    return CheckRecord("gamma_sandwich", {"n": n, "grid": [str(p) for p in points]},
                       status, f"failures={failures}" if failures else "strict at all points")


def _sandwich_at(n: int, xq: Fraction, precision: int) -> bool:
    for attempt in range(2):  # one automatic escalation on indeterminacy
        prec = precision * (attempt + 1)
        lower = eval_gamma_approximant(2 * n - 1, xq, prec)
        upper = eval_gamma_approximant(2 * n, xq, prec)
        gap = to_rational(upper.lo) - to_rational(lower.hi)
        if gap <= 0:
            continue
        g_enc, _ = engine.enclose(Query(Target.gamma(), xq, gap / 8))
        if lower.hi < g_enc.lo and g_enc.hi < upper.lo:
            return True
    return False


def gamma_sandwich_nesting(n_outer: int, n_inner: int, grid: Sequence[NumberLike],
                           precision: int = 192) -> CheckRecord:
    """Certify that the inner sandwich sits strictly inside the outer one.

    Only meaningful where the series is still contracting; at small
    arguments the asymptotic terms grow and nesting genuinely fails.
    """
    points = [to_rational(g) for g in grid]
    failures = []
    for xq in points:
        lo_out = eval_gamma_approximant(2 * n_outer - 1, xq, precision)
        hi_out = eval_gamma_approximant(2 * n_outer, xq, precision)
        lo_in = eval_gamma_approximant(2 * n_inner - 1, xq, precision)
        hi_in = eval_gamma_approximant(2 * n_inner, xq, precision)
        if not (lo_out.hi < lo_in.lo and hi_in.hi < hi_out.lo):
            failures.append(str(xq))
    status = "pass" if not failures else "fail"
    return CheckRecord(
        "gamma_sandwich_nesting",
        {"outer": n_outer, "inner": n_inner, "grid": [str(p) for p in points]},
        status, f"failures={failures}" if failures else "nested at all points")


# --- series oracle and asymptote ----------------------------------------------


def psi_diff_series(x: NumberLike, y: NumberLike, terms: int,
                    precision: int = 96) -> Enclosure:
    """Enclosure of psi(x+1) - psi(y+1) from the product-formula series.

    The Euler constant cancels in the difference, leaving
    sum_{k>=1} (1/(k+y) - 1/(k+x)) = sum_{k>=1} (x-y)/((k+x)(k+y)),
    summed to `terms` with the integral-comparison tail bound
    |x-y| / (terms + min(x, y)).  Entirely engine-independent.
    """
    xq, yq = to_rational(x), to_rational(y)
    if xq <= -1 or yq <= -1:
        raise DomainError("arguments must exceed -1")
    if terms < 1:
        raise DomainError("need at least one series term")
    if xq == yq:
        return Rounder(precision).zero()
    swap = xq < yq
    if swap:
        xq, yq = yq, xq
    r = Rounder(precision)
    from gmpy2 import mpfr, mpq
    s = mpq(*(xq - yq).as_integer_ratio())
    xm = mpq(*xq.as_integer_ratio())
    ym = mpq(*yq.as_integer_ratio())
    lo = mpfr(0)
    hi = mpfr(0)
    for k in range(1, terms + 1):
        den_hi = r.up.mul(r.up.add(xm, k), r.up.add(ym, k))
        den_lo = r.down.mul(r.down.add(xm, k), r.down.add(ym, k))
        lo = r.down.add(lo, r.down.div(s, den_hi))
        hi = r.up.add(hi, r.up.div(s, den_lo))
    tail = (xq - yq) / (terms + yq) if terms + yq > 0 else (xq - yq)
    hi = r.up.add(hi, r.scalar_up(tail))
    enc = Enclosure(lo, hi)
    return Rounder(precision).neg(enc) if swap else enc


def check_psi_log_asymptote(grid: Sequence[NumberLike]) -> CheckRecord:
    """|psi(x) - log x| must stay below 1/x and decrease along the grid."""
    points = [to_rational(g) for g in sorted(grid, key=to_rational)]
    r = Rounder(128)
    deviations = []
    for xq in points:
        enc, _ = engine.enclose(Query(Target.psi(), xq, Fraction(1, 10**12)))
        gap = r.sub(enc, r.log_rational(xq))
        deviations.append(abs(float(gap.midpoint())))
    ok = all(d < 1.0 / float(x) for d, x in zip(deviations, points))
    ok = ok and all(a > b for a, b in zip(deviations, deviations[1:]))
    return CheckRecord(
        "psi_log_asymptote", {"grid": [str(p) for p in points]},
        "pass" if ok else "fail",
        " ".join(f"{d:.3e}" for d in deviations),
    )


# --- suites -------------------------------------------------------------------


def _record(name: str, params: dict, ok: bool, detail: str = "") -> CheckRecord:
    return CheckRecord(name, params, "pass" if ok else "fail", detail)


def suite_bernoulli() -> List[CheckRecord]:
    out = []
    ok = all(
        sum(comb(n + 1, k) * bernoulli.bernoulli_number(k) for k in range(n + 1)) == 0
        for n in range(1, 61)
    )
    out.append(_record("bernoulli_recurrence_zero_sum", {"n_max": 60}, ok))
    ok = all(bernoulli.bernoulli_number(n) == 0 for n in range(3, 62, 2))
    out.append(_record("bernoulli_odd_vanish", {"n_max": 61}, ok))
    ok = all(
        bernoulli.bernoulli_poly(n)(HALF)
        == -(1 - Fraction(2) ** (1 - n)) * bernoulli.bernoulli_number(n)
        for n in range(61)
    )
    out.append(_record("bernoulli_half_identity", {"n_max": 60}, ok))
    quarter = Fraction(1, 4)
    ok = all(
        bernoulli.bernoulli_poly(2 * n)(quarter)
        == Fraction(1, 4**n) * bernoulli.bernoulli_poly(2 * n)(HALF)
        for n in range(1, 51)
    )
    out.append(_record("bernoulli_quarter_identity", {"n_max": 50}, ok))
    lams = [Fraction(0), Fraction(1, 8), Fraction(1, 3), HALF, Fraction(3, 4), Fraction(1)]
    ok = all(
        bernoulli.eval_poly(n, 1 - lam) == (-1) ** n * bernoulli.eval_poly(n, lam)
        for n in range(41) for lam in lams
    )
    out.append(_record("bernoulli_reflection", {"n_max": 40}, ok))
    ok = all(bernoulli.bernoulli_poly(n).integral_over_unit_interval() == 0
             for n in range(1, 41))
    out.append(_record("bernoulli_unit_integral_zero", {"n_max": 40}, ok))
    prev_hi = None
    ok = True
    for m in range(2, 42, 2):
        br = bernoulli.lambda0(m)
        if br.hi >= Fraction(1, 4):
            ok = False
        if prev_hi is not None and not br.hi > prev_hi:
            ok = False
        prev_hi = br.hi
    out.append(_record("lambda0_below_quarter_monotone", {"m_max": 40}, ok))
    return out


_SIGN_TABLE_SPECS = (
    (Fraction(0), 2), (Fraction(0), 4), (HALF, 1), (HALF, 3),
    (Fraction(1, 4), 1), (Fraction(1, 4), 3), (Fraction(1, 8), 2),
)


def suite_signs() -> List[CheckRecord]:
    out = []
    for lam, n in _SIGN_TABLE_SPECS:
        for x in (2, 5, 20):
            out.append(check_remainder_sign(TruncationSpec(lam, n), x))
    for lam, n, x in ((HALF, 2, 5), (HALF, 1, 5), (Fraction(0), 3, 10)):
        out.append(check_functional_identity(TruncationSpec(lam, n), x))
    # The paper-level fact: the unclassifiable truncation (lam=1/4, n=2)
    # really does cross psi.  The crossing sits near x = 0.2956, so the scan
    # starts below it.
    grid = _log_grid(Fraction(26, 100), 20, 40)
    rep = find_sign_change(TruncationSpec(Fraction(1, 4), 2), grid)
    out.append(_record(
        "sign_change_exists", {"lambda": "1/4", "n": 2, "grid": "log(0.26, 20)x40"},
        rep.first_change is not None,
        f"bracket={tuple(str(b) for b in rep.first_change) if rep.first_change else None}",
    ))
    # grids for the half-shift specs must stay right of lambda = 1/2
    rep = find_sign_change(TruncationSpec(HALF, 1), _log_grid(Fraction(55, 100), 20, 24))
    out.append(_record("no_sign_change_lower", {"lambda": "1/2", "n": 1},
                       rep.first_change is None and set(rep.signs) == {"+"},
                       f"signs={set(rep.signs)}"))
    rep = find_sign_change(TruncationSpec(HALF, 3), _log_grid(Fraction(55, 100), 20, 24))
    out.append(_record("no_sign_change_upper", {"lambda": "1/2", "n": 3},
                       rep.first_change is None and set(rep.signs) == {"-"},
                       f"signs={set(rep.signs)}"))
    return out


def suite_monotone() -> List[CheckRecord]:
    out = []
    cases = (
        (TruncationSpec(HALF, 3), (Fraction(7, 10), 1, 2, 5, 10)),
        (TruncationSpec(Fraction(0), 4), (HALF, 1, 2, 3, 5)),
        (TruncationSpec(Fraction(0), 2), (HALF, 1, 2, 3, 5)),
    )
    for spec, grid in cases:
        reports = check_complete_monotonicity(spec, 6, grid)
        bad = {m: r.signs for m, r in reports.items() if set(r.signs) != {"+"}}
        out.append(_record(
            "complete_monotonicity_sampled",
            {"lambda": str(spec.lam), "n": spec.n, "m_max": 6,
             "grid": [str(to_rational(g)) for g in grid]},
            not bad, f"violations={bad}" if bad else "all signs certified +",
        ))
    return out


def suite_sandwich() -> List[CheckRecord]:
    grid = (Fraction(3, 5), 1, 2, Fraction(7, 2), 10)
    out = [gamma_sandwich_check(1, grid), gamma_sandwich_check(2, grid)]
    out.append(gamma_sandwich_nesting(1, 2, (2, Fraction(7, 2), 10)))
    # deeper nesting only where the series is still contracting
    out.append(gamma_sandwich_nesting(2, 3, (Fraction(7, 2), 10)))
    out.append(gamma_sandwich_nesting(3, 4, (Fraction(7, 2), 10)))
    return out


def suite_oracle() -> List[CheckRecord]:
    out = []
    pairs = [(1, 0), (2, 1), (Fraction(9), 0), (Fraction(3, 2), HALF),
             (5, 2), (10, 1), (Fraction(7, 3), Fraction(1, 3)),
             (4, 4), (Fraction(13, 10), Fraction(3, 10)), (6, Fraction(5, 2))]
    ok_all = True
    for a, b in pairs:
        aq, bq = to_rational(a), to_rational(b)
        oracle = psi_diff_series(aq, bq, 20000)
        pa, _ = engine.enclose(Query(Target.psi(), aq + 1, Fraction(1, 10**20)))
        pb, _ = engine.enclose(Query(Target.psi(), bq + 1, Fraction(1, 10**20)))
        diff = Rounder(128).sub(pa, pb)
        ok_all = ok_all and diff.overlaps(oracle)
    out.append(_record("series_oracle_agreement", {"pairs": len(pairs), "terms": 20000},
                       ok_all))
    pa, _ = engine.enclose(Query(Target.psi(), 2, Fraction(1, 4 * 10**26)))
    pb, _ = engine.enclose(Query(Target.psi(), 1, Fraction(1, 4 * 10**26)))
    diff = Rounder(192).sub(pa, pb)
    out.append(_record(
        "functional_equation_unit", {"x": 2, "y": 1},
        diff.contains(1) and diff.width() < Fraction(1, 10**25),
        f"width={float(diff.width()):.2e}"))
    out.append(check_psi_log_asymptote((10, 100, 1000, 10**4)))
    out.append(check_tail_representation(TruncationSpec(HALF, 2), 5, periods=50))
    out.append(check_tail_representation(TruncationSpec(Fraction(0), 2), 10, periods=100))
    out.append(check_tail_representation(TruncationSpec(HALF, 1), 2, periods=200))
    return out


def _log_grid(lo: Fraction, hi: Fraction, count: int) -> List[Fraction]:
    """Geometrically spaced rational grid from lo to hi inclusive."""
    lo, hi = to_rational(lo), to_rational(hi)
    ratio = float(hi / lo) ** (1.0 / (count - 1))
    out = [lo]
    for i in range(1, count - 1):
        out.append(to_rational(round(float(lo) * ratio**i, 12)))
    out.append(hi)
    return out


SUITES = {
    "bernoulli": suite_bernoulli,
    "signs": suite_signs,
    "monotone": suite_monotone,
    "sandwich": suite_sandwich,
    "oracle": suite_oracle,
}


def run_suite(name: str) -> List[CheckRecord]:
    if name == "all":
        records = []
        for key in SUITES:
            records.extend(SUITES[key]())
        return records
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name]()
