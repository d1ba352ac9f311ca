"""Command-line front end.

Subcommands: ``eval`` (certified enclosure of psi / polygamma / log-gamma /
gamma), ``plan`` (show the evaluation recipe without running it), ``verify``
(oracle and identity suites as JSON lines), ``table`` (the worked
high-precision psi(1) reproduction), and ``bernoulli`` (exact rational
queries).

Exit codes: 0 success, 1 verification failure, 2 domain or flag error,
3 unreachable tolerance.  Printed enclosure endpoints are outward-rounded
decimals, so a printed bracket is still a certificate.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import bernoulli, engine, verify
from .engine import Plan, Query, Target
from .errors import DomainError, ToleranceError
from .expansions import TruncationSpec, eval_psi_series, next_nonzero_term_bound
from .rounding import Enclosure, to_rational

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_DOMAIN = 2
EXIT_TOLERANCE = 3

# Engine tolerance is shaved slightly so the outward-printed bracket still
# fits the user's eps (printing adds at most 2 * 10^-places).
_EPS_SHAVE = Fraction(1023, 1024)


def _parse_number(text: str) -> Fraction:
    try:
        return to_rational(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse number {text!r}: {exc}") from None


def _decimal_floor(q: Fraction, places: int) -> str:
    scaled = q * 10**places
    n = scaled.numerator // scaled.denominator
    return _render_fixed(n, places)


def _decimal_ceil(q: Fraction, places: int) -> str:
    scaled = q * 10**places
    n = -((-scaled.numerator) // scaled.denominator)
    return _render_fixed(n, places)


def _decimal_nearest(q: Fraction, places: int) -> str:
    scaled = q * 10**places
    n = round(scaled)
    return _render_fixed(n, places)


def _render_fixed(n: int, places: int) -> str:
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _places_for(eps: Fraction) -> int:
    if eps >= 1:
        return 2
    places = 0
    scale = Fraction(1)
    while scale > eps and places < 100000:
        scale /= 10
        places += 1
    return places + 4


def _enclosure_strings(enc: Enclosure, places: int) -> tuple[str, str, str]:
    lo_q = to_rational(enc.lo)
    hi_q = to_rational(enc.hi)
    lo_s = _decimal_floor(lo_q, places)
    hi_s = _decimal_ceil(hi_q, places)
    width = hi_q - lo_q
    return lo_s, hi_s, _float_string(width)


def _float_string(q: Fraction) -> str:
    if q == 0:
        return "0"
    try:
        f = float(q)
    except OverflowError:
        f = 0.0
    if f not in (0.0, float("inf"), float("-inf")):
        return repr(f)
    # out of double range: build a three-digit decimal mantissa by hand
    sign = "-" if q < 0 else ""
    num, den = abs(q.numerator), q.denominator
    e = len(str(num)) - len(str(den))
    if num * 10 ** max(0, -e) < den * 10 ** max(0, e):
        e -= 1
    scaled = num * 10 ** max(0, 2 - e) // (den * 10 ** max(0, e - 2))
    digits = str(scaled)[:3]
    return f"{sign}{digits[0]}.{digits[1:] or '0'}e{e}"


def _rational_string(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _plan_payload(pl: Plan) -> dict:
    payload = {
        "lambda": _rational_string(pl.lam),
        "n_lower": pl.n_lower,
        "n_upper": pl.n_upper,
        "k": pl.k,
        "precision_bits": pl.precision,
        "nonzero_terms": pl.nonzero_terms(),
    }
    if pl.log_domain_eps is not None:
        payload["log_domain_eps"] = _float_string(pl.log_domain_eps)
    return payload


def _target_from_args(args) -> Target:
    if args.function == "psi":
        return Target.psi(0)
    if args.function == "polygamma":
        return Target.psi(args.order)
    if args.function == "loggamma":
        return Target.loggamma()
    return Target.gamma()


def _query_from_args(args) -> tuple[Query, Fraction]:
    x = _parse_number(args.x)
    if args.eps is not None:
        eps = _parse_number(args.eps)
    else:
        eps = Fraction(1, 10**args.digits)
    if eps <= 0:
        raise DomainError("tolerance must be positive")
    target = _target_from_args(args)
    lam = _parse_number(args.lam) if args.lam is not None else None
    query = Query(
        target,
        x,
        eps * _EPS_SHAVE,
        lam=lam,
        n_anchor=args.n,
        k=args.k,
        precision=args.precision,
    )
    return query, eps


def _function_label(target: Target) -> str:
    return target.describe()


def cmd_eval(args) -> int:
    query, eps = _query_from_args(args)
    t0 = time.monotonic()
    enc, pl = engine.enclose(query)
    elapsed_ms = (time.monotonic() - t0) * 1000.0
    places = _places_for(eps)
    lo_s, hi_s, width_s = _enclosure_strings(enc, places)
    record = {
        "function": _function_label(query.target),
        "x": str(args.x),
        "lo": lo_s,
        "hi": hi_s,
        "width": width_s,
        "eps": _float_string(eps),
        "plan": _plan_payload(pl),
        "elapsed_ms": round(elapsed_ms, 3),
    }
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(f"function   {record['function']}  at x = {record['x']}")
        print(f"enclosure  [{lo_s}, {hi_s}]")
        print(f"width      {width_s}  (requested eps {record['eps']})")
        p = record["plan"]
        extra = f" log_domain_eps={p['log_domain_eps']}" if "log_domain_eps" in p else ""
        print(
            f"plan       lambda={p['lambda']} N=({p['n_lower']},{p['n_upper']}) "
            f"K={p['k']} precision={p['precision_bits']}b terms={p['nonzero_terms']}{extra}"
        )
        print(f"elapsed    {record['elapsed_ms']} ms")
    return EXIT_OK


def cmd_plan(args) -> int:
    query, _ = _query_from_args(args)
    pl = engine.plan(query)
    print(json.dumps(_plan_payload(pl), sort_keys=True))
    return EXIT_OK


def cmd_verify(args) -> int:
    records = verify.run_suite(args.suite)
    failed = 0
    for rec in records:
        print(rec.to_json())
        if rec.status == "fail":
            failed += 1
        elif rec.status == "inconclusive" and not args.allow_inconclusive:
            failed += 1
    summary = f"{len(records)} checks, {failed} failing"
    print(summary, file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAIL


def cmd_table(args) -> int:
    half = Fraction(1, 2)
    h99 = sum(Fraction(1, k) for k in range(1, 100))
    print("high-accuracy psi(1) via a shift to argument 100")
    print(f"  psi(1) = psi(100) - sum(1/k, k=1..99); the sum is {h99.numerator}/{h99.denominator}")
    print(f"         = {_decimal_nearest(h99, 24)}...")

    # the four nonzero series coefficients of the half-shift truncation
    coeffs = [-bernoulli.eval_poly(2 * j, half) / (2 * j) for j in range(1, 5)]
    expected = [Fraction(1, 24), Fraction(-7, 960), Fraction(31, 8064), Fraction(-127, 30720)]
    assert coeffs == expected, "half-shift coefficients drifted from their known values"
    terms = " ".join(f"{'+' if c > 0 else '-'} ({_rational_string(abs(c))})/99.5^{2*j}"
                     for j, c in enumerate(coeffs, start=1))
    print(f"  series at 99.5: log(99.5) {terms}")
    spec = TruncationSpec(half, 9)
    f9 = eval_psi_series(spec, 100, 160)
    print(f"  four-term truncation at 100: [{_decimal_floor(to_rational(f9.lo), 26)}, "
          f"{_decimal_ceil(to_rational(f9.hi), 26)}]")

    bound = Fraction(511, 67584) * Fraction(1, Fraction(199, 2) ** 10)
    below = bound < Fraction(1, 10**22)
    nz = next_nonzero_term_bound(spec, 100, "psi")
    print(f"  first omitted term: (511/67584) * 99.5^-10 = {_float_string(bound)} "
          f"{'<' if below else '>='} 1e-22")
    if not below:
        return EXIT_VERIFY_FAIL
    assert to_rational(nz) >= bound

    query = Query(Target.psi(), 1, Fraction(1, 10**21), lam=half, n_anchor=9, k=99)
    enc, pl = engine.enclose(query)
    mid20 = _decimal_nearest(to_rational(enc.midpoint()), 20)
    print(f"  psi(1) enclosure: [{_decimal_floor(to_rational(enc.lo), 24)}, "
          f"{_decimal_ceil(to_rational(enc.hi), 24)}]")
    print(f"  psi(1) to 20 places: {mid20}")

    if args.deep:
        t0 = time.monotonic()
        deep_q = Query(Target.psi(), 1, Fraction(1, 10**270), lam=half, k=100,
                       precision=1100)
        enc_d, pl_d = engine.enclose(deep_q)
        width = to_rational(enc_d.width())
        ok = width < Fraction(1, 10**270)
        print(f"  deep run: K=100, {pl_d.nonzero_terms()} series terms, "
              f"{pl_d.precision}-bit precision")
        print(f"  deep width {_float_string(width)} {'<' if ok else '>='} 1e-270 "
              f"({time.monotonic() - t0:.1f}s)")
        if not ok:
            return EXIT_VERIFY_FAIL
    return EXIT_OK


def cmd_bernoulli(args) -> int:
    n = args.n
    if n < 0:
        raise DomainError("index must be non-negative")
    if args.lambda0:
        if n < 2 or n % 2 != 0:
            raise DomainError("--lambda0 needs an even index >= 2")
        tol = _parse_number(args.tol) if args.tol else bernoulli.DEFAULT_ROOT_TOL
        br = bernoulli.lambda0(n, tol)
        print(f"root of B_{n} in [0, 1/2]:")
        print(f"  lo = {_rational_string(br.lo)} = {_decimal_nearest(br.lo, 30)}")
        print(f"  hi = {_rational_string(br.hi)} = {_decimal_nearest(br.hi, 30)}")
        print(f"  width = {_float_string(br.width())}")
        return EXIT_OK
    if args.at is not None:
        lam = _parse_number(args.at)
        value = bernoulli.eval_poly(n, lam)
        label = f"B_{n}({args.at})"
    else:
        value = bernoulli.bernoulli_number(n)
        label = f"B_{n}"
    print(f"{label} = {_rational_string(value)} = {_decimal_nearest(value, 30)}")
    return EXIT_OK


def _add_eval_flags(sub) -> None:
    sub.add_argument("--function", required=True,
                     choices=("psi", "loggamma", "gamma", "polygamma"))
    sub.add_argument("--order", type=int, default=1,
                     help="derivative order for polygamma (psi^(m)); default 1")
    sub.add_argument("--x", required=True, help="argument, decimal or p/q")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--eps", help="absolute tolerance, decimal or p/q")
    group.add_argument("--digits", type=int, help="decimal digits; eps = 10^-digits")
    sub.add_argument("--lambda", dest="lam", default=None,
                     help="series shift in [0, 1/2], rational")
    sub.add_argument("--N", dest="n", type=int, default=None,
                     help="anchor truncation order for the bracketing pair")
    sub.add_argument("--K", dest="k", type=int, default=None,
                     help="functional-equation shift count")
    sub.add_argument("--precision", type=int, default=None, help="working precision bits")
    sub.add_argument("--json", action="store_true", help="one JSON record on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psibound",
        description="certified enclosures of digamma, polygamma, log-gamma and gamma",
    )
    parser.add_argument("--cache-dir", default=None,
                        help="directory for the Bernoulli memo spill file")
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="enclose a value to a requested tolerance")
    _add_eval_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_plan = subs.add_parser("plan", help="show the evaluation plan without running it")
    _add_eval_flags(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_verify = subs.add_parser("verify", help="run oracle/property suites")
    p_verify.add_argument("--suite", default="all",
                          choices=("bernoulli", "signs", "monotone", "sandwich",
                                   "oracle", "all"))
    p_verify.add_argument("--allow-inconclusive", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_table = subs.add_parser("table", help="reproduce the worked psi(1) computation")
    p_table.add_argument("--deep", action="store_true",
                         help="also run the ~300-term, >=1000-bit variant")
    p_table.set_defaults(func=cmd_table)

    p_bern = subs.add_parser("bernoulli", help="exact Bernoulli numbers and polynomials")
    p_bern.add_argument("--n", type=int, required=True)
    p_bern.add_argument("--at", default=None, help="evaluate B_n at this rational")
    p_bern.add_argument("--lambda0", action="store_true",
                        help="certified root bracket of B_n on [0, 1/2] (even n)")
    p_bern.add_argument("--tol", default=None, help="bracket width tolerance (rational)")
    p_bern.set_defaults(func=cmd_bernoulli)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache_file = None
    if args.cache_dir:
        cache_file = Path(args.cache_dir) / "bernoulli_cache.txt"
        if cache_file.exists():
            bernoulli.load_cache(cache_file)
    try:
        code = args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.best is not None:
            print(f"best enclosure found: {exc.best}", file=sys.stderr)
        return EXIT_TOLERANCE
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        bernoulli.dump_cache(cache_file)
    return code


if __name__ == "__main__":
    sys.exit(main())
