"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 capped or indeterminate result,
3 a verification check ran and failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .bfunction import CONDITIONAL, b_roots, cross_check, root_digit_table
from .errors import CappedError, IndeterminateError, PolySyntaxError
from .euler import level_module, separated, survivors_check, truncated_roots
from .frobenius import MAX_LEVEL, Caps
from .padics import (
    conjugates,
    expand_inverse_p,
    format_rational,
    in_Zp_local,
    is_strictly_periodic,
    negate_to_padic,
    parse_rational,
)
from .polyalg import check_prime, infer_vars, parse_poly
from .testideal import ChainCache, INTERVAL, default_emax, jumping_exponents, nu_values

EXIT_OK, EXIT_INPUT, EXIT_INCOMPLETE, EXIT_FAILED = 0, 1, 2, 3
BYTES_PER_TERM = 200


@dataclass(frozen=True)
class RunConfig:
    p: int
    poly: str
    vars: tuple
    e_max: int
    l_max: int
    format: str
    caps: Caps
    jobs: int = 1
    strides: int = 1

    def __post_init__(self):
        if self.e_max < 2:
            raise ValueError("--emax must be at least 2")
        if not 0 <= self.l_max <= MAX_LEVEL:
            raise ValueError(f"--lmax must lie in [0, {MAX_LEVEL}]")


def _caps(args) -> Caps:
    terms = args.cap_terms
    budget = os.environ.get("BFUN_CAP_MB")
    if budget:
        terms = min(terms, int(float(budget) * 2 ** 20) // BYTES_PER_TERM)
    return Caps(max_degree=args.cap_degree, max_terms=max(1, terms))


def _config(args) -> RunConfig:
    p = check_prime(args.prime)
    text = getattr(args, "poly", "")
    if args.vars:
        vars = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    else:
        vars = infer_vars(text)
    return RunConfig(
        p=p,
        poly=text,
        vars=vars,
        e_max=args.emax if args.emax is not None else default_emax(p),
        l_max=args.lmax,
        format=args.format,
        caps=_caps(args),
        jobs=args.jobs,
        strides=getattr(args, "strides", 1),
    )


def _setup(args):
    cfg = _config(args)
    f = parse_poly(cfg.poly, cfg.vars, cfg.p)
    if f.is_constant():
        raise ValueError("f must be nonconstant")
    return cfg, f, ChainCache(f, cfg.caps, cfg.jobs)


def _emit(cfg, payload, lines, out):
    if cfg.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def _header(cfg, f):
    return f"f = {f} over F_{cfg.p}, variables {', '.join(cfg.vars)}"


def cmd_jumps(args, out):
    cfg, f, cache = _setup(args)
    try:
        reports = jumping_exponents(f, cfg.e_max, cache)
        nu = nu_values(f, cfg.e_max, cache) if f.constant_term() == 0 else []
    except CappedError as exc:
        payload = {"f": cfg.poly, "p": cfg.p, "jumps": [], "nu": [], "capped": True}
        _emit(cfg, payload, [_header(cfg, f), f"CAPPED: {exc}"], out)
        return EXIT_INCOMPLETE
    payload = {
        "f": cfg.poly,
        "p": cfg.p,
        "jumps": [r.to_json() for r in reports],
        "nu": nu,
        "capped": False,
    }
    lines = [_header(cfg, f), f"F-jumping exponents in (0,1] (e_max = {cfg.e_max}):"]
    for r in reports:
        value = "-" if r.exact is None else format_rational(r.exact)
        lines.append(
            f"  {value:>8}  {r.status:<8}  cell ({format_rational(r.lo)}, {format_rational(r.hi)}]"
        )
    if nu:
        lines.append("nu(e), e = 1.." + str(cfg.e_max) + ": " + " ".join(map(str, nu)))
    _emit(cfg, payload, lines, out)
    return EXIT_OK if all(r.status != INTERVAL for r in reports) else EXIT_INCOMPLETE


def cmd_broots(args, out):
    cfg, f, cache = _setup(args)
    data = b_roots(f, cfg.e_max, cache)
    lines = [_header(cfg, f), f"roots of b_f (status {data.status}):"]
    for root, ideal in zip(data.roots, root_digit_table(data)):
        eig = ",".join(map(str, ideal.eigenvalues(max(4, len(root.padic.period)))))
        lines.append(
            f"  {format_rational(root.value):>8}  p-adic period {list(root.padic.period)}"
            f"  binom(s,p^i) = {eig},..."
        )
    if data.status == CONDITIONAL:
        lines.append("blocking intervals (not certified):")
        for r in data.blocking:
            lines.append(f"  ({format_rational(r.lo)}, {format_rational(r.hi)}]")
    payload = data.to_json()
    if data.blocking:
        payload["blocking"] = [r.to_json() for r in data.blocking]
    _emit(cfg, payload, lines, out)
    return EXIT_OK if data.status != CONDITIONAL else EXIT_INCOMPLETE


def cmd_expand(args, out):
    p = check_prime(args.prime)
    r = parse_rational(args.rational)
    x = expand_inverse_p(r, p)
    strict = is_strictly_periodic(x)
    conj = sorted(conjugates(r, p)) if strict else None
    neg = negate_to_padic(r, p) if in_Zp_local(r, p) else None
    payload = {
        "r": format_rational(r),
        "expansion": x.to_json(),
        "strictly_periodic": strict,
        "in_Zp": in_Zp_local(r, p),
        "conjugates": None if conj is None else [format_rational(c) for c in conj],
        "negation": None if neg is None else neg.to_json(),
    }
    lines = [
        f"r = {format_rational(r)}, p = {p}",
        f"1/p-adic expansion: preperiod {list(x.preperiod)} period {list(x.period)}",
        f"strictly periodic: {str(strict).lower()}",
    ]
    if conj is not None:
        lines.append("conjugates: " + ", ".join(format_rational(c) for c in conj))
    if neg is not None:
        lines.append(f"-r in Z_{p}: preperiod {list(neg.preperiod)} period {list(neg.period)}")
    if args.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_oracle(args, out):
    cfg, f, cache = _setup(args)
    modules = [level_module(f, l, cache) for l in range(cfg.l_max + 1)]
    lines = [_header(cfg, f)]
    for m in modules:
        digits = sorted(truncated_roots(m))
        lines.append(f"level {m.l}: nonzero summands {m.support()}, digit vectors {[list(d) for d in digits]}")
    payload = {
        "f": cfg.poly,
        "p": cfg.p,
        "levels": [m.to_json() for m in modules],
        "truncated_roots": [sorted(list(d) for d in truncated_roots(m)) for m in modules],
        "survivors": None,
    }
    code = EXIT_OK
    try:
        exps = [r.exact for r in cache.reports(cfg.e_max)]
        if any(e is None for e in exps):
            raise IndeterminateError("some jumping exponents are intervals")
        first = next((l for l in range(cfg.l_max + 1) if separated(exps, cfg.p, l)), None)
        if first is None:
            raise IndeterminateError(f"no level up to {cfg.l_max} separates the exponents")
        surv = survivors_check(f, first, cfg.strides, cfg.e_max, cache)
        payload["survivors"] = surv.to_json()
        lines.append(f"survivors from level {first} (d = {surv.period_lcm}): {surv.status}")
        for e in surv.entries:
            state = "survives" if e.survives else "dies"
            lines.append(
                f"  summand {e.m} <- {format_rational(e.exponent)}: {state}, tracked {[list(t) for t in e.tracked]}"
            )
        if surv.status != "PASS":
            code = EXIT_FAILED
    except IndeterminateError as exc:
        lines.append(f"survivors: INDETERMINATE ({exc})")
        code = EXIT_INCOMPLETE
    _emit(cfg, payload, lines, out)
    return code


def cmd_check(args, out):
    cfg, f, cache = _setup(args)
    report = cross_check(f, cfg.l_max, cfg.e_max, cfg.strides, cache)
    lines = [_header(cfg, f), f"cross-check: {report.status}"]
    lines.append("roots: " + ", ".join(format_rational(v) for v in report.roots.values()))
    for c in report.levels:
        if not c.separated:
            lines.append(f"  level {c.l}: cells not separated, skipped")
        else:
            lines.append(
                f"  level {c.l}: observed {sorted(list(v) for v in c.observed)}"
                f" expected {sorted(list(v) for v in c.expected)} -> {'ok' if c.match else 'MISMATCH'}"
            )
    for e in report.survivors.entries:
        state = "survives" if e.survives else "dies"
        lines.append(f"  summand {e.m} <- {format_rational(e.exponent)} ({'in' if e.in_zp else 'not in'} Z_({cfg.p})): {state}")
    _emit(cfg, report.to_json(), lines, out)
    return EXIT_OK if report.status == "PASS" else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--prime", type=int, required=True)
    common.add_argument("--vars", help="comma-separated variable order (default: sorted names in f)")
    common.add_argument("--emax", type=int, default=None, help="finest Frobenius level (default 4 if p <= 3, else 3)")
    common.add_argument("--lmax", type=int, default=2)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--cap-degree", type=int, default=Caps.max_degree)
    common.add_argument("--cap-terms", type=int, default=Caps.max_terms)

    parser = argparse.ArgumentParser(
        prog="bfunp",
        description="F-jumping exponents and b-function roots of polynomials over F_p.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jumps", parents=[common], help="F-jumping exponents and nu values")
    p.add_argument("poly")
    p.set_defaults(func=cmd_jumps)

    p = sub.add_parser("broots", parents=[common], help="roots of the b-function")
    p.add_argument("poly")
    p.set_defaults(func=cmd_broots)

    p = sub.add_parser("expand", parents=[common], help="1/p-adic and p-adic digits of a rational")
    p.add_argument("rational")
    p.set_defaults(func=cmd_expand)

    for name, func, text in (
        ("oracle", cmd_oracle, "level modules, truncated roots, survivors"),
        ("check", cmd_check, "cross-check roots against the level modules"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("poly")
        p.add_argument("--strides", type=int, default=1)
        p.set_defaults(func=func)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (CappedError, IndeterminateError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        for r in getattr(exc, "blocking", ()):
            print(f"  blocking interval ({format_rational(r.lo)}, {format_rational(r.hi)}]", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (PolySyntaxError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
