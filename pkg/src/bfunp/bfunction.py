"""Roots of the characteristic-p b-function.

The b-function is the annihilator of N_f in the binomial-coefficient algebra
F_p[{s choose p^e} : e >= 0].  It is stored extensionally, as the finite list
of maximal ideals containing it.  Its roots are the numbers -lambda for the
F-jumping exponents lambda in (0, 1] whose denominator is prime to p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IndeterminateError
from .euler import (
    SurvivorsReport,
    level_module,
    separated,
    survivors_check,
    truncated_roots,
)
from .padics import (
    MaximalIdealSpec,
    PAdicNumber,
    expand_inverse_p,
    format_rational,
    in_Zp_local,
    negate_to_padic,
    padic_to_rational,
)
from .polyalg import Poly
from .testideal import EXACT, INTERVAL, ChainCache, _cache_for, default_emax

CONDITIONAL = "CONDITIONAL"


@dataclass(frozen=True)
class BRoot:
    value: Fraction
    padic: PAdicNumber
    source: Fraction

    def __post_init__(self):
        if self.value != -self.source or not -1 <= self.value < 0:
            raise ValueError("a root is -lambda with lambda in (0, 1]")
        if self.padic.preperiod:
            raise ValueError("root expansions are purely periodic")
        if padic_to_rational(self.padic) != self.value:
            raise ValueError("p-adic digits do not match the root")

    def to_json(self) -> dict:
        return {
            "value": format_rational(self.value),
            "period": list(self.padic.period),
            "preperiod": list(self.padic.preperiod),
        }


@dataclass(frozen=True)
class BFunctionData:
    p: int
    roots: tuple
    status: str
    blocking: tuple = field(default=(), compare=False)

    def values(self) -> list:
        return [r.value for r in self.roots]

    def to_json(self) -> dict:
        return {"roots": [r.to_json() for r in self.roots], "status": self.status}


def b_roots(f: Poly, e_max: int | None = None, cache: ChainCache | None = None) -> BFunctionData:
    """Roots of b_f from the EXACT jumping exponents in (0, 1] ∩ Z_(p).

    The status is CONDITIONAL when some exponent is known only up to an interval;
    those intervals are kept in ``blocking``.
    """
    cache = _cache_for(f, cache)
    p = f.p
    reports = cache.reports(e_max or default_emax(p))
    roots = [
        BRoot(-r.exact, negate_to_padic(r.exact, p), r.exact)
        for r in reports
        if r.status == EXACT and in_Zp_local(r.exact, p)
    ]
    roots.sort(key=lambda r: r.value)
    blocking = tuple(r for r in reports if r.status == INTERVAL)
    return BFunctionData(p, tuple(roots), CONDITIONAL if blocking else EXACT, blocking)


def root_digit_table(data: BFunctionData) -> list:
    """For each root, the maximal ideal ({s choose p^i} = digit_i) it names."""
    return [MaximalIdealSpec(r.padic) for r in data.roots]


@dataclass(frozen=True)
class LevelCheck:
    l: int
    separated: bool
    observed: frozenset = frozenset()
    expected: frozenset = frozenset()

    @property
    def match(self) -> bool:
        return self.separated and self.observed == self.expected

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "separated": self.separated,
            "observed": sorted(list(v) for v in self.observed),
            "expected": sorted(list(v) for v in self.expected),
            "match": self.match,
        }


@dataclass(frozen=True)
class CrossCheckReport:
    levels: tuple
    survivors: SurvivorsReport
    surviving: frozenset
    roots: BFunctionData

    @property
    def status(self) -> str:
        checked = [c for c in self.levels if c.separated]
        ok = (
            bool(checked)
            and all(c.match for c in checked)
            and self.survivors.status == "PASS"
            and self.surviving == frozenset(r.source for r in self.roots.roots)
        )
        return "PASS" if ok else "FAIL"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "roots": self.roots.to_json(),
            "levels": [c.to_json() for c in self.levels],
            "survivors": self.survivors.to_json(),
        }


def expected_digit_vectors(data: BFunctionData, exponents, l: int) -> frozenset:
    """Digit vectors of the level-l summands as predicted by the digit arithmetic.

    A root with p-adic period length d contributes the window of its digits
    starting at position (-(l+1)) mod d; when d divides l+1 this is the plain
    prefix.  Exponents outside Z_(p) are not roots and contribute their
    reversed truncated 1/p-digits.
    """
    p = data.p
    out = set()
    for root in data.roots:
        d = len(root.padic.period)
        t = -(l + 1) % d
        out.add(tuple(root.padic.digit(t + i) for i in range(l + 1)))
    for lam in exponents:
        if not in_Zp_local(lam, p):
            out.add(tuple(reversed(expand_inverse_p(lam, p).digits(l + 1))))
    return frozenset(out)


def cross_check(
    f: Poly,
    l_max: int,
    e_max: int | None = None,
    strides: int = 1,
    cache: ChainCache | None = None,
) -> CrossCheckReport:
    """Compare the b-function roots with the directly built level modules."""
    cache = _cache_for(f, cache)
    p = f.p
    data = b_roots(f, e_max, cache)
    if data.status != EXACT:
        raise IndeterminateError("b-function roots are conditional", data.blocking)
    exponents = [r.exact for r in cache.reports(e_max or default_emax(p))]
    levels = []
    for l in range(l_max + 1):
        if not separated(exponents, p, l):
            levels.append(LevelCheck(l, False))
            continue
        observed = truncated_roots(level_module(f, l, cache))
        levels.append(LevelCheck(l, True, observed, expected_digit_vectors(data, exponents, l)))
    first = next((c.l for c in levels if c.separated), None)
    if first is None:
        raise IndeterminateError(f"no level up to {l_max} separates the jumping exponents")
    surv = survivors_check(f, first, strides, e_max, cache)
    surviving = frozenset(e.exponent for e in surv.entries if e.survives)
    return CrossCheckReport(tuple(levels), surv, surviving, data)
