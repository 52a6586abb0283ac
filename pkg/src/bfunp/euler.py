"""The finite-level modules N_f^(l) and the higher Euler operators acting on them.

At level l, N_f^(l) splits as the sum over 0 <= n < p^(l+1) of
D^(l) f^n / D^(l) f^(n+1), and D^(l) f^n is the [p^(l+1)] bracket power of
I_(l+1)((f^n)).  Summand n is therefore nonzero exactly when the level-(l+1)
chain drops at n+1.  If n = sum a_e p^e, then {s choose p^e} acts on summand n by
a_e and the higher Euler operator nu_e acts by -a_e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IndeterminateError
from .frobenius import bracket_power, check_level, d_ideal
from .padics import expand_inverse_p, format_rational, in_Zp_local, truncation_index
from .polyalg import Ideal, Poly
from .testideal import INTERVAL, ChainCache, _cache_for, default_emax


def base_p_digits(n: int, p: int, length: int) -> tuple:
    """(a_0, ..., a_(length-1)) with n = sum a_e p^e."""
    out = []
    for _ in range(length):
        n, a = divmod(n, p)
        out.append(a)
    if n:
        raise ValueError("n does not fit in the requested number of digits")
    return tuple(out)


@dataclass(frozen=True)
class EulerAction:
    """Eigenvalues of the Euler operators on one summand."""

    p: int
    eigen: tuple  # a_e for e = 0..l

    def binom(self, e: int) -> int:
        """Scalar of {s choose p^e}."""
        return self.eigen[e]

    def nu(self, e: int) -> int:
        """Scalar of nu_e, as a residue mod p."""
        return -self.eigen[e] % self.p


@dataclass(frozen=True)
class Summand:
    n: int
    upper: Ideal = field(repr=False)
    lower: Ideal = field(repr=False)
    nonzero: bool
    digits: tuple

    def euler(self, p: int) -> EulerAction:
        return EulerAction(p, self.digits)

    def to_json(self) -> dict:
        return {"n": self.n, "digits": list(self.digits), "nonzero": self.nonzero}


@dataclass(frozen=True)
class LevelModule:
    f: Poly
    l: int
    summands: tuple

    @property
    def p(self) -> int:
        return self.f.p

    def support(self) -> list:
        return [s.n for s in self.summands if s.nonzero]

    def to_json(self) -> dict:
        return {"l": self.l, "summands": [s.to_json() for s in self.summands]}


def level_module(f: Poly, l: int, cache: ChainCache | None = None) -> LevelModule:
    check_level(l)
    cache = _cache_for(f, cache)
    chain = cache.chain(l + 1)
    p = f.p
    jumps = set(chain.jumps)
    summands = tuple(
        Summand(
            n,
            chain.ideals[n],
            chain.ideals[n + 1],
            (n + 1) in jumps,
            base_p_digits(n, p, l + 1),
        )
        for n in range(p ** (l + 1))
    )
    return LevelModule(f, l, summands)


def truncated_roots(module: LevelModule) -> frozenset:
    """Digit vectors (a_0..a_l) of the nonzero summands.

    The level-l annihilator is the intersection over these vectors of the ideals
    ({s choose p^e} - a_e : e <= l).
    """
    return frozenset(s.digits for s in module.summands if s.nonzero)


def structure_map_image(f: Poly, l: int, m: int, cache: ChainCache | None = None) -> list:
    """Summands of N_f^(l+1) on which the image of f^m in summand m is nonzero.

    The inclusion M_f^(l) -> M_f^(l+1) sends g to
    g * sum_j (-1)^j C(p-1, j) f^(j p^(l+1)), so the j-th piece lands in summand
    m + j p^(l+1).  Each piece is tested against D^(l+1) f^(n+1) directly.
    """
    cache = _cache_for(f, cache)
    p = f.p
    q = p ** (l + 1)
    if not 0 <= m < q:
        raise ValueError(f"m = {m} outside [0, {q})")
    hits = []
    for j in range(p):
        coeff = (-1) ** j * math.comb(p - 1, j) % p
        if not coeff:
            continue
        n = m + j * q
        piece = cache.powers[n] * coeff
        target = bracket_power(d_ideal(f, n + 1, l + 1, cache.powers), l + 2)
        if not target.contains(piece):
            hits.append(n)
    return hits


@dataclass(frozen=True)
class SurvivorEntry:
    m: int
    digits: tuple
    exponent: Fraction
    in_zp: bool
    classes: tuple  # per stride: nonzero n at level l+i with n = m mod p^(l+1)
    tracked: tuple  # per stride: members of ``classes`` whose leading digits are m
    survives: bool
    consistent: bool

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "digits": list(self.digits),
            "exponent": format_rational(self.exponent),
            "in_Zp": self.in_zp,
            "classes": [list(c) for c in self.classes],
            "tracked": [list(t) for t in self.tracked],
            "survives": self.survives,
            "consistent": self.consistent,
        }


@dataclass(frozen=True)
class SurvivorsReport:
    l: int
    period_lcm: int
    strides: int
    entries: tuple

    @property
    def status(self) -> str:
        return "PASS" if all(e.consistent for e in self.entries) else "FAIL"

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "d": self.period_lcm,
            "strides": self.strides,
            "status": self.status,
            "entries": [e.to_json() for e in self.entries],
        }


def exact_exponents(cache: ChainCache, e_max: int) -> list:
    reports = cache.reports(e_max)
    blocking = [r for r in reports if r.status == INTERVAL]
    if blocking:
        raise IndeterminateError(
            "some jumping exponents are only known up to an interval", blocking
        )
    return [r.exact for r in reports]


def period_lcm(exponents, p: int) -> int:
    d = 1
    for lam in exponents:
        if in_Zp_local(lam, p):
            d = math.lcm(d, len(expand_inverse_p(lam, p).period))
    return d


def separated(exponents, p: int, l: int) -> bool:
    """Whether each level-l cell holds at most one of ``exponents``."""
    cells = [truncation_index(lam, p, l + 1) for lam in exponents]
    return len(set(cells)) == len(cells)


def survivors_check(
    f: Poly,
    l: int,
    strides: int,
    e_max: int | None = None,
    cache: ChainCache | None = None,
) -> SurvivorsReport:
    """Follow each nonzero level-l summand through the structure maps.

    For i = d, 2d, ..., strides*d (d the lcm of the period lengths of the
    exponents in Z_(p)), the image of summand m lies in the summands n of level
    l+i with n = m mod p^(l+1).  The member continuing m's own exponent also
    has m as its leading digits.  A summand survives when exactly one such
    member exists at every stride, which should happen exactly for exponents
    in Z_(p).
    """
    check_level(l)
    if strides < 1:
        raise ValueError("strides must be >= 1")
    cache = _cache_for(f, cache)
    p = f.p
    exponents = exact_exponents(cache, e_max or default_emax(p))
    if not separated(exponents, p, l):
        raise IndeterminateError(f"jumping exponents are not separated at level {l}")
    d = period_lcm(exponents, p)
    base = level_module(f, l, cache)
    q = p ** (l + 1)
    owner = {truncation_index(lam, p, l + 1): lam for lam in exponents}
    higher = {}
    for k in range(1, strides + 1):
        i = k * d
        higher[i] = level_module(f, l + i, cache).support()
    entries = []
    for m in base.support():
        lam = owner.get(m)
        if lam is None:
            raise IndeterminateError(f"summand {m} at level {l} matches no jumping exponent")
        classes, tracked = [], []
        for i, support in higher.items():
            cls = tuple(n for n in support if n % q == m)
            classes.append(cls)
            tracked.append(tuple(n for n in cls if n // p ** i == m))
        zp = in_Zp_local(lam, p)
        survives = all(len(t) == 1 for t in tracked)
        consistent = survives == zp
        if zp and survives:
            # the survivor must be lam's own truncation at each level
            consistent = all(
                t[0] == truncation_index(lam, p, l + i + 1) for t, i in zip(tracked, higher)
            )
        entries.append(
            SurvivorEntry(
                m, base_p_digits(m, p, l + 1), lam, zp,
                tuple(classes), tuple(tracked), survives, consistent,
            )
        )
    return SurvivorsReport(l, d, strides, tuple(entries))
