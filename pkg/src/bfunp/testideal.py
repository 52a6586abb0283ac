"""Test-ideal chains and F-jumping exponents of a polynomial.

For a principal ideal the test ideal at a p-adic rational is a Frobenius root,
``tau(f^(a/p^e)) = I_e((f^a))``.  Comparing consecutive members of the chain
a = 0..p^e therefore locates every jumping exponent in (0, 1] inside a cell
``((a-1)/p^e, a/p^e]``; cells at level e+1 refine those at level e.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CappedError
from .frobenius import Caps, PowerTable, root_of_poly
from .padics import expand_inverse_p, format_rational, in_Zp_local
from .polyalg import Ideal, Poly, ideal_equal, normal_form, poly_pow, _mul

EXACT = "EXACT"
INTERVAL = "INTERVAL"


def default_emax(p: int) -> int:
    return 4 if p <= 3 else 3


def simplest_in_interval(lo, hi) -> Fraction:
    """The rational of smallest denominator in the half-open interval (lo, hi].

    Stern-Brocot descent with runs of equal moves taken in one step.
    Requires 0 <= lo < hi.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    ln, ld = 0, 1
    rn, rd = 1, 0
    while True:
        mn, md = ln + rn, ld + rd
        m = Fraction(mn, md)
        if m <= lo:
            k = math.floor((lo * ld - ln) / (rn - lo * rd))
            ln, ld = ln + k * rn, ld + k * rd
        elif m > hi:
            k = math.ceil((rn - hi * rd) / (hi * ld - ln)) - 1
            rn, rd = rn + k * ln, rd + k * ld
        else:
            return m


@dataclass(frozen=True)
class JumpChain:
    p: int
    e: int
    ideals: tuple
    jumps: tuple

    def interval(self, a: int) -> tuple:
        q = self.p ** self.e
        return Fraction(a - 1, q), Fraction(a, q)


@dataclass(frozen=True)
class JumpReport:
    lo: Fraction
    hi: Fraction
    exact: Fraction | None
    status: str
    positions: tuple = field(default=(), compare=False)  # jump position a at e = 1..e_max

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("empty interval")
        if self.exact is not None and not self.lo < self.exact <= self.hi:
            raise ValueError("exact value outside its interval")

    @property
    def is_exact(self) -> bool:
        return self.status == EXACT

    def to_json(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "exact": None if self.exact is None else format_rational(self.exact),
            "status": self.status,
        }

    def __str__(self):
        if self.exact is not None:
            return format_rational(self.exact)
        return f"({format_rational(self.lo)}, {format_rational(self.hi)}]"


def _segment_worker(ring, terms, e, start, stop, caps):
    f = Poly._raw(ring, terms)
    if f.degree() * (stop - 1) > caps.max_degree:
        raise CappedError(f"deg(f^{stop - 1}) exceeds the degree cap {caps.max_degree}")
    g = poly_pow(f, start)._terms
    out = []
    for a in range(start, stop):
        if len(g) > caps.max_terms:
            raise CappedError(f"f^{a} has {len(g)} terms, over the cap {caps.max_terms}")
        ideal = root_of_poly(Poly._raw(ring, g), e)
        out.append([h._terms for h in ideal.gb])
        g = _mul(g, terms, ring.p)
    return out


class ChainCache:
    """Shares powers of f and level chains between the analyses of one polynomial.

    ``jobs > 1`` farms chain entries out to worker processes in contiguous
    segments; results are identical to the serial path.
    """

    def __init__(self, f: Poly, caps: Caps | None = None, jobs: int = 1):
        if f.is_constant():
            raise ValueError("f must be nonconstant")
        self.f = f
        self.caps = caps or Caps()
        self.jobs = max(1, int(jobs))
        self.powers = PowerTable(f, self.caps)
        self._chains = {}
        self._reports = {}

    @property
    def p(self) -> int:
        return self.f.p

    def chain(self, e: int) -> JumpChain:
        if e < 1:
            raise ValueError("e must be >= 1")
        if e not in self._chains:
            self._chains[e] = self._build(e)
        return self._chains[e]

    def _build(self, e: int) -> JumpChain:
        q = self.p ** e
        self.powers.check(q)
        if self.jobs > 1 and q >= 4 * self.jobs:
            ideals = self._build_parallel(e, q)
        else:
            ideals = [root_of_poly(self.powers[a], e) for a in range(q + 1)]
        jumps = tuple(a for a in range(1, q + 1) if not ideal_equal(ideals[a], ideals[a - 1]))
        return JumpChain(self.p, e, tuple(ideals), jumps)

    def _build_parallel(self, e, q):
        ring = self.f.ring
        bounds = [round(k * (q + 1) / self.jobs) for k in range(self.jobs + 1)]
        with ProcessPoolExecutor(max_workers=self.jobs) as pool:
            futures = [
                pool.submit(_segment_worker, ring, self.f._terms, e, lo, hi, self.caps)
                for lo, hi in zip(bounds, bounds[1:])
                if hi > lo
            ]
            gbs = [gb for fut in futures for gb in fut.result()]
        return [Ideal(ring, [Poly._raw(ring, g) for g in gb], _gb=gb) for gb in gbs]

    def reports(self, e_max: int) -> list:
        if e_max not in self._reports:
            self._reports[e_max] = _jumping_exponents(self, e_max)
        return self._reports[e_max]


def _cache_for(f, cache):
    if cache is None:
        return ChainCache(f)
    if cache.f != f:
        raise ValueError("cache belongs to a different polynomial")
    return cache


def jump_chain(f: Poly, e: int, cache: ChainCache | None = None) -> JumpChain:
    """I_e((f^a)) for a = 0..p^e together with the positions where it drops."""
    return _cache_for(f, cache).chain(e)


def _jumping_exponents(cache: ChainCache, e_max: int) -> list:
    p = cache.p
    chains = [cache.chain(e) for e in range(1, e_max + 1)]
    stable = e_max >= 2 and len(chains[-1].jumps) == len(chains[-2].jumps)
    reports = []
    for a in chains[-1].jumps:
        positions = [a]
        nested = True
        for chain in reversed(chains[:-1]):
            a_up = -(-positions[0] // p)
            if a_up not in chain.jumps:
                nested = False
            positions.insert(0, a_up)
        lo, hi = chains[-1].interval(a)
        candidate = simplest_in_interval(lo, hi)
        exact = None
        if stable and nested:
            prev = simplest_in_interval(*chains[-2].interval(positions[-2]))
            if prev == candidate and _digits_match(candidate, p, positions):
                exact = candidate
        reports.append(
            JumpReport(lo, hi, exact, EXACT if exact is not None else INTERVAL, tuple(positions))
        )
    if not stable:
        reports = [JumpReport(r.lo, r.hi, None, INTERVAL, r.positions) for r in reports]
    return reports


def _digits_match(lam, p, positions):
    if not in_Zp_local(lam, p):
        return True
    x = expand_inverse_p(lam, p)
    return all(x.truncation(e) + 1 == a for e, a in enumerate(positions, start=1))


def jumping_exponents(f: Poly, e_max: int, cache: ChainCache | None = None) -> list:
    """F-jumping exponents of f in (0, 1], ascending.

    A report is EXACT when the jump count is the same at levels e_max - 1 and
    e_max, the smallest-denominator rational of its cell is the same at both
    levels, and (for denominators prime to p) its truncated 1/p-digits reproduce
    the jump positions at every level.  Otherwise only the cell is reported.
    """
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    return list(_cache_for(f, cache).reports(e_max))


def fpt(f: Poly, e_max: int, cache: ChainCache | None = None) -> JumpReport:
    """The F-pure threshold: the smallest jumping exponent."""
    reports = jumping_exponents(f, e_max, cache)
    if not reports:
        raise ValueError("f has no jumping exponent in (0, 1]")
    return reports[0]


def nu_values(f: Poly, e_max: int, cache: ChainCache | None = None) -> list:
    """nu(e) = max{a : f^a not in (x_1^(p^e), ..., x_n^(p^e))} for e = 1..e_max."""
    if f.constant_term() != 0:
        raise ValueError("nu values need f(0) = 0")
    cache = _cache_for(f, cache)
    ring = f.ring
    out = []
    for e in range(1, e_max + 1):
        q = f.p ** e
        frob_max = Ideal(
            ring,
            [ring.monomial([q if j == i else 0 for j in range(ring.nvars)]) for i in range(ring.nvars)],
        )
        nu = q - 1
        for a in range(1, q + 1):
            if normal_form(cache.powers[a], frob_max).is_zero():
                nu = a - 1
                break
        out.append(nu)
    return out
