"""Bracket powers, Frobenius roots, and the ideals D^(l) f^n.

The Frobenius root ``I_e(J)`` is the smallest ideal ``I`` with
``I^[p^e] ⊇ J``.  Writing every monomial exponent in base ``p^e`` splits a
polynomial uniquely as ``g = sum_mu x^mu * g_mu^(p^e)`` with ``mu`` ranging over
exponent vectors below ``p^e``; the root is generated by all the ``g_mu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CappedError
from .polyalg import Ideal, Poly, Ring, _frobenius, _mul

MAX_LEVEL = 6


@dataclass(frozen=True)
class Caps:
    """Resource budget for powers of f."""

    max_degree: int = 4000
    max_terms: int = 200_000

    def __post_init__(self):
        if self.max_degree <= 0 or self.max_terms <= 0:
            raise ValueError("caps must be positive")


def check_level(l: int, max_level: int = MAX_LEVEL) -> int:
    if l < 0 or l > max_level:
        raise ValueError(f"level {l} outside [0, {max_level}]")
    return l


def bracket_power(ideal: Ideal, e: int) -> Ideal:
    """The ideal generated by the p^e-th powers of the generators of ``ideal``."""
    if e < 1:
        raise ValueError("e must be >= 1")
    q = ideal.ring.p ** e
    return Ideal(ideal.ring, [Poly._raw(ideal.ring, _frobenius(g._terms, q)) for g in ideal.gb])


def root_generators(polys: Iterable[Poly], e: int) -> list:
    """The polynomials g_mu of the base-p^e digit decomposition of each input."""
    out = []
    ring = None
    for g in polys:
        ring = g.ring
        q = g.p ** e
        buckets = {}
        for m, c in g._terms.items():
            mu = tuple(x % q for x in m)
            buckets.setdefault(mu, {})[tuple(x // q for x in m)] = c
        out.extend(Poly._raw(ring, b) for b in buckets.values())
    return out


def frobenius_root(ideal: Ideal, e: int) -> Ideal:
    """I_e(J): the smallest ideal whose [p^e]-th bracket power contains ``ideal``."""
    if e < 1:
        raise ValueError("e must be >= 1")
    return Ideal(ideal.ring, root_generators(ideal.gb, e))


def root_of_poly(g: Poly, e: int) -> Ideal:
    """I_e((g)) without building the Groebner basis of (g) first."""
    return Ideal(g.ring, root_generators([g], e))


class PowerTable:
    """Memoized powers f^a, built incrementally as f^(a+1) = f^a * f.

    Not synchronized: share one table per thread or process.
    """

    def __init__(self, f: Poly, caps: Caps | None = None):
        self.f = f
        self.caps = caps or Caps()
        self._powers = [f.ring.one()._terms]

    @property
    def ring(self) -> Ring:
        return self.f.ring

    def check(self, a: int):
        deg = self.f.degree() * a
        if deg > self.caps.max_degree:
            raise CappedError(
                f"deg(f^{a}) = {deg} exceeds the degree cap {self.caps.max_degree}"
            )

    def __getitem__(self, a: int) -> Poly:
        if a < 0:
            raise ValueError("exponent must be nonnegative")
        self.check(a)
        ft = self.f._terms
        p = self.f.p
        while len(self._powers) <= a:
            nxt = _mul(self._powers[-1], ft, p)
            if len(nxt) > self.caps.max_terms:
                raise CappedError(
                    f"f^{len(self._powers)} has {len(nxt)} terms, over the cap {self.caps.max_terms}"
                )
            self._powers.append(nxt)
        return Poly._raw(self.f.ring, self._powers[a])


def d_ideal(f: Poly, n: int, l: int, powers: PowerTable | None = None) -> Ideal:
    """The ideal I_(l+1)((f^n)); its [p^(l+1)] bracket power is D^(l) f^n."""
    check_level(l)
    e = l + 1
    q = f.p ** e
    if not 0 <= n <= q:
        raise ValueError(f"n = {n} outside [0, {q}]")
    if powers is None:
        powers = PowerTable(f)
    return root_of_poly(powers[n], e)
