"""Base-1/p expansions of rationals in (0, 1] and eventually periodic p-adic integers.

A rational r in (0, 1] is written ``r = sum_{n>=1} r_n p^(-n)`` with no infinite
run of zeros, so 1 = 0.(p-1)(p-1)... .  A p-adic integer is written
``sum_{m>=0} a_m p^m``.  Both kinds of digit streams are stored as a
(preperiod, period) pair, always in minimal form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .polyalg import check_prime


def as_fraction(r) -> Fraction:
    if isinstance(r, str):
        return parse_rational(r)
    return Fraction(r)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"``."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(r: Fraction) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def valuation(r, p: int) -> int | float:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    r = Fraction(r)
    if r == 0:
        return math.inf
    v = 0
    num, den = r.numerator, r.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def in_Zp_local(r, p: int) -> bool:
    """True iff the reduced denominator of ``r`` is prime to ``p``."""
    return Fraction(r).denominator % p != 0


def _minimal_period(period):
    d = len(period)
    for k in range(1, d + 1):
        if d % k == 0 and period == period[:k] * (d // k):
            return period[:k]
    return period


def _minimize(preperiod, period):
    preperiod = tuple(preperiod)
    period = _minimal_period(tuple(period))
    while preperiod and preperiod[-1] == period[-1]:
        period = (preperiod[-1],) + period[:-1]
        preperiod = preperiod[:-1]
    return preperiod, period


def _check_digits(p, digits):
    for a in digits:
        if not 0 <= a < p:
            raise ValueError(f"digit {a} outside [0, {p - 1}]")


@dataclass(frozen=True)
class _DigitStream:
    p: int
    preperiod: tuple
    period: tuple

    def __post_init__(self):
        check_prime(self.p)
        if not self.period:
            raise ValueError("period must be nonempty")
        _check_digits(self.p, self.preperiod)
        _check_digits(self.p, self.period)
        pre, per = _minimize(self.preperiod, self.period)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def digit(self, k: int) -> int:
        """Digit at 0-based index ``k`` of the stream."""
        L = len(self.preperiod)
        if k < L:
            return self.preperiod[k]
        return self.period[(k - L) % len(self.period)]

    def digits(self, count: int) -> list:
        return [self.digit(k) for k in range(count)]

    def __iter__(self) -> Iterator[int]:
        yield from self.preperiod
        while True:
            yield from self.period

    def to_json(self) -> dict:
        return {"p": self.p, "preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_json(cls, data: dict):
        return cls(int(data["p"]), tuple(data["preperiod"]), tuple(data["period"]))


class BasePExpansion(_DigitStream):
    """r = sum_{n>=1} r_n p^(-n); ``digit(k)`` is r_(k+1)."""

    def __post_init__(self):
        super().__post_init__()
        if all(a == 0 for a in self.period):
            raise ValueError("a 1/p-adic expansion cannot end in zeros")

    def value(self) -> Fraction:
        p = self.p
        L, d = len(self.preperiod), len(self.period)
        head = sum(Fraction(a, p ** (k + 1)) for k, a in enumerate(self.preperiod))
        block = sum(a * p ** (d - 1 - k) for k, a in enumerate(self.period))
        return head + Fraction(block, p ** L * (p ** d - 1))

    def truncation(self, k: int) -> int:
        """The integer m with m / p^k the first k digits of the expansion."""
        m = 0
        for a in self.digits(k):
            m = m * self.p + a
        return m


class PAdicNumber(_DigitStream):
    """An element of Z_p ∩ Q; ``digit(m)`` is the coefficient of p^m."""

    def value(self) -> Fraction:
        return padic_to_rational(self)


@dataclass(frozen=True)
class MaximalIdealSpec:
    """The maximal ideal ({s choose p^e} - a_e : e >= 0) of the binomial-coefficient algebra.

    ``a_e`` is the e-th p-adic digit of the corresponding element of Z_p.
    """

    padic: PAdicNumber

    @property
    def p(self) -> int:
        return self.padic.p

    def eigenvalue(self, e: int) -> int:
        """The scalar by which {s choose p^e} acts; the higher Euler operator acts by its negative."""
        return self.padic.digit(e)

    def eigenvalues(self, count: int) -> list:
        return self.padic.digits(count)

    def generators(self, count: int) -> list:
        return [f"binom(s, {self.p}^{e}) - {a}" for e, a in enumerate(self.eigenvalues(count))]

    def contains_point(self, values) -> bool:
        """Whether the evaluation point ``values[e] = {s choose p^e}`` lies on this ideal's prefix."""
        return list(values) == self.eigenvalues(len(values))

    def to_json(self) -> dict:
        return self.padic.to_json()


def truncation_index(lam, p: int, k: int) -> int:
    """The unique m with lam in (m/p^k, (m+1)/p^k]."""
    lam = Fraction(lam)
    return math.ceil(lam * p ** k) - 1


def expand_inverse_p(r, p: int) -> BasePExpansion:
    """The 1/p-adic expansion of a rational in (0, 1].

    Digits follow ``d = ceil(r p) - 1, r <- r p - d``, which keeps the remainder in
    (0, 1]; the period starts at the first repeated remainder.
    """
    check_prime(p)
    r = as_fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"{format_rational(r)} is outside (0, 1]")
    seen = {}
    digits = []
    while r not in seen:
        seen[r] = len(digits)
        d = math.ceil(r * p) - 1
        digits.append(d)
        r = r * p - d
    start = seen[r]
    return BasePExpansion(p, tuple(digits[:start]), tuple(digits[start:]))


def is_strictly_periodic(x: BasePExpansion) -> bool:
    return not x.preperiod


def conjugates(r, p: int) -> frozenset:
    """Values of the expansions obtained by rotating the period of r."""
    x = expand_inverse_p(r, p)
    if not is_strictly_periodic(x):
        raise ValueError(
            f"{format_rational(as_fraction(r))} has a preperiod in base {p}; conjugates are undefined"
        )
    per = x.period
    return frozenset(
        BasePExpansion(p, (), per[k:] + per[:k]).value() for k in range(len(per))
    )


def negate_to_padic(r, p: int) -> PAdicNumber:
    """The p-adic expansion of -r for r in (0, 1] ∩ Z_(p).

    With strictly periodic 1/p-digits r_1..r_d, the digit of p^m is r_(d - (m mod d)).
    """
    r = as_fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"{format_rational(r)} is outside (0, 1]")
    if not in_Zp_local(r, p):
        raise ValueError(f"{format_rational(r)} is not in Z_({p})")
    per = expand_inverse_p(r, p).period
    d = len(per)
    # r_k is per[k - 1]
    return PAdicNumber(p, (), tuple(per[d - (m % d) - 1] for m in range(d)))


def padic_to_rational(x: PAdicNumber) -> Fraction:
    p = x.p
    L, d = len(x.preperiod), len(x.period)
    head = sum(a * p ** k for k, a in enumerate(x.preperiod))
    block = sum(a * p ** k for k, a in enumerate(x.period))
    return head + Fraction(p ** L * block, 1 - p ** d)


def rational_to_padic(q, p: int) -> PAdicNumber:
    """The p-adic digit stream of a rational with denominator prime to p."""
    check_prime(p)
    q = as_fraction(q)
    if not in_Zp_local(q, p):
        raise ValueError(f"{format_rational(q)} is not a p-adic integer for p = {p}")
    # Digits are found by repeated subtraction; the state q repeats.
    seen = {}
    digits = []
    while q not in seen:
        seen[q] = len(digits)
        a = q.numerator * pow(q.denominator, -1, p) % p
        digits.append(a)
        q = (q - a) / p
    start = seen[q]
    return PAdicNumber(p, tuple(digits[:start]), tuple(digits[start:]))
