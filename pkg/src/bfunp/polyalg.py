"""Multivariate polynomials over F_p, an expression parser, and Groebner bases.

Monomials are dense exponent tuples.  The monomial order is graded reverse
lexicographic with variables in declaration order, so ``x > y > z`` for
``Ring(("x", "y", "z"), p)``.  Reduced Groebner bases are unique under this
order and serve as the canonical form of an :class:`Ideal`.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import AmbientMismatch, PolySyntaxError

MAX_PRIME = 97
MAX_VARS = 8

_VAR_RE = re.compile(r"[a-z][a-z0-9]*\Z")

Monomial = tuple


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def check_prime(p: int, bound: int = MAX_PRIME) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError(f"prime must be an int, got {type(p).__name__}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > bound:
        raise ValueError(f"prime {p} exceeds the configured bound {bound}")
    return p


@dataclass(frozen=True)
class Ring:
    """The ambient ring F_p[vars]."""

    vars: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        check_prime(self.p)
        if len(self.vars) > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables are supported")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable names in {self.vars}")
        for v in self.vars:
            if not _VAR_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return Poly(self, {(0,) * self.nvars: 1})

    def gen(self, name: str) -> Poly:
        i = self.vars.index(name)
        exps = [0] * self.nvars
        exps[i] = 1
        return Poly(self, {tuple(exps): 1})

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> Poly:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector length does not match the variable count")
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be nonnegative")
        return Poly(self, {exps: coeff})

    def parse(self, src: str) -> Poly:
        return parse_poly(src, self.vars, self.p)


# -- low-level helpers on {monomial: coeff} dicts ---------------------------


def _heap_key(m):
    # Ascending in this key is descending in grevlex.
    return (-sum(m), m[::-1])


def grevlex_key(m):
    """Sort key that is increasing in the grevlex order."""
    return (sum(m), tuple(-e for e in reversed(m)))


def _leading(terms):
    return min(terms, key=_heap_key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _mul(a, b, p):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = (out.get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def _add_scaled(target, src, scale, shift, p, skip=None):
    """In place: target -= scale * x^shift * src, ignoring monomial ``skip`` of src."""
    for m, c in src.items():
        if m == skip:
            continue
        nm = tuple(x + y for x, y in zip(m, shift))
        v = (target.get(nm, 0) - scale * c) % p
        if v:
            target[nm] = v
        else:
            target.pop(nm, None)


def _monic(terms, p):
    lc = terms[_leading(terms)]
    if lc == 1:
        return dict(terms)
    inv = pow(lc, -1, p)
    return {m: c * inv % p for m, c in terms.items()}


def _frobenius(terms, q):
    # Coefficients are fixed by Frobenius on F_p.
    return {tuple(q * x for x in m): c for m, c in terms.items()}


def _reduce(f, basis, p):
    """Full normal form of ``f`` by ``basis``, a list of (lm, monic dict)."""
    f = dict(f)
    heap = [(_heap_key(m), m) for m in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        for lm, g in basis:
            if _divides(lm, m):
                shift = _mono_div(m, lm)
                for gm, gc in g.items():
                    if gm == lm:
                        continue
                    nm = tuple(x + y for x, y in zip(gm, shift))
                    old = f.get(nm, 0)
                    v = (old - c * gc) % p
                    if v:
                        f[nm] = v
                        if not old:
                            heapq.heappush(heap, (_heap_key(nm), nm))
                    elif old:
                        del f[nm]
                break
        else:
            rem[m] = c
    return rem


def _echelon(polys, p):
    """Row-reduce a list of polys as vectors; the result has distinct leading monomials."""
    pivots = {}
    for g in polys:
        g = dict(g)
        while g:
            lm = _leading(g)
            piv = pivots.get(lm)
            if piv is None:
                pivots[lm] = _monic(g, p)
                break
            _add_scaled(g, piv, g[lm], (0,) * len(lm), p)
    return pivots


def _buchberger(polys, p, nvars):
    one = (0,) * nvars
    pivots = _echelon(polys, p)
    if not pivots:
        return []
    if one in pivots:
        return [{one: 1}]
    basis = []  # list of (lm, poly)
    pending = set()
    heap = []

    def add(h):
        h = _monic(h, p)
        lm = _leading(h)
        k = len(basis)
        basis.append((lm, h))
        for i, (lmi, _) in enumerate(basis[:-1]):
            L = _lcm(lmi, lm)
            pending.add((i, k))
            heapq.heappush(heap, (sum(L), _heap_key(L)[1], i, k))
        return lm

    for lm in sorted(pivots, key=grevlex_key):
        h = _reduce(pivots[lm], basis, p)
        if h:
            if one in h and len(h) == 1:
                return [{one: 1}]
            add(h)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lmi, gi = basis[i]
        lmj, gj = basis[j]
        L = _lcm(lmi, lmj)
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        skip = False
        for k, (lmk, _) in enumerate(basis):
            if k in (i, j) or not _divides(lmk, L):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        s = {}
        _add_scaled(s, gi, -1, _mono_div(L, lmi), p)
        _add_scaled(s, gj, 1, _mono_div(L, lmj), p)
        h = _reduce(s, basis, p)
        if h:
            if len(h) == 1 and one in h:
                return [{one: 1}]
            add(h)

    lms = [lm for lm, _ in basis]
    minimal = [
        (lm, g)
        for idx, (lm, g) in enumerate(basis)
        if not any(k != idx and _divides(other, lm) for k, other in enumerate(lms))
    ]
    out = []
    for idx, (lm, g) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        out.append(_monic(_reduce(g, others, p), p))
    out.sort(key=lambda g: grevlex_key(_leading(g)), reverse=True)
    return out


# -- public types ------------------------------------------------------------


class Poly:
    """An immutable polynomial over F_p with coefficients stored in [1, p-1]."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, int]):
        p = ring.p
        n = ring.nvars
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != n:
                raise ValueError("exponent vector length does not match the variable count")
            c %= p
            if c:
                clean[m] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return MappingProxyType(self._terms)

    @property
    def p(self) -> int:
        return self.ring.p

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.ring.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return _leading(self._terms)

    def leading_coefficient(self) -> int:
        return self._terms[self.leading_monomial()]

    def monic(self) -> Poly:
        if not self._terms:
            return self
        return Poly._raw(self.ring, _monic(self._terms, self.p))

    def frobenius(self, e: int = 1) -> Poly:
        """The p^e-th power, computed term by term."""
        return Poly._raw(self.ring, _frobenius(self._terms, self.p ** e))

    def _check(self, other):
        if isinstance(other, int):
            return Poly(self.ring, {(0,) * self.ring.nvars: other})
        if not isinstance(other, Poly):
            return NotImplemented
        if other.ring != self.ring:
            raise AmbientMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        _add_scaled(out, other._terms, -1, (0,) * self.ring.nvars, self.p)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Poly._raw(self.ring, {m: p - c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        _add_scaled(out, other._terms, 1, (0,) * self.ring.nvars, self.p)
        return Poly._raw(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.ring, _mul(self._terms, other._terms, self.p))

    __rmul__ = __mul__

    def __pow__(self, a):
        return poly_pow(self, a)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly(self.ring, {(0,) * self.ring.nvars: other})
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in decreasing grevlex order."""
        return sorted(self._terms.items(), key=lambda t: _heap_key(t[0]))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.ring.vars, m):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.ring.vars}, p={self.p})"


def poly_pow(f: Poly, a: int) -> Poly:
    """Exact power f^a using the base-p splitting f^a = prod_e (f^(a_e))^(p^e)."""
    if a < 0:
        raise ValueError("exponent must be nonnegative")
    p = f.p
    one = {(0,) * f.ring.nvars: 1}
    result = one
    q = 1
    while a:
        digit = a % p
        a //= p
        if digit:
            piece = one
            base = f._terms
            d = digit
            while d:
                if d & 1:
                    piece = _mul(piece, base, p)
                d >>= 1
                if d:
                    base = _mul(base, base, p)
            result = _mul(result, _frobenius(piece, q), p)
        q *= p
    return Poly._raw(f.ring, result)


# -- parser --------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[a-z][a-z0-9]*)|(?P<op>[-+*^]))")


def _tokenize(src):
    pos = 0
    tokens = []
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            j = pos
            while j < len(src) and src[j].isspace():
                j += 1
            raise PolySyntaxError(f"unexpected character {src[j]!r}", j)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src, vars, ring):
        self.tokens = _tokenize(src)
        self.i = 0
        self.index = {v: k for k, v in enumerate(vars)}
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise PolySyntaxError(f"expected {want}, got {got!r}", tok[2])
        return tok

    def parse(self):
        p = self.ring.p
        terms = {}
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        while True:
            m, c = self.term()
            terms[m] = (terms.get(m, 0) + sign * c) % p
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = 1 if tok[1] == "+" else -1
                continue
            raise PolySyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return Poly(self.ring, terms)

    def term(self):
        exps = [0] * self.ring.nvars
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            coeff = int(tok[1])
            if self.peek()[:2] != ("op", "*"):
                return tuple(exps), coeff
            self.take()
            self.factors(exps)
            return tuple(exps), coeff
        if tok[0] == "var":
            self.factors(exps)
            return tuple(exps), 1
        got = tok[1] or "end of input"
        raise PolySyntaxError(f"expected a term, got {got!r}", tok[2])

    def factors(self, exps):
        while True:
            _, name, pos = self.expect("var")
            if name not in self.index:
                raise PolySyntaxError(f"unknown variable {name!r}", pos)
            power = 1
            if self.peek()[:2] == ("op", "^"):
                self.take()
                power = int(self.expect("num")[1])
            exps[self.index[name]] += power
            if self.peek()[:2] == ("op", "*") and self.tokens[self.i + 1][0] == "var":
                self.take()
                continue
            return


def parse_poly(src: str, vars: Sequence[str], p: int) -> Poly:
    """Parse ``src`` into a polynomial over F_p in the variables ``vars``.

    Grammar::

        expr    := term (('+'|'-') term)*      (optional leading '-')
        term    := coeff | coeff '*' factors | factors
        factors := factor ('*' factor)*
        factor  := var ('^' uint)?
    """
    ring = Ring(tuple(vars), p)
    return _Parser(src, ring.vars, ring).parse()


def infer_vars(src: str) -> tuple:
    """Variable names appearing in ``src``, sorted."""
    return tuple(sorted({m.group(0) for m in re.finditer(r"[a-z][a-z0-9]*", src)}))


# -- ideals ----------------------------------------------------------------------


class Ideal:
    """An ideal of F_p[vars], canonicalized by its reduced grevlex Groebner basis."""

    __slots__ = ("ring", "generators", "gb", "_key", "_basis")

    def __init__(self, ring: Ring, generators: Iterable[Poly] = (), _gb=None):
        gens = tuple(generators)
        for g in gens:
            if g.ring != ring:
                raise AmbientMismatch(f"generator ring {g.ring} differs from {ring}")
        if _gb is None:
            _gb = _buchberger([g._terms for g in gens if g], ring.p, ring.nvars)
        self.ring = ring
        self.generators = gens
        self.gb = tuple(Poly._raw(ring, g) for g in _gb)
        self._key = tuple(tuple(sorted(g.items())) for g in _gb)
        self._basis = [(_leading(g), g) for g in _gb]

    @classmethod
    def unit(cls, ring: Ring) -> Ideal:
        return cls(ring, [ring.one()])

    def is_unit(self) -> bool:
        return len(self.gb) == 1 and self.gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gb

    def contains(self, g: Poly) -> bool:
        return normal_form(g, self).is_zero()

    def __contains__(self, g):
        return self.contains(g)

    def issubset(self, other: Ideal) -> bool:
        return all(other.contains(g) for g in self.gb)

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash((self.ring, self._key))

    def __add__(self, other: Ideal) -> Ideal:
        if other.ring != self.ring:
            raise AmbientMismatch(f"{self.ring} vs {other.ring}")
        return reduced_groebner(list(self.gb) + list(other.gb), ring=self.ring)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gb) + ")"

    def __repr__(self):
        return f"Ideal{str(self)}"


def _common_ring(polys, ring):
    for g in polys:
        if ring is None:
            ring = g.ring
        elif g.ring != ring:
            raise AmbientMismatch(f"mixed ambients: {ring} and {g.ring}")
    if ring is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    return ring


def reduced_groebner(gens: Sequence[Poly], ring: Ring | None = None) -> Ideal:
    """The ideal generated by ``gens`` with its reduced grevlex Groebner basis."""
    gens = list(gens)
    ring = _common_ring(gens, ring)
    return Ideal(ring, gens)


def normal_form(g: Poly, ideal: Ideal) -> Poly:
    """Remainder of ``g`` modulo the reduced Groebner basis of ``ideal``."""
    if g.ring != ideal.ring:
        raise AmbientMismatch(f"{g.ring} vs {ideal.ring}")
    return Poly._raw(g.ring, _reduce(g._terms, ideal._basis, g.p))


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    if a.ring != b.ring:
        raise AmbientMismatch(f"{a.ring} vs {b.ring}")
    return a._key == b._key
