import random
from fractions import Fraction

import pytest

from bfunp.bfunction import (
    CONDITIONAL,
    BRoot,
    b_roots,
    cross_check,
    expected_digit_vectors,
    root_digit_table,
)
from bfunp.errors import IndeterminateError
from bfunp.padics import conjugates, in_Zp_local, padic_to_rational, rational_to_padic
from bfunp.frobenius import Caps
from bfunp.testideal import EXACT, ChainCache, jumping_exponents

from conftest import P

F = Fraction


def values(f, e_max=None):
    data = b_roots(f, e_max)
    assert data.status == EXACT
    return data.values()


class TestRoots:
    @pytest.mark.parametrize(
        "src, vars, p, expected",
        [
            ("x^2 + y^3", "x,y", 7, [F(-1), F(-5, 6)]),
            ("x^2 + y^3", "x,y", 5, [F(-1)]),
            ("x^2 + y^2 + z^2", "x,y,z", 5, [F(-1)]),
            ("x^2*y^3", "x,y", 5, [F(-1), F(-2, 3), F(-1, 2), F(-1, 3)]),
            ("x^2*y^3", "x,y", 3, [F(-1), F(-1, 2)]),
            ("x^2*y^3", "x,y", 2, [F(-1), F(-2, 3), F(-1, 3)]),
            ("x", "x", 2, [F(-1)]),
            ("x", "x", 3, [F(-1)]),
            ("x", "x", 5, [F(-1)]),
        ],
    )
    def test_examples(self, src, vars, p, expected):
        assert values(P(src, vars, p)) == expected

    def test_quadric_two_levels(self):
        assert values(P("x^2 + y^2 + z^2", "x,y,z", 5), 2) == [F(-1)]

    def test_json(self):
        data = b_roots(P("x^2 + y^3"))
        assert data.to_json() == {
            "roots": [
                {"value": "-1", "period": [6], "preperiod": []},
                {"value": "-5/6", "period": [5], "preperiod": []},
            ],
            "status": "EXACT",
        }

    def test_conditional(self):
        data = b_roots(P("x^3 + y^4", "x,y", 5), 3)
        assert data.status == CONDITIONAL
        assert [(r.lo, r.hi) for r in data.blocking] == [(F(72, 125), F(73, 125)), (F(114, 125), F(23, 25))]
        assert data.values() == [F(-1)]

    def test_root_validation(self):
        with pytest.raises(ValueError):
            BRoot(F(-1, 2), rational_to_padic(F(-1, 3), 2), F(1, 2))
        with pytest.raises(ValueError):
            BRoot(F(1, 2), rational_to_padic(F(1, 2), 3), F(-1, 2))

    @pytest.mark.parametrize(
        "src, p, e_max", [("x^2 + y^3", 7, 3), ("x^2*y^3", 5, 3), ("x^3 + y^4", 5, 4), ("x^2*y^3", 2, 4)]
    )
    def test_invariants(self, src, p, e_max):
        f = P(src, "x,y", p)
        cache = ChainCache(f)
        data = b_roots(f, e_max, cache)
        jumps = {r.exact for r in jumping_exponents(f, e_max, cache)}
        assert data.values() == sorted(data.values())
        for root in data.roots:
            assert -1 <= root.value < 0
            assert in_Zp_local(root.value, p)
            assert -root.value in jumps
            assert padic_to_rational(root.padic) == root.value
        assert {-v for v in data.values()} == {lam for lam in jumps if in_Zp_local(lam, p)}


class TestDigitTable:
    def test_minus_third(self):
        f = P("x^2*y^3", "x,y", 2)
        data = b_roots(f, 4)
        table = {r.value: ideal for r, ideal in zip(data.roots, root_digit_table(data))}
        assert table[F(-1, 3)].eigenvalues(4) == [1, 0, 1, 0]
        assert table[F(-2, 3)].eigenvalues(4) == [0, 1, 0, 1]
        assert table[F(-1)].eigenvalues(3) == [1, 1, 1]

    def test_cusp(self):
        data = b_roots(P("x^2 + y^3"))
        specs = root_digit_table(data)
        assert [s.eigenvalues(2) for s in specs] == [[6, 6], [5, 5]]


class TestConjugateClosure:
    @pytest.mark.parametrize("a, b", [(2, 3), (1, 1), (3, 1), (3, 5), (2, 7)])
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_monomials(self, a, b, p):
        f = P(f"x^{a}*y^{b}", "x,y", p)
        cache = ChainCache(f, Caps(max_degree=20_000))
        e_max = 2
        while (data := b_roots(f, e_max, cache)).status != EXACT:
            e_max += 1
            assert e_max <= 6
        roots = set(data.values())
        for r in roots:
            assert {-c for c in conjugates(-r, p)} <= roots


class TestCrossCheck:
    @pytest.mark.parametrize(
        "src, vars, p, l_max",
        [
            ("x^2 + y^3", "x,y", 7, 1),
            ("x^2 + y^3", "x,y", 5, 1),
            ("x^2 + y^3", "x,y", 2, 2),
            ("x^2 + y^3", "x,y", 3, 2),
            ("x", "x", 2, 3),
            ("x^2*y^3", "x,y", 2, 2),
            ("x^2*y^3", "x,y", 3, 2),
            ("x^3*y", "x,y", 2, 2),
            ("x^2 + y^2 + z^2", "x,y,z", 3, 2),
        ],
    )
    def test_pass(self, src, vars, p, l_max):
        rep = cross_check(P(src, vars, p), l_max)
        assert rep.status == "PASS"
        assert rep.to_json()["status"] == "PASS"

    def test_five_drops_non_root(self):
        rep = cross_check(P("x^2 + y^3", "x,y", 5), 1)
        assert rep.surviving == {F(1)}
        assert [e.survives for e in rep.survivors.entries] == [False, True]

    def test_window(self):
        # at level 2 the root -1/3 at p = 2 shows the digits of its conjugate -2/3,
        # and 1/2 (not a root) shows its reversed truncated 1/p-digits
        f = P("x^2*y^3", "x,y", 2)
        data = b_roots(f, 4)
        exps = [F(1, 3), F(1, 2), F(2, 3), F(1)]
        assert expected_digit_vectors(data, exps, 2) == {(0, 1, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)}

    def test_window_cycles_with_level(self):
        # the period of -1/3 at p = 2 has length 2, so the window alternates with l
        f = P("x^2*y^3", "x,y", 2)
        rep = cross_check(f, 4)
        checked = {c.l: c for c in rep.levels if c.separated}
        assert sorted(checked) == [2, 3, 4] and all(c.match for c in checked.values())
        own, conj = (1, 0, 1, 0, 1), (0, 1, 0, 1, 0)
        for l, c in checked.items():
            # levels with l + 1 even read -1/3 from position 0, odd ones from position 1
            window = own if (l + 1) % 2 == 0 else conj
            assert window[: l + 1] in c.observed

    def test_unseparated(self):
        with pytest.raises(IndeterminateError):
            cross_check(P("x^2*y^3", "x,y", 2), 1)

    def test_conditional(self):
        with pytest.raises(IndeterminateError):
            cross_check(P("x^3 + y^4", "x,y", 5), 1, 3)


def test_random_corpus():
    rng = random.Random(2024)
    for _ in range(30):
        p = rng.choice([2, 3, 5])
        nv = rng.randint(1, 3)
        names = "xyz"[:nv]
        terms = []
        for _ in range(rng.randint(1, 4)):
            exps = [rng.randint(0, 2) for _ in range(nv)]
            if sum(exps) == 0 or sum(exps) > 4:
                exps = [1] + [0] * (nv - 1)
            terms.append("*".join(f"{v}^{a}" for v, a in zip(names, exps) if a))
        f = P(" + ".join(terms), ",".join(names), p)
        if f.is_constant():
            continue
        data = b_roots(f)
        for v in data.values():
            assert -1 <= v < 0 and in_Zp_local(v, p)
