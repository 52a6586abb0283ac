from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bfunp.errors import IndeterminateError
from bfunp.euler import (
    EulerAction,
    base_p_digits,
    level_module,
    period_lcm,
    separated,
    structure_map_image,
    survivors_check,
    truncated_roots,
)
from bfunp.frobenius import bracket_power, d_ideal
from bfunp.padics import expand_inverse_p, truncation_index
from bfunp.testideal import ChainCache, default_emax, jumping_exponents

from conftest import P

F = Fraction


def support_by_membership(f, l):
    """Summand n is zero iff f^n already lies in D^(l) f^(n+1)."""
    p = f.p
    out = []
    for n in range(p ** (l + 1)):
        lower = bracket_power(d_ideal(f, n + 1, l), l + 1)
        if not lower.contains(f ** n):
            out.append(n)
    return out


class TestLevelModule:
    def test_x_base_two(self):
        m = level_module(P("x", "x", 2), 1)
        assert m.support() == [3]
        assert truncated_roots(m) == {(1, 1)}

    def test_cusp_level_zero(self):
        assert level_module(P("x^2 + y^3"), 0).support() == [5, 6]

    def test_cusp_level_one(self):
        assert level_module(P("x^2 + y^3"), 1).support() == [40, 48]

    def test_x_base_three(self):
        assert level_module(P("x", "x", 3), 0).support() == [2]

    def test_json(self):
        m = level_module(P("x", "x", 2), 0)
        assert m.to_json() == {
            "l": 0,
            "summands": [{"n": 0, "digits": [0], "nonzero": False}, {"n": 1, "digits": [1], "nonzero": True}],
        }

    def test_level_bound(self):
        with pytest.raises(ValueError):
            level_module(P("x", "x", 2), 7)

    @pytest.mark.parametrize(
        "src, vars, p, l",
        [("x^2 + y^3", "x,y", 5, 1), ("x^2*y^3", "x,y", 3, 1), ("x^3 + y^4", "x,y", 2, 2), ("x*y + z^2", "x,y,z", 3, 0)],
    )
    def test_membership_oracle(self, src, vars, p, l):
        f = P(src, vars, p)
        assert level_module(f, l).support() == support_by_membership(f, l)


class TestTruncatedRoots:
    def test_monomial(self):
        m = level_module(P("x^2*y^3"), 0)
        assert truncated_roots(m) == {(2,), (3,), (4,), (6,)}

    def test_cusp_digits(self):
        m = level_module(P("x^2 + y^3"), 1)
        assert truncated_roots(m) == {(5, 5), (6, 6)}

    @pytest.mark.parametrize(
        "src, p, l", [("x^2 + y^3", 7, 1), ("x^2*y^3", 5, 1), ("x^2 + y^3", 2, 2), ("x^3 + y^4", 5, 1)]
    )
    def test_identification(self, src, p, l):
        f = P(src, "x,y", p)
        cache = ChainCache(f)
        e_max = max(default_emax(p), l + 2) if src != "x^3 + y^4" else 4
        exps = [r.exact for r in jumping_exponents(f, e_max, cache)]
        module = level_module(f, l, cache)
        # nonzero summands are exactly the level-(l+1) truncations of the exponents
        assert set(module.support()) == {truncation_index(lam, p, l + 1) for lam in exps}
        assert len(module.support()) <= len(exps)
        # their digits are the truncated 1/p-digits read from the last one
        assert truncated_roots(module) == {
            tuple(reversed(expand_inverse_p(lam, p).digits(l + 1))) for lam in exps
        }


class TestEuler:
    @given(st.sampled_from([2, 3, 5, 7]), st.integers(0, 5), st.data())
    def test_digits(self, p, l, data):
        n = data.draw(st.integers(0, p ** (l + 1) - 1))
        digits = base_p_digits(n, p, l + 1)
        assert sum(a * p ** e for e, a in enumerate(digits)) == n
        act = EulerAction(p, digits)
        for e in range(l + 1):
            assert 0 <= act.binom(e) < p
            assert (act.nu(e) + act.binom(e)) % p == 0

    def test_digits_overflow(self):
        with pytest.raises(ValueError):
            base_p_digits(8, 2, 3)

    def test_summand_eigenvalues(self):
        m = level_module(P("x^2 + y^3"), 1)
        s = m.summands[40]
        assert s.euler(7).binom(0) == 5 and s.euler(7).nu(1) == 2


class TestStructureMap:
    def test_x_base_two(self):
        f = P("x", "x", 2)
        assert structure_map_image(f, 0, 1) == [3]
        assert structure_map_image(f, 0, 0) == []

    def test_cusp(self):
        f = P("x^2 + y^3")
        cache = ChainCache(f)
        for m in level_module(f, 0, cache).support():
            hits = structure_map_image(f, 0, m, cache)
            assert hits and all(n % 7 == m for n in hits)
            assert set(hits) <= set(level_module(f, 1, cache).support())

    def test_range(self):
        with pytest.raises(ValueError):
            structure_map_image(P("x", "x", 2), 0, 2)


class TestSurvivors:
    def test_cusp_seven(self):
        rep = survivors_check(P("x^2 + y^3"), 0, 1)
        assert rep.status == "PASS" and rep.period_lcm == 1
        assert [(e.m, e.survives) for e in rep.entries] == [(5, True), (6, True)]

    def test_cusp_five_drops_four_fifths(self):
        rep = survivors_check(P("x^2 + y^3", "x,y", 5), 0, 2)
        assert rep.status == "PASS"
        by_exp = {e.exponent: e for e in rep.entries}
        assert not by_exp[F(4, 5)].survives and not by_exp[F(4, 5)].in_zp
        assert by_exp[F(1)].survives

    def test_monomial_base_two(self):
        f = P("x^2*y^3", "x,y", 2)
        exps = [r.exact for r in jumping_exponents(f, 4)]
        assert not separated(exps, 2, 1) and separated(exps, 2, 2)
        assert period_lcm(exps, 2) == 2
        rep = survivors_check(f, 2, 1, 4)
        assert rep.status == "PASS"
        assert {e.exponent for e in rep.entries if e.survives} == {F(1, 3), F(2, 3), F(1)}

    def test_unseparated(self):
        with pytest.raises(IndeterminateError):
            survivors_check(P("x^2*y^3", "x,y", 2), 0, 1, 4)

    def test_json(self):
        rep = survivors_check(P("x", "x", 3), 0, 1)
        data = rep.to_json()
        assert data["status"] == "PASS" and data["d"] == 1
        assert data["entries"][0]["exponent"] == "1" and data["entries"][0]["tracked"] == [[8]]

    def test_bad_strides(self):
        with pytest.raises(ValueError):
            survivors_check(P("x", "x", 3), 0, 0)
