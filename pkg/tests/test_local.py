from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import numeric_euler_poly, numeric_roots
from semired.cyclo import CycNum
from semired.local import (
    ArchFactor,
    EpsilonDatum,
    InverseRoot,
    LocalCoeff,
    LocalFactor,
    expand_local_factor,
    parse_arch,
    parse_epsilon,
    parse_local_factor,
    parse_root,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_trim,
    prime_power_value,
)

TURNS = [Fraction(j, k) for k in (1, 2, 3, 4, 6) for j in range(k)]


@st.composite
def factors(draw, q=5, max_degree=4, weights=(0, Fraction(1, 2), 1)):
    n = draw(st.integers(0, max_degree))
    roots = [InverseRoot(draw(st.sampled_from(TURNS)), draw(st.sampled_from(weights)), q) for _ in range(n)]
    return LocalFactor(q, roots)


def numeric(c: LocalCoeff) -> complex:
    z = c.a.to_complex()
    if not c.b.is_zero():
        z += c.b.to_complex() * c.p**0.25
    return z


@given(factors())
def test_expansion_matches_numeric_polynomial(f):
    exact = [numeric(c) for c in expand_local_factor(f)]
    assert np.allclose(exact, numeric_euler_poly(f), atol=1e-9)


@given(factors())
def test_text_round_trip(f):
    assert parse_local_factor(str(f), f.q) == f


@given(factors(), factors())
def test_direct_sum_multiplies_polynomials(f, g):
    left = expand_local_factor(f + g)
    right = poly_mul(expand_local_factor(f), expand_local_factor(g))
    assert poly_trim(left) == poly_trim(right)


def same_multiset(a, b, tol=1e-9) -> bool:
    rest = list(b)
    for z in a:
        hit = next((i for i, w in enumerate(rest) if abs(z - w) < tol), None)
        if hit is None:
            return False
        rest.pop(hit)
    return not rest


@given(factors(), st.sampled_from(TURNS))
def test_twist_rotates_roots(f, t):
    twisted = f.twist(t)
    rotated = [z * np.exp(2j * np.pi * float(t)) for z in numeric_roots(f)]
    assert same_multiset(numeric_roots(twisted), rotated)
    assert twisted.twist(-t) == f


@given(factors())
def test_contragredient_is_an_involution(f):
    assert f.contragredient().contragredient() == f
    assert Counter(r.weight for r in f.contragredient().roots) == Counter(-r.weight for r in f.roots)


@given(factors(max_degree=3), st.sampled_from([2, 3]))
def test_power_raises_roots_and_q(f, n):
    g = f.power(n)
    assert g.q == f.q**n
    assert same_multiset(numeric_roots(g), [z**n for z in numeric_roots(f)])


@given(factors(max_degree=2, weights=(0, Fraction(1, 2))), factors(max_degree=2, weights=(0, Fraction(1, 2))),
       factors(max_degree=2, weights=(0, Fraction(1, 2))))
def test_polynomial_gcd_finds_the_common_part(a, b, c):
    pa = expand_local_factor(a + c)
    pb = expand_local_factor(b + c)
    g = poly_gcd(pa, pb)
    _, r1 = poly_divmod(pa, g)
    _, r2 = poly_divmod(pb, g)
    assert not poly_trim(r1) and not poly_trim(r2)
    common = Counter(a.roots + c.roots) & Counter(b.roots + c.roots)
    assert len(g) - 1 == sum(common.values())


def test_root_syntax():
    r = parse_root("root(4,1; 1/2; 9)")
    assert (r.turn, r.weight, r.q) == (Fraction(1, 4), Fraction(1, 2), 9)
    assert str(r) == "root(4,1; 1/2; 9)"
    assert parse_root("root(2,3; 0; 5)").turn == Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_root("root(0,1; 0; 5)")
    with pytest.raises(ValueError):
        parse_root("root(2,1; 1/3; 5)")
    with pytest.raises(ValueError):
        parse_root("root(2,1; 0; 6)")


def test_empty_factor():
    f = parse_local_factor("empty(7)")
    assert f.degree == 0 and f.q == 7 and str(f) == "empty(7)"
    assert expand_local_factor(f) == [LocalCoeff(1)]


def test_mixed_q_is_rejected():
    with pytest.raises(ValueError):
        LocalFactor(5, [InverseRoot(0, 0, 7)])
    with pytest.raises(ValueError):
        LocalFactor(5, []) + LocalFactor(7, [])


def test_drop_top_removes_the_largest_roots():
    f = LocalFactor(5, [InverseRoot(0, 0, 5), InverseRoot(0, 1, 5), InverseRoot(0, Fraction(1, 2), 5)])
    assert f.drop_top(1) == LocalFactor(5, [InverseRoot(0, 0, 5), InverseRoot(0, Fraction(1, 2), 5)])
    with pytest.raises(ValueError):
        f.drop_top(4)


@pytest.mark.parametrize("e", [Fraction(k, 4) for k in range(-6, 7)])
def test_prime_power_value(e):
    assert abs(numeric(prime_power_value(5, e)) - 5 ** float(e)) < 1e-9


def test_quartic_surd_arithmetic():
    t = LocalCoeff(0, 1, 5)
    assert t * t * t * t == 5
    x = LocalCoeff(CycNum.rational(2), CycNum.rational(3), 5)
    assert x * x.inverse() == 1


def test_epsilon_and_arch_syntax():
    eps = parse_epsilon("cyc(4; 0,1), 25")
    assert eps.conductor == 25 and eps.root_number == CycNum.root(Fraction(1, 4))
    assert parse_epsilon(str(eps)) == eps
    assert eps.ratio(eps) == EpsilonDatum(CycNum.rational(1), 1)
    with pytest.raises(ValueError):
        EpsilonDatum(CycNum.rational(0), 1)
    with pytest.raises(ValueError):
        parse_epsilon("1")
    a = parse_arch("gamma(0, 1/2, 1)")
    assert a == ArchFactor((Fraction(1), Fraction(0), Fraction(1, 2)))
    assert parse_arch(str(a)) == a
    assert parse_arch("gamma()") == ArchFactor()
    with pytest.raises(ValueError):
        ArchFactor((Fraction(1, 3),))
