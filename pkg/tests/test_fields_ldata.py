import random
from fractions import Fraction
from math import gcd, lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from generators import CUTTERS, random_formal
from oracles import char_turn, numeric_roots
from semired.builtin import builtin, c2_character
from semired.cyclo import CycNum
from semired.dirichlet import parse_dirichlet
from semired.fields import QQ, AbelianField, CyclicExtensionDatum, ExtensionError, places_above, twist_turn
from semired.groups import GroupError, cyclic_group
from semired.ldata import (
    DisjointnessError,
    GaloisDatum,
    PlaceError,
    PlaceRecord,
    artin_local_factor,
    base_change_formal,
    contragredient,
    local_factor,
    partial_l_series,
    restrict_datum,
    to_formal,
    twist_ldata,
)
from semired.reps import Representation, direct_sum

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
QUAD = CUTTERS[2]
CUBIC = CUTTERS[3]


def oracle_splitting(chars, ell):
    """(e, f, g) for the field cut by ``chars``, by brute force on the character group."""
    group = {parse_dirichlet("dirichlet(1; )")}
    frontier = list(group)
    while frontier:
        nxt = []
        for a in frontier:
            for c in chars:
                b = (a * c).primitive()
                if not any(b.same_as(x) for x in group):
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    unram = [c for c in group if c.modulus % ell]
    f = 1
    for c in unram:
        f = lcm(f, char_turn(c, ell).denominator)
    e = len(group) // len(unram)
    return e, f, len(group) // (e * f)


@pytest.mark.parametrize("chi", QUAD)
@pytest.mark.parametrize("ell", SMALL_PRIMES)
def test_quadratic_splitting_follows_the_character(chi, ell):
    e, f, g = AbelianField("K", (chi,)).splitting(ell)
    if chi.modulus % ell == 0:
        assert (e, f, g) == (2, 1, 1)
    else:
        assert (e, f, g) == ((1, 1, 2) if chi.turn(ell) == 0 else (1, 2, 1))


@pytest.mark.parametrize("ell", SMALL_PRIMES)
def test_cubic_splitting_by_cube_residues(ell):
    K = AbelianField("K", (CUBIC[0],))  # conductor 7
    e, f, g = K.splitting(ell)
    if ell == 7:
        assert (e, f, g) == (3, 1, 1)
    elif ell % 7 in (1, 6):  # the cubes mod 7
        assert (e, f, g) == (1, 1, 3)
    else:
        assert (e, f, g) == (1, 3, 1)


@given(st.lists(st.sampled_from(QUAD + CUBIC), min_size=1, max_size=3), st.sampled_from(SMALL_PRIMES))
def test_compositum_splitting_matches_brute_force(chars, ell):
    K = AbelianField("K", tuple(c.primitive() for c in chars))
    e, f, g = K.splitting(ell)
    assert e * f * g == K.degree
    assert (e, f, g) == oracle_splitting(chars, ell)


def test_compositum_degree_and_membership():
    a, b = QUAD[0], QUAD[2]
    K = QQ.extend(a).extend(b)
    assert K.degree == 4 and K.contains(a * b)
    assert K.extend(CUBIC[0]).degree == 12
    assert not K.contains(CUBIC[0])


def test_cyclic_extension_needs_prime_order_and_a_new_character():
    with pytest.raises(ExtensionError):
        CyclicExtensionDatum(QQ, parse_dirichlet("dirichlet(5; 2:e(1/4))"))
    K = QQ.extend(QUAD[0])
    with pytest.raises(ExtensionError):
        CyclicExtensionDatum(K, QUAD[0])


def test_places_above_by_kind():
    ext = CyclicExtensionDatum(QQ, QUAD[2])  # conductor 5
    assert [w.label for w in places_above(ext, "v11", 11)] == ["v11.0", "v11.1"]
    assert [(w.q, w.kind) for w in places_above(ext, "v7", 7)] == [(49, "inert")]
    assert [w.kind for w in places_above(ext, "v5", 5)] == ["ramified"]


def test_twist_turn_over_a_field():
    chi = QUAD[2]
    assert twist_turn(QQ, chi, 7) == Fraction(1, 2)
    assert twist_turn(QQ, chi, 49) == 0
    assert twist_turn(QQ, chi, 5) is None
    # over Q(sqrt 5) the character becomes trivial on norms
    K = QQ.extend(chi)
    assert twist_turn(K, chi, 5) == 0


def test_artin_factors_of_the_quadratic_character():
    d = c2_character()
    for v in d.labels:
        pl = d.place(v)
        f = artin_local_factor(d, v)
        if pl.prime == 5:
            assert f.degree == 0
        else:
            assert f.degree == 1
    assert artin_local_factor(d, "extra", frobenius=1, q=97).roots[0].turn == Fraction(1, 2)
    with pytest.raises(PlaceError):
        artin_local_factor(d, "extra")


def test_monodromy_drops_the_top_eigenvalues():
    G = cyclic_group(1)
    rep = Representation.from_linear(G, [Fraction(0)])
    rep2 = direct_sum(rep, rep)
    d = GaloisDatum(rep2, [PlaceRecord("v3", 3, 0, monodromy=(2,))])
    assert artin_local_factor(d, "v3").degree == 1
    assert d.inertia_image_trivial("v3")


def test_place_validation():
    G = cyclic_group(2)
    rep = Representation.from_linear(G, [Fraction(0), Fraction(1, 2)])
    with pytest.raises(GroupError):
        GaloisDatum(rep, [PlaceRecord("v3", 3, 5)])
    with pytest.raises(ValueError):
        GaloisDatum(rep, [PlaceRecord("v3", 3, 0), PlaceRecord("v3", 3, 1)])
    with pytest.raises(ValueError):
        GaloisDatum(rep, [PlaceRecord("v3", 3, 0, monodromy=(3,))])
    with pytest.raises(ValueError):
        PlaceRecord("v6", 6, 0)


@pytest.mark.parametrize("name", ["c2", "c3", "s3", "q8", "c6"])
@pytest.mark.parametrize("chi", [QUAD[1], QUAD[4], CUBIC[2]])
def test_twisting_commutes_with_passing_to_formal_data(name, chi):
    d = builtin(name)
    galois = to_formal(twist_ldata(d, chi))
    formal = twist_ldata(to_formal(d), chi)
    for v in d.labels:
        if chi.modulus % d.place(v).prime and d.unramified_at(v):
            assert local_factor(galois, v) == local_factor(formal, v)


@pytest.mark.parametrize("name", ["c3", "s3", "q8"])
def test_contragredient_inverts_roots(name):
    d = builtin(name)
    dual = contragredient(d)
    assert dual.name == name + "~" and contragredient(dual).name == name
    for v in d.labels:
        f, g = local_factor(d, v), local_factor(dual, v)
        assert sorted(round((1 / z).real, 9) for z in numeric_roots(f)) == \
            sorted(round(z.real, 9) for z in numeric_roots(g))
    formal = to_formal(d)
    assert to_formal(dual).table() == contragredient(formal).table()


@pytest.mark.parametrize("name", ["c2", "s3", "q8"])
@pytest.mark.parametrize("chi", [QUAD[0], CUBIC[1]])
def test_restriction_matches_formal_base_change(name, chi):
    d = builtin(name)
    ext = CyclicExtensionDatum(d.field, chi)
    restricted = to_formal(restrict_datum(d, chi))
    formal = base_change_formal(to_formal(d), ext, check=True)
    assert set(restricted.labels) == set(formal.labels)
    for w in formal.labels:
        if restricted.is_semistable(w):
            assert local_factor(restricted, w) == local_factor(formal, w)


def test_restriction_rejects_a_linked_character():
    base = c2_character()
    chi = QUAD[2]
    d = GaloisDatum(base.rep, base.places, name="c2", linked=[((Fraction(0), Fraction(1, 2)), chi)])
    with pytest.raises(DisjointnessError):
        restrict_datum(d, chi)
    with pytest.raises(PlaceError):
        restrict_datum(base, QUAD[0], kernels={"nowhere": {}})


def test_base_change_needs_matching_fields():
    formal = random_formal(random.Random(1), [5, 7])
    ext = CyclicExtensionDatum(QQ.extend(QUAD[0]), QUAD[2])
    with pytest.raises(ValueError):
        base_change_formal(formal, ext)


@pytest.mark.parametrize("name", ["c2", "c3", "s3"])
def test_partial_series_is_multiplicative(name):
    a = partial_l_series(builtin(name), 200)
    assert a[1] == CycNum.rational(1)
    for m in range(2, 15):
        for n in range(2, 200 // m + 1):
            if gcd(m, n) == 1:
                assert a[m * n] == a[m] * a[n]


def test_partial_series_of_a_character_is_the_character():
    d = c2_character()
    a = partial_l_series(d, 150)
    listed = {d.place(v).prime for v in d.labels}
    for n in range(1, 151):
        primes = {p for p in SMALL_PRIMES + list(range(53, 151)) if n % p == 0 and all(p % k for k in range(2, p))}
        if primes <= listed and 5 not in primes:
            turn = sum((Fraction(1, 2) * bool(d.place(f"v{p}").frobenius) * _mult(n, p) for p in primes), Fraction(0))
            assert a[n] == CycNum.root(turn % 1)
    with pytest.raises(ValueError):
        partial_l_series(d, 0)


def _mult(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k
