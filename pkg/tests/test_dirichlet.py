from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import char_order, char_turn, component_conductor_exponent
from semired.dirichlet import (
    DirichletCharacter,
    LocalPrescription,
    all_characters,
    character_group,
    format_turn,
    local_component,
    parse_dirichlet,
    parse_prescription,
    parse_turn,
    unit_group_generators,
)

MODULI = [1, 3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 25, 27]


def oracle_conductor(chi: DirichletCharacter) -> int:
    out = 1
    for p, a, turns in chi.components:
        out *= p ** component_conductor_exponent(p, a, turns)
    return out


@pytest.mark.parametrize("N", MODULI)
def test_values_order_and_conductor_match_brute_force(N):
    chars = all_characters(N)
    assert len(chars) == sum(1 for n in range(1, N + 1) if gcd(n, N) == 1)
    for chi in chars:
        for n in range(1, 2 * N):
            assert chi.turn(n) == char_turn(chi, n)
        assert chi.order == char_order(chi)
        assert chi.conductor == oracle_conductor(chi)


@given(st.sampled_from(MODULI), st.data())
def test_products_are_pointwise(N, data):
    chars = all_characters(N)
    a = data.draw(st.sampled_from(chars))
    b = data.draw(st.sampled_from(chars))
    prod = a * b
    for n in range(1, 3 * N):
        if gcd(n, N) == 1:
            assert prod.turn(n) == (a.turn(n) + b.turn(n)) % 1


@given(st.sampled_from(MODULI), st.data())
def test_primitive_character_agrees_on_units(N, data):
    chi = data.draw(st.sampled_from(all_characters(N)))
    prim = chi.primitive()
    assert prim.modulus == chi.conductor and prim.is_primitive()
    for n in range(1, 2 * N):
        if gcd(n, N) == 1:
            assert prim.turn(n) == chi.turn(n)


@given(st.sampled_from(MODULI), st.data())
def test_text_round_trip(N, data):
    chi = data.draw(st.sampled_from(all_characters(N)))
    assert parse_dirichlet(str(chi)) == chi


def test_print_form():
    chi = parse_dirichlet("dirichlet(3; 2:-1)")
    assert str(chi) == "dirichlet(3; 2:-1)"
    assert chi.order == 2 and chi.turn(5) == Fraction(1, 2)
    cubic = parse_dirichlet("dirichlet(7; 3:zeta(3,1))")
    assert str(cubic) == "dirichlet(7; 3:e(1/3))"


def test_parse_errors():
    for bad in ("dirichlet(7; 2:e(1/3))", "dirichlet(7; 3:e(1/5))", "chi(7)", "dirichlet(0; )"):
        with pytest.raises(ValueError):
            parse_dirichlet(bad)


def test_turn_syntax():
    assert parse_turn("1") == 0
    assert parse_turn("-1") == Fraction(1, 2)
    assert parse_turn("e(3/4)") == Fraction(3, 4)
    assert parse_turn("zeta(6,5)") == Fraction(5, 6)
    assert parse_turn("e(-1/3)") == Fraction(2, 3)
    for t in (Fraction(0), Fraction(1, 2), Fraction(2, 5)):
        assert parse_turn(format_turn(t)) == t
    with pytest.raises(ValueError):
        parse_turn("i")


def test_unit_group_generators_generate():
    for N in MODULI:
        gens = unit_group_generators(N)
        reached = {1 % N}
        frontier = list(reached)
        while frontier:
            nxt = []
            for x in frontier:
                for g, _ in gens:
                    y = x * g % N
                    if y not in reached:
                        reached.add(y)
                        nxt.append(y)
            frontier = nxt
        assert len(reached) == sum(1 for n in range(N) if gcd(n, N) == 1)


def test_character_group_of_two_quadratics():
    a = parse_dirichlet("dirichlet(3; 2:-1)")
    b = parse_dirichlet("dirichlet(4; 3:-1)")
    X = character_group([a, b])
    assert len(X) == 4
    assert (a * b).modulus == 12 and (a * b) in X


def test_local_components_and_prescription_syntax():
    chi = parse_dirichlet("dirichlet(35; 22:-1, 31:e(1/3))")
    at5 = local_component(chi, 5)
    assert at5.ramified and at5.exponent == 1
    at2 = local_component(chi, 2)
    assert not at2.ramified and at2.value == chi.turn(2)
    for pr in (at5, at2, local_component(chi, 7)):
        assert parse_prescription(str(pr)) == pr
    assert parse_prescription("at 5 unram order 2 value -1") == LocalPrescription.unramified(5, Fraction(1, 2))
    assert parse_prescription("at 2 ram mod 4 values -1").order == 2
    with pytest.raises(ValueError):
        parse_prescription("at 5 unram order 3 value -1")
    with pytest.raises(ValueError):
        parse_prescription("at 6 unram value 1")
    with pytest.raises(ValueError):
        parse_prescription("at 7 ram mod 49 values e(1/3)")  # not primitive mod 49
