import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from generators import random_prescriptions
from oracles import char_order, char_turn, meets_prescription, wang_check
from semired.cyclo import CycNum
from semired.dirichlet import LocalPrescription, all_characters, parse_dirichlet, parse_prescription
from semired.grunwald import (
    ConflictingPrescriptions,
    Infeasible,
    matches,
    solve,
    solve_report,
    special_case_check,
)


def test_quadratic_character_nonsplit_at_five():
    chi = solve([parse_prescription("at 5 unram order 2 value -1")], 2)
    assert str(chi) == "dirichlet(3; 2:-1)"
    assert char_turn(chi, 5) == Fraction(1, 2)


@given(st.integers(0, 10**6))
def test_random_prescriptions_are_met_exactly(seed):
    prs, m = random_prescriptions(random.Random(seed))
    chi = solve(prs, m)
    assert char_order(chi) == m
    assert all(meets_prescription(chi, pr) for pr in prs)
    assert matches(chi, prs)


def test_adaptive_auxiliary_choice_reaches_the_target():
    # the six smallest admissible primes cannot move chi(43) off the squares
    prs = [parse_prescription("at 43 unram order 2 value -1"), parse_prescription("at 23 unram value 1")]
    res = solve_report(prs, 6)
    assert char_order(res.character) == 6
    assert all(meets_prescription(res.character, pr) for pr in prs)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_brute_force_over_small_moduli(m):
    """When some character of conductor < 60 works, the solver must succeed too."""
    rng = random.Random(m)
    for _ in range(10):
        p = rng.choice([3, 5, 7, 11, 13])
        pr = LocalPrescription.unramified(p, Fraction(rng.randrange(m), m))
        exists = any(
            chi.order == m and meets_prescription(chi, pr)
            for N in range(1, 60) if N % p
            for chi in all_characters(N, order_divides=m) if chi.is_primitive())
        chi = solve([pr], m)
        assert exists
        assert meets_prescription(chi, pr) and char_order(chi) == m


def test_order_eight_obstruction_at_two():
    pr = parse_prescription("at 2 unram order 8 value e(1/8)")
    special, prod = special_case_check([pr], 8)
    assert special and prod == CycNum.rational(-1)
    with pytest.raises(Infeasible) as info:
        solve([pr], 8)
    assert info.value.a0_product == CycNum.rational(-1)
    assert info.value.double_order_feasible
    double = info.value.double_order
    assert char_order(double) == 16 and meets_prescription(double, pr)


def test_wang_obstruction_holds_for_small_primes():
    assert wang_check(10**5)
    for N in range(1, 256, 2):
        for chi in all_characters(N, order_divides=8):
            if chi.is_primitive() and chi.order == 8:
                assert char_turn(chi, 2).denominator != 8


def test_order_eight_without_the_obstruction():
    chi = solve([parse_prescription("at 2 unram order 4 value e(1/4)")], 8)
    assert char_order(chi) == 8
    assert char_turn(chi.primitive(), 2) == Fraction(1, 4)


def test_conflicting_and_invalid_prescriptions():
    a = parse_prescription("at 5 unram value -1")
    b = parse_prescription("at 5 unram value 1")
    with pytest.raises(ConflictingPrescriptions):
        solve([a, b], 2)
    with pytest.raises(ValueError):
        solve([parse_prescription("at 7 unram value e(1/3)")], 2)
    with pytest.raises(ValueError):
        solve([a], 2, avoid=[5])


def test_avoid_and_exclude():
    pr = parse_prescription("at 5 unram order 2 value -1")
    first = solve([pr], 2)
    second = solve([pr], 2, avoid=[3])
    assert second.modulus % 3 and meets_prescription(second, pr)
    third = solve([pr], 2, exclude=[first])
    assert not third.same_as(first) and meets_prescription(third, pr)


def test_ramified_components_are_kept():
    pr = parse_prescription("at 7 ram mod 7 values e(1/3)")
    chi = solve([pr, parse_prescription("at 2 unram value 1")], 3)
    assert meets_prescription(chi, pr)
    assert chi.primitive().component(7)[1] == (Fraction(1, 3),)
    assert parse_dirichlet(str(chi)) == chi
