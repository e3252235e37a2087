"""Dirichlet characters with prescribed local components (Grunwald-Wang over Q).

The construction is explicit.  Ramified prescriptions are multiplied
together by CRT.  Unramified prescriptions are then met by twisting with
characters of auxiliary primes L = 1 (mod m).  Primes are scanned smallest
first and kept when their index column enlarges the set of reachable
values; once the target is reachable the exponents are searched in
lexicographic order until the order comes out exactly m.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .cyclo import CycNum, format_cyc, is_prime
from .dirichlet import (
    DirichletCharacter,
    LocalPrescription,
    character_group,
    local_component,
    primitive_root,
)


class Infeasible(ValueError):
    """No character of the requested order meets the prescriptions."""

    def __init__(self, message: str, a0_product: Optional[CycNum] = None,
                 double_order: Optional[DirichletCharacter] = None, checked_double: bool = False):
        super().__init__(message)
        self.a0_product = a0_product
        self.double_order = double_order
        self.checked_double = checked_double

    @property
    def double_order_feasible(self) -> Optional[bool]:
        if not self.checked_double:
            return None
        return self.double_order is not None


class ConflictingPrescriptions(ValueError):
    pass


@dataclass
class SolveReport:
    character: DirichletCharacter
    auxiliary: tuple[int, ...] = ()
    repaired_at: Optional[int] = None
    special: bool = False
    a0_product: CycNum = field(default_factory=lambda: CycNum.rational(1))


def special_case_check(prescriptions: Sequence[LocalPrescription], m: int) -> tuple[bool, CycNum]:
    """Wang's condition over Q.

    Over Q the relevant 2-power root of unity gives s = 2, so the element is
    a0 = (1+i)^m.  When 8 | m this is 16^(m/8) = 2^(m/2), a rational number,
    and the condition reads prod_v eta_v(a0) = 1 over the prescribed places.
    """
    support = {pr.prime for pr in prescriptions}
    if m % 8 or 2 not in support:
        return False, CycNum.rational(1)
    a0 = 2 ** (m // 2)
    total = Fraction(0)
    for pr in prescriptions:
        if pr.prime == 2:
            if not pr.ramified:
                total += pr.value * (m // 2)
            # a ramified component leaves the uniformizer value free
        elif pr.ramified:
            total += pr.as_character().turn(a0)
    return True, CycNum.root(total)


def _index_mod(x: int, L: int, m: int, g: int) -> int:
    """ind_g(x) mod m for a prime L = 1 (mod m)."""
    e = (L - 1) // m
    y = pow(x, e, L)
    base = pow(g, e, L)
    z = 1
    for j in range(m):
        if z == y:
            return j
        z = z * base % L
    raise AssertionError("index computation failed")


def _aux_primes(m: int, banned: set[int], start: int = 2) -> Iterable[int]:
    L = start
    while True:
        if L not in banned and (L - 1) % m == 0 and is_prime(L):
            yield L
        L += 1


def _validate(prescriptions: Sequence[LocalPrescription], m: int, avoid: set[int]) -> list[LocalPrescription]:
    if m < 1:
        raise ValueError("target order must be positive")
    by_prime: dict[int, LocalPrescription] = {}
    for pr in prescriptions:
        old = by_prime.get(pr.prime)
        if old is not None and old != pr:
            raise ConflictingPrescriptions(f"two different prescriptions at {pr.prime}")
        by_prime[pr.prime] = pr
        if m % pr.order:
            raise ValueError(f"prescription at {pr.prime} has order {pr.order} not dividing {m}")
    clash = avoid & set(by_prime)
    if clash:
        raise ValueError(f"avoid-set meets the prescription support at {sorted(clash)}")
    return [by_prime[p] for p in sorted(by_prime)]


def solve_report(prescriptions: Sequence[LocalPrescription], m: int, avoid: Iterable[int] = (),
                 exclude: Sequence[DirichletCharacter] = (), max_aux: int = 6,
                 search_bound: int = 10**5, _double: bool = True) -> SolveReport:
    avoid = set(avoid)
    prescriptions = _validate(prescriptions, m, avoid)
    support = {pr.prime for pr in prescriptions}
    special, prod = special_case_check(prescriptions, m)
    repaired_at = None
    if special and prod != 1:
        repaired_at = _repair(prescriptions, m, avoid | support, prod, search_bound)
        if repaired_at is None:
            double = None
            if _double:
                try:
                    double = solve_report(prescriptions, 2 * m, avoid, exclude, max_aux,
                                          search_bound, _double=False).character
                except Infeasible:
                    double = None
            tail = ""
            if _double:
                tail = f"; order {2 * m} is {'feasible: ' + str(double) if double else 'also infeasible'}"
            raise Infeasible(
                f"order {m} is obstructed at 2: a0-product is {format_cyc(prod)} and no "
                f"auxiliary place below {search_bound} repairs it{tail}",
                a0_product=prod, double_order=double, checked_double=_double)
        L, lam = repaired_at
        prescriptions = prescriptions + [local_component(lam, L)]
        support.add(L)
        repaired_at = L

    psi0 = DirichletCharacter.trivial()
    for pr in prescriptions:
        if pr.ramified:
            psi0 = psi0 * pr.as_character()
    unram = [pr for pr in prescriptions if not pr.ramified]
    base_order = psi0.order
    excluded = set(character_group(exclude)) if exclude else set()

    aux: list[int] = []
    gens = _aux_primes(m, avoid | support)
    target = tuple(int((pr.value - psi0.turn(pr.prime)) % 1 * m) for pr in unram)
    span = {tuple(0 for _ in unram)}
    while True:
        if target in span:
            chi = _search(psi0, base_order, unram, m, aux, excluded)
            if chi is not None:
                return SolveReport(chi, tuple(aux), repaired_at, special, prod)
            if m == 1 or len(aux) >= max_aux:
                break
            L = next(gens)
            if L > search_bound:
                break
            aux.append(L)
            span = _extend_span(span, _column(L, unram, m), m)
            continue
        # only take primes whose index column enlarges the reachable set
        L = next(gens)
        if L > search_bound or len(aux) >= max_aux:
            break
        wider = _extend_span(span, _column(L, unram, m), m)
        if len(wider) > len(span):
            aux.append(L)
            span = wider
    raise Infeasible(f"no character of order {m} found with at most {max_aux} auxiliary primes",
                     a0_product=prod if special else None)


def _column(L: int, unram: list[LocalPrescription], m: int) -> tuple[int, ...]:
    g = primitive_root(L)
    return tuple(_index_mod(pr.prime, L, m, g) for pr in unram)


def _extend_span(span: set, col: tuple[int, ...], m: int) -> set:
    return {tuple((a + e * c) % m for a, c in zip(x, col)) for x in span for e in range(m)}


def _search(psi0: DirichletCharacter, base_order: int, unram: list[LocalPrescription], m: int,
            aux: list[int], excluded: set[DirichletCharacter]) -> Optional[DirichletCharacter]:
    roots = {L: primitive_root(L) for L in aux}
    need = [(pr.value - psi0.turn(pr.prime)) % 1 for pr in unram]
    idx = [[_index_mod(pr.prime, L, m, roots[L]) for pr in unram] for L in aux]
    for exps in product(range(m), repeat=len(aux)):
        ok = True
        for j, target in enumerate(need):
            got = Fraction(sum(e * idx[i][j] for i, e in enumerate(exps)), m) % 1
            if got != target:
                ok = False
                break
        if not ok:
            continue
        order = base_order
        for e in exps:
            order = lcm(order, m // gcd(e, m))
        if order != m:
            continue
        chi = psi0
        for L, e in zip(aux, exps):
            if e:
                chi = chi * _aux_character(L, m, e)
        if chi in excluded:
            continue
        return chi
    return None


def _aux_character(L: int, m: int, e: int) -> DirichletCharacter:
    """Character mod L sending the least primitive root to exp(2 pi i e/m)."""
    return DirichletCharacter(L, ((L, 1, (Fraction(e, m),)),))


def _repair(prescriptions, m, banned, prod, bound):
    """Auxiliary place v0 with eta_v0(a0) = prod^-1, or None."""
    a0 = 2 ** (m // 2)
    need = None
    for t in (Fraction(j, m) for j in range(m)):
        if CycNum.root(t) * prod == 1:
            need = t
    if need is None:
        return None
    for L in _aux_primes(m, banned | {2}, 3):
        if L > bound:
            return None
        g = primitive_root(L)
        k = _index_mod(a0 % L, L, m, g)
        for e in range(1, m):
            if Fraction(e * k, m) % 1 == need:
                return L, _aux_character(L, m, e)
    return None


def solve(prescriptions: Sequence[LocalPrescription], m: int, avoid: Iterable[int] = (),
          exclude: Sequence[DirichletCharacter] = (), **kw) -> DirichletCharacter:
    """Character of order exactly m with the given local components."""
    return solve_report(prescriptions, m, avoid, exclude, **kw).character


def matches(chi: DirichletCharacter, prescriptions: Sequence[LocalPrescription]) -> bool:
    return all(local_component(chi, pr.prime) == pr for pr in prescriptions)
