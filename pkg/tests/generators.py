"""Seeded random inputs shared by the unit and acceptance tests."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from semired.cyclo import CycNum, is_prime
from semired.dirichlet import DirichletCharacter, LocalPrescription, parse_dirichlet
from semired.fields import QQ, CyclicExtensionDatum
from semired.ldata import FormalAutDatum, base_change_formal, twist_ldata
from semired.local import EpsilonDatum, InverseRoot, LocalFactor
from semired.reduction import DescentObject

GW_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)

# cutting characters of prime order, keyed by degree; conductors are prime powers
CUTTERS = {
    2: [parse_dirichlet(s) for s in ("dirichlet(3; 2:-1)", "dirichlet(4; 3:-1)", "dirichlet(5; 2:-1)",
                                     "dirichlet(7; 3:-1)", "dirichlet(11; 2:-1)")],
    3: [parse_dirichlet(s) for s in ("dirichlet(7; 3:e(1/3))", "dirichlet(9; 2:e(1/3))",
                                     "dirichlet(13; 2:e(1/3))", "dirichlet(19; 2:e(1/3))")],
}


def random_prescriptions(rng: random.Random, orders=(2, 3, 4, 5, 6)) -> tuple[list[LocalPrescription], int]:
    """Up to three odd primes, each unramified or tamely ramified, for order m."""
    m = rng.choice(orders)
    out = []
    for p in rng.sample(GW_PRIMES, rng.randint(1, 3)):
        d = gcd(m, p - 1)
        if d > 1 and rng.random() < 0.5:
            out.append(LocalPrescription(p, 1, (Fraction(rng.randrange(1, d), d),)))
        else:
            out.append(LocalPrescription.unramified(p, Fraction(rng.randrange(m), m)))
    return out, m


def random_factor(rng: random.Random, q: int, degree: int, weights=(Fraction(0),), denominators=(12,)) -> LocalFactor:
    roots = []
    for _ in range(degree):
        k = rng.choice(denominators)
        roots.append(InverseRoot(Fraction(rng.randrange(k), k), rng.choice(weights), q))
    return LocalFactor(q, roots)


def random_formal(rng: random.Random, primes, weights=(Fraction(0),), name: str = "pi",
                  with_epsilon: bool = False) -> FormalAutDatum:
    facs = {f"v{p}": random_factor(rng, p, rng.randint(1, 3), weights) for p in primes}
    eps = None
    if with_epsilon:
        eps = EpsilonDatum(CycNum.root(Fraction(rng.randrange(12), 12)), rng.randint(1, 10**4))
    return FormalAutDatum.build(QQ, facs, epsilon=eps, name=name)


@dataclass
class DescentCase:
    base: FormalAutDatum
    chars: list[DirichletCharacter]
    objects: list[DescentObject]
    r: int


def descent_case(rng: random.Random, m: int, p: int, n_places: int = 24) -> DescentCase:
    """Base-change a random F-object to m disjoint cyclic extensions of degree p."""
    chars = rng.sample(CUTTERS[p], m)
    conductor_primes = {q for chi in chars for q in _prime_factors(chi.modulus)}
    primes = [q for q in range(11, 400) if is_prime(q) and q not in conductor_primes][:n_places]
    base = random_formal(rng, primes, name="pi0")
    r = rng.randrange(p)
    good = frozenset(base.labels)
    objects = []
    for i, chi in enumerate(chars):
        ext = CyclicExtensionDatum(QQ, chi, f"K{i + 1}")
        seed = twist_ldata(base, chars[0] ** r) if i == 0 else None
        objects.append(DescentObject.from_datum(base_change_formal(base, ext), ext, good, seed))
    return DescentCase(base, chars, objects, r)


def corrupt(case: DescentCase, rng: random.Random) -> list[DescentObject]:
    """Twist the factor(s) above one base place of the second object by a fifth root of unity."""
    obj = case.objects[1]
    table = dict(obj.table)
    v = rng.choice(sorted(case.base.labels))
    above = sorted(w for w in table if w == v or w.startswith(v + "."))
    hit = above if rng.random() < 0.5 else above[:1]
    for w in hit:
        table[w] = table[w].twist(Fraction(1, 5))
    bad = DescentObject(obj.ext, tuple(table.items()), obj.good, obj.seed)
    return [case.objects[0], bad] + case.objects[2:]


def _prime_factors(n: int) -> set[int]:
    return {q for q in range(2, n + 1) if n % q == 0 and is_prime(q)}


def compositum_tables(case: DescentCase) -> dict[tuple[int, int], DescentObject]:
    """Tables over K_i K_j, reached through K_i, for every pair i < j."""
    out = {}
    for i, a in enumerate(case.objects):
        for j in range(i + 1, len(case.objects)):
            ext = CyclicExtensionDatum(a.field, case.chars[j])
            over_a = base_change_formal(case.base, a.ext)
            tab = base_change_formal(over_a, ext)
            out[(i, j)] = DescentObject(ext, tab.factors, a.good)
    return out
