"""A family of small Galois data for the additivity and base-change tests.

Each entry pairs two representations of one group of order at most 48 with
a reproducible place table: tame places carry a cyclic inertia group and a
Frobenius drawn from its normalizer, good places a random Frobenius.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from semired.builtin import q8_representation, s3_representation
from semired.cyclo import CycNum
from semired.groups import (
    FiniteGroup,
    cyclic_group,
    dihedral_group,
    direct_product,
    from_permutations,
    quaternion_group,
    symmetric_group,
)
from semired.ldata import GaloisDatum, PlaceRecord
from semired.reps import Representation, dual, one_dim_characters

BAD_PRIMES = (3, 5, 7)
GOOD_PRIMES = (11, 13, 17, 19, 23, 29, 31, 37, 41, 43)


@dataclass
class ZooEntry:
    name: str
    first: Representation
    second: Representation
    places: list[PlaceRecord]

    def data(self) -> tuple[GaloisDatum, GaloisDatum]:
        return (GaloisDatum(self.first, self.places, name=self.name + ":1"),
                GaloisDatum(self.second, self.places, name=self.name + ":2"))


def permutation_rep(G: FiniteGroup, name: str) -> Representation:
    one, zero = CycNum.rational(1), CycNum.rational(0)
    mats = []
    for perm in G.permutations:
        d = len(perm)
        mats.append(tuple(tuple(one if perm[x] == i else zero for x in range(d)) for i in range(d)))
    return Representation(G, mats, name, check=False)


def linear_rep(G: FiniteGroup, index: int, name: str) -> Representation:
    chars = one_dim_characters(G)
    return Representation.from_linear(G, chars[index % len(chars)].turns, name)


def tensor_with_linear(rho: Representation, turns, G: FiniteGroup, n: int) -> Representation:
    """rho(g) * psi(h) on G x H, with element (g, h) labelled g * n + h."""
    mats = []
    for x in range(G.order):
        c = CycNum.root(turns[x % n])
        mats.append(tuple(tuple(a * c for a in row) for row in rho.matrices[x // n]))
    return Representation(G, mats, rho.name + "*psi", check=False)


def lift_to_product(rho: Representation, P: FiniteGroup, n: int) -> Representation:
    return Representation(P, [rho.matrices[x // n] for x in range(P.order)], rho.name, check=False)


def place_table(G: FiniteGroup, seed: str) -> list[PlaceRecord]:
    rng = random.Random(seed)
    out = []
    for ell in BAD_PRIMES:
        h = rng.randrange(G.order)
        inertia = G.generated({h})
        normalizer = [g for g in range(G.order) if G.normalizes(g, inertia)]
        out.append(PlaceRecord(f"v{ell}", ell, rng.choice(normalizer), inertia))
    for ell in GOOD_PRIMES:
        out.append(PlaceRecord(f"v{ell}", ell, rng.randrange(G.order)))
    return out


def zoo() -> list[ZooEntry]:
    out: list[ZooEntry] = []

    def add(name, first, second):
        out.append(ZooEntry(name, first, second, place_table(first.group, name)))

    for n in range(2, 13):
        G = cyclic_group(n)
        add(f"C{n}", linear_rep(G, 1, "chi"), linear_rep(G, n - 1, "chi'"))
    S3 = s3_representation()
    add("S3 std+sign", S3, linear_rep(S3.group, 1, "sign"))
    add("S3 std+perm", S3, Representation(S3.group, permutation_rep(S3.group, "perm").matrices,
                                          "perm", check=False))
    Q8 = q8_representation()
    add("Q8 std+dual", Q8, dual(Q8))
    add("Q8 std+linear", Q8, linear_rep(Q8.group, 2, "psi"))
    for n in (4, 5, 6):
        D = dihedral_group(n)
        add(f"D{n} perm+linear", permutation_rep(D, "perm"), linear_rep(D, 1, "psi"))
    S4 = symmetric_group(4)
    add("S4 perm+sign", permutation_rep(S4, "perm"), linear_rep(S4, 1, "sign"))
    A4 = from_permutations([(1, 2, 0, 3), (1, 0, 3, 2)], "A4")
    add("A4 perm+cubic", permutation_rep(A4, "perm"), linear_rep(A4, 1, "omega"))
    C2 = cyclic_group(2)
    P = direct_product(S4, C2)
    perm = lift_to_product(permutation_rep(S4, "perm"), P, 2)
    add("S4xC2 perm+twisted", perm, tensor_with_linear(permutation_rep(S4, "perm"), [Fraction(0), Fraction(1, 2)], P, 2))
    C4 = cyclic_group(4)
    P = direct_product(C4, C4)
    add("C4xC4 linear", linear_rep(P, 5, "psi1"), linear_rep(P, 7, "psi2"))
    Q = quaternion_group()
    P = direct_product(Q, cyclic_group(3))
    add("Q8xC3 std*omega", lift_to_product(Q8, P, 3),
        tensor_with_linear(Q8, [Fraction(0), Fraction(1, 3), Fraction(2, 3)], P, 3))
    return out
