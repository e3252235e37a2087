"""Invariant suite on the built-in fixtures, used by ``semired selftest``."""
from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from typing import Optional

from .builtin import builtin
from .certificate import certify_datum, replay
from .dirichlet import DirichletCharacter, LocalPrescription, parse_prescription
from .fields import CyclicExtensionDatum
from .fixtures import galois_document, load_fixture, parse_fixture, print_fixture
from .grunwald import matches, solve
from .ldata import GaloisDatum, artin_local_factor, base_change_formal, restrict_datum, to_formal
from .reduction import base_label
from .reps import direct_sum, self_twist_characters


def base_change_paths_agree(d: GaloisDatum, ext: CyclicExtensionDatum) -> bool:
    """Restriction of the Galois datum against the character-product formula.

    Compared at places where both d and the extension are unramified.
    """
    restricted = restrict_datum(d, ext.chi)
    formal = base_change_formal(to_formal(d), ext, check=True)
    for pl in restricted.places:
        below = base_label(pl.label, set(d.labels))
        if not d.unramified_at(below) or ext.kind(d.place(below).prime) == "ramified":
            continue
        if artin_local_factor(restricted, pl.label) != formal.factor(pl.label):
            return False
    return True


def additivity_holds(d: GaloisDatum) -> bool:
    doubled = GaloisDatum(direct_sum(d.rep, d.rep), d.places, d.field, name=d.name + "+")
    return all(artin_local_factor(doubled, v) == artin_local_factor(d, v) + artin_local_factor(d, v)
               for v in d.labels)


SELF_TWISTS = {"s3": 2, "q8": 4, "c6": 1}
CUTTERS = (DirichletCharacter(5, ((5, 1, (Fraction(1, 2),)),)),
           DirichletCharacter(7, ((7, 1, (Fraction(1, 3),)),)))


FUZZ_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def fuzz_prescriptions(rng: random.Random) -> tuple[list[LocalPrescription], int]:
    m = rng.choice([2, 3, 4, 5, 6])
    out = []
    for p in rng.sample(FUZZ_PRIMES, rng.randint(1, 3)):
        d = gcd(m, p - 1)
        if d > 1 and rng.random() < 0.5:
            out.append(LocalPrescription(p, 1, (Fraction(rng.randrange(1, d), d),)))
        else:
            out.append(LocalPrescription.unramified(p, Fraction(rng.randrange(m), m)))
    return out, m


def run_selftest(seed: Optional[int] = None, cases: int = 20) -> list[tuple[str, bool]]:
    """Fixed checks; with a seed, also ``cases`` random prescription round trips."""
    out = []
    for name, count in SELF_TWISTS.items():
        d = builtin(name)
        text = galois_document(d).text()
        out.append((f"{name}: fixture print/parse round trip", print_fixture(parse_fixture(text)) == text))
        again = load_fixture(text).datum
        out.append((f"{name}: reloaded factors agree",
                    all(artin_local_factor(again, v) == artin_local_factor(d, v) for v in d.labels)))
        out.append((f"{name}: additivity", additivity_holds(d)))
        out.append((f"{name}: {count} self-twists", len(self_twist_characters(d.rep)) == count))
        for chi in CUTTERS:
            ext = CyclicExtensionDatum(d.field, chi)
            out.append((f"{name}: base change along {chi}", base_change_paths_agree(d, ext)))
        cert, run = certify_datum(d)
        res = replay(cert)
        out.append((f"{name}: reduction checks", all(ok for _, ok in run.checks)))
        out.append((f"{name}: certificate replay", res.passed))
    chi = solve([parse_prescription("at 5 unram order 2 value -1")], 2)
    out.append(("gw: mod-3 quadratic character", str(chi) == "dirichlet(3; 2:-1)"))
    if seed is not None:
        rng = random.Random(seed)
        for i in range(cases):
            prs, m = fuzz_prescriptions(rng)
            chi = solve(prs, m)
            primes = ",".join(str(pr.prime) for pr in prs)
            out.append((f"gw fuzz {seed}/{i}: order {m} at {primes}", chi.order == m and matches(chi, prs)))
    return out
