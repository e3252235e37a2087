"""Built-in fixtures: small Artin data over Q with chosen bad places.

Good places get a Frobenius drawn from ``random.Random(f"{name}:{l}")`` so
the tables are reproducible without being hand-written.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .cyclo import CycNum, is_prime, zeta
from .groups import FiniteGroup, cyclic_group, quaternion_group, symmetric_group
from .ldata import GaloisDatum, PlaceRecord
from .reps import Representation

GOOD_PRIMES = tuple(p for p in range(11, 200) if is_prime(p))


def _places(G: FiniteGroup, name: str, bad: Mapping[int, tuple[int, Sequence[int]]],
            good: Sequence[int]) -> list[PlaceRecord]:
    out = []
    for ell, (frob, inertia) in bad.items():
        out.append(PlaceRecord(f"v{ell}", ell, frob, frozenset(inertia)))
    for ell in good:
        if ell in bad:
            continue
        rng = random.Random(f"{name}:{ell}")
        out.append(PlaceRecord(f"v{ell}", ell, rng.randrange(G.order)))
    return out


def _good(exclude: Sequence[int], count: int = 30) -> list[int]:
    return [p for p in GOOD_PRIMES if p not in exclude][:count]


def c2_character() -> GaloisDatum:
    """Quadratic character with inertia C2 at 5."""
    G = cyclic_group(2)
    rep = Representation.from_linear(G, [Fraction(0), Fraction(1, 2)], "chi2")
    places = _places(G, "c2", {5: (0, [1])}, [3, 7] + _good([5]))
    return GaloisDatum(rep, places, name="c2")


def c3_character() -> GaloisDatum:
    """Cubic character with inertia C3 at 7."""
    G = cyclic_group(3)
    rep = Representation.from_linear(G, [Fraction(0), Fraction(1, 3), Fraction(2, 3)], "chi3")
    places = _places(G, "c3", {7: (0, [1, 2])}, [2, 3, 5] + _good([7]))
    return GaloisDatum(rep, places, name="c3")


def s3_representation() -> Representation:
    G = symmetric_group(3)
    cyc, swap = G.generator_labels
    w = zeta(3, 1)
    one, zero = CycNum.rational(1), CycNum.rational(0)
    return Representation.from_generators(
        G, {cyc: ((w, zero), (zero, w * w)), swap: ((zero, one), (one, zero))}, "rho_S3")


def s3_datum(bad: Optional[Mapping[int, str]] = None, name: str = "s3") -> GaloisDatum:
    """2-dimensional S3 datum; ``bad`` maps a prime to 'C2', 'C3' or 'S3'."""
    rep = s3_representation()
    G = rep.group
    cyc, swap = G.generator_labels
    e = G.identity
    c3 = sorted(G.generated({cyc}))
    kinds = {"C2": (e, [e, swap]), "C3": (e, c3), "S3": (e, list(range(G.order)))}
    bad = dict(bad or {7: "S3"})
    table = {ell: kinds[k] for ell, k in bad.items()}
    places = _places(G, name, table, [2, 3, 5] + _good(list(bad)))
    return GaloisDatum(rep, places, name=name)


def q8_representation() -> Representation:
    G = quaternion_group()
    i = CycNum.root(Fraction(1, 4))
    one, zero = CycNum.rational(1), CycNum.rational(0)
    gi, gj = 2, 4  # element labels of i and j
    return Representation.from_generators(
        G, {gi: ((i, zero), (zero, -i)), gj: ((zero, -one), (one, zero))}, "rho_Q8")


def q8_datum() -> GaloisDatum:
    """2-dimensional Q8 datum with inertia {1,-1} at 5 and trivial Frobenius there."""
    rep = q8_representation()
    G = rep.group
    places = _places(G, "q8", {5: (0, [0, 1])}, [3, 7] + _good([5], 40))
    return GaloisDatum(rep, places, name="q8")


def c6_datum() -> GaloisDatum:
    """Sextic character with inertia C6 at 7."""
    G = cyclic_group(6)
    rep = Representation.from_linear(G, [Fraction(k, 6) for k in range(6)], "chi6")
    places = _places(G, "c6", {7: (0, range(6))}, [2, 3, 5] + _good([7]))
    return GaloisDatum(rep, places, name="c6")


BUILTIN: dict[str, Callable[[], GaloisDatum]] = {
    "c2": c2_character,
    "c3": c3_character,
    "s3": s3_datum,
    "s3-three": lambda: s3_datum({5: "C2", 13: "C3", 7: "S3"}, "s3-three"),
    "s3-two": lambda: s3_datum({5: "C2", 7: "C3"}, "s3-two"),
    "s3-c3": lambda: s3_datum({7: "C3"}, "s3-c3"),
    "q8": q8_datum,
    "c6": c6_datum,
}


def builtin(name: str) -> GaloisDatum:
    try:
        return BUILTIN[name]()
    except KeyError:
        raise KeyError(f"unknown built-in fixture {name!r}; choose from {sorted(BUILTIN)}") from None
