"""Abelian number fields as groups of Dirichlet characters.

Every field built by the reduction engine is abelian over Q, so it is
determined by its group X of Dirichlet characters.  Decomposition data at a
rational prime l are read off X: characters unramified at l cut the maximal
subfield unramified at l, and those that are also trivial at l cut the
maximal subfield split at l.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional

from .cyclo import factorize, is_prime, prime_power_base
from .dirichlet import (
    DirichletCharacter,
    character_group,
    character_group_vectors,
    discrete_log,
    standard_generators,
)


class ExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianField:
    label: str = "Q"
    generators: tuple[DirichletCharacter, ...] = ()

    @property
    def characters(self) -> tuple[DirichletCharacter, ...]:
        return _group(self.generators)

    @property
    def degree(self) -> int:
        return len(self.characters)

    def contains(self, chi: DirichletCharacter) -> bool:
        return chi.primitive() in set(self.characters)

    def splitting(self, ell: int) -> tuple[int, int, int]:
        """(e, f, g) of the rational prime ell."""
        return _splitting(self.generators, ell)

    def extend(self, chi: DirichletCharacter, label: Optional[str] = None) -> "AbelianField":
        return AbelianField(label or f"{self.label}({chi})", self.generators + (chi.primitive(),))

    def __str__(self) -> str:
        return self.label


@lru_cache(maxsize=None)
def _group(generators: tuple[DirichletCharacter, ...]) -> tuple[DirichletCharacter, ...]:
    return tuple(character_group(generators))


@lru_cache(maxsize=None)
def _vectors(generators: tuple[DirichletCharacter, ...]):
    return character_group_vectors(generators)


@lru_cache(maxsize=None)
def _splitting(generators: tuple[DirichletCharacter, ...], ell: int) -> tuple[int, int, int]:
    M, E, X = _vectors(generators)
    at_ell, logs, i = [], [], 0
    for p, a in sorted(factorize(M).items()):
        k = len(standard_generators(p, a))
        if p == ell:
            at_ell = list(range(i, i + k))
        else:
            logs.extend(zip(range(i, i + k), discrete_log(p, a, ell)))
        i += k
    unram = [v for v in X if not any(v[j] for j in at_ell)]
    split = [v for v in unram if sum(e * v[j] for j, e in logs) % E == 0]
    e = len(X) // len(unram)
    ef = len(X) // len(split)
    return e, ef // e, len(X) // ef


QQ = AbelianField()


@dataclass(frozen=True)
class PlaceAbove:
    label: str
    q: int
    kind: str  # "split", "inert" or "ramified"
    parent: str


@dataclass(frozen=True)
class CyclicExtensionDatum:
    """K(chi)/K for a Dirichlet character chi of prime order p."""

    base: AbelianField
    chi: DirichletCharacter
    label: Optional[str] = None

    def __post_init__(self):
        chi = self.chi.primitive()
        object.__setattr__(self, "chi", chi)
        if not is_prime(chi.order):
            raise ExtensionError(f"cutting character has order {chi.order}, not a prime")
        if self.base.contains(chi):
            raise ExtensionError("cutting character already lies in the base field")

    @property
    def degree(self) -> int:
        return self.chi.order

    @cached_property
    def top(self) -> AbelianField:
        return self.base.extend(self.chi, self.label)

    def relative(self, ell: int) -> tuple[int, int, int]:
        e0, f0, g0 = self.base.splitting(ell)
        e1, f1, g1 = self.top.splitting(ell)
        return e1 // e0, f1 // f0, g1 // g0

    def kind(self, ell: int) -> str:
        e, f, _ = self.relative(ell)
        if e > 1:
            return "ramified"
        return "inert" if f > 1 else "split"


def twist_turn(field: AbelianField, chi: DirichletCharacter, q: int) -> Optional[Fraction]:
    """Turn of chi composed with the norm at a place of ``field`` with residue size q.

    Returns None when the composite is ramified there.  For a place of
    residue degree k over l the value is (chi psi)(l)^k, where psi is any
    character of the field making chi psi unramified at l.
    """
    ell, k = prime_power_base(q)
    chi = chi.primitive()
    if chi.modulus % ell:
        return chi.turn(ell) * k % 1
    for psi in field.characters:
        mixed = (chi * psi).primitive()
        if mixed.modulus % ell:
            return mixed.turn(ell) * k % 1
    return None


def places_above(ext: CyclicExtensionDatum, label: str, q: int) -> list[PlaceAbove]:
    ell, _ = prime_power_base(q)
    kind = ext.kind(ell)
    p = ext.degree
    if kind == "split":
        return [PlaceAbove(f"{label}.{j}", q, kind, label) for j in range(p)]
    if kind == "inert":
        return [PlaceAbove(label, q**p, kind, label)]
    return [PlaceAbove(label, q, kind, label)]
