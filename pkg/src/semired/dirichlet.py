"""Dirichlet characters: finite-order characters of (Z/NZ)^*.

A character is stored prime by prime.  For an odd prime l the group
(Z/l^a)^* is cyclic, generated by the least primitive root g mod l^2; for
l = 2 the standard generators are -1 (a >= 2) and 5 (a >= 3).  A component is
the tuple of turns (elements of Q/Z) taken on those generators.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm as lcm_many
from typing import Iterable, Mapping, Optional, Sequence

from .cyclo import CycNum, factorize, format_rational, is_prime, lcm, split_top

Component = tuple[Fraction, ...]


# unit groups ------------------------------------------------------------------

@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least g that generates (Z/p^a)^* for every a >= 1 (p odd)."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    order = p * (p - 1)
    fs = list(factorize(order))
    for g in range(2, p * p):
        if g % p and all(pow(g, order // r, p * p) != 1 for r in fs):
            return g
    raise AssertionError("no primitive root found")


def standard_generators(p: int, a: int) -> list[tuple[int, int]]:
    """Generators of (Z/p^a)^* as (residue, order)."""
    if a <= 0 or (p == 2 and a == 1):
        return []
    if p == 2:
        if a == 2:
            return [(3, 2)]
        return [(2**a - 1, 2), (5, 2 ** (a - 2))]
    n = p**a
    return [(primitive_root(p) % n, n // p * (p - 1))]


@lru_cache(maxsize=64)
def _dlog_table(p: int, a: int) -> dict[int, tuple[int, ...]]:
    """residue mod p^a -> exponent vector on the standard generators."""
    n = p**a
    gens = standard_generators(p, a)
    if not gens:
        return {x: () for x in range(n) if x % p}
    if p == 2 and a >= 3:
        out = {}
        x = 1
        for k in range(2 ** (a - 2)):
            out[x] = (0, k)
            out[(-x) % n] = (1, k)
            x = x * 5 % n
        return out
    g, order = gens[0]
    out = {}
    x = 1
    for k in range(order):
        out[x] = (k,)
        x = x * g % n
    return out


def discrete_log(p: int, a: int, x: int) -> tuple[int, ...]:
    return _dlog_table(p, a)[x % p**a]


def unit_group_generators(N: int) -> list[tuple[int, int]]:
    """Generators of (Z/N)^* with their orders, one CRT block per prime power.

    Each generator is the standard generator of its prime-power block lifted
    to be 1 modulo the rest of N.
    """
    if N < 1:
        raise ValueError("modulus must be positive")
    out = []
    for p, a in sorted(factorize(N).items()):
        pa = p**a
        rest = N // pa
        for g, order in standard_generators(p, a):
            out.append((_crt_lift(g, pa, 1, rest), order))
    return out


def _crt_lift(x: int, m: int, y: int, n: int) -> int:
    """z mod m*n with z = x mod m and z = y mod n (coprime moduli)."""
    if n == 1:
        return x % m
    return (x * n * pow(n, -1, m) + y * m * pow(m, -1, n)) % (m * n)


# characters -------------------------------------------------------------------

def _component_conductor(p: int, a: int, turns: Component) -> int:
    """Least exponent b <= a through which the component factors."""
    if p == 2:
        if a < 2:
            return 0
        t_minus = turns[0]
        t_five = turns[1] if a >= 3 else Fraction(0)
        if t_five == 0:
            return 2 if t_minus else 0
        d = t_five.denominator  # 5 has order 2^(b-2) mod 2^b
        return 2 + d.bit_length() - 1
    (t,) = turns
    if t == 0:
        return 0
    b = 1
    while (t * (p ** (b - 1)) * (p - 1)).denominator != 1:
        b += 1
    return b


def _restrict_component(p: int, a: int, b: int, turns: Component) -> Component:
    """View a component mod p^a as one mod p^b (b <= a, assumed to factor)."""
    if p == 2:
        if b < 2:
            return ()
        if b == 2:
            return (turns[0],)
        return (turns[0], turns[1])
    return turns if b > 0 else ()


def _lift_component(p: int, a: int, b: int, turns: Component) -> Component:
    """Inflate a component mod p^a to one mod p^b (b >= a)."""
    if p == 2:
        if b < 2:
            return ()
        t_minus = turns[0] if a >= 2 else Fraction(0)
        t_five = turns[1] if a >= 3 else Fraction(0)
        return (t_minus,) if b == 2 else (t_minus, t_five)
    if b == 0:
        return ()
    return turns if a > 0 else (Fraction(0),)


@dataclass(frozen=True, eq=True)
class DirichletCharacter:
    """chi: (Z/modulus)^* -> roots of unity.

    ``components`` lists (p, a, turns) for every prime power p^a exactly
    dividing the modulus, in increasing p; ``turns`` are the values on the
    standard generators of (Z/p^a)^*.
    """

    modulus: int
    components: tuple[tuple[int, int, Component], ...] = ()

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        fac = factorize(self.modulus)
        given = {p: (a, tuple(Fraction(t) % 1 for t in turns)) for p, a, turns in self.components}
        if set(given) - set(fac):
            raise ValueError("component at a prime not dividing the modulus")
        comps = []
        for p, a in sorted(fac.items()):
            gens = standard_generators(p, a)
            b, turns = given.get(p, (a, tuple(Fraction(0) for _ in gens)))
            if b != a:
                raise ValueError(f"component at {p} has exponent {b}, modulus needs {a}")
            if len(turns) != len(gens):
                raise ValueError(f"component at {p} needs {len(gens)} values")
            for t, (_, order) in zip(turns, gens):
                if (t * order).denominator != 1:
                    raise ValueError(f"value {t} at {p} has order not dividing {order}")
            comps.append((p, a, turns))
        object.__setattr__(self, "components", tuple(comps))
        object.__setattr__(self, "_hash", hash((self.modulus, self.components)))

    def __hash__(self) -> int:
        return self._hash

    # constructors
    @classmethod
    def trivial(cls, modulus: int = 1) -> "DirichletCharacter":
        return cls(modulus)

    @classmethod
    def from_components(cls, comps: Mapping[int, tuple[int, Sequence[Fraction]]]) -> "DirichletCharacter":
        N = 1
        for p, (a, _) in comps.items():
            N *= p**a
        return cls(N, tuple((p, a, tuple(t)) for p, (a, t) in comps.items() if a > 0))

    @classmethod
    def from_generator_values(cls, modulus: int, turns: Sequence[Fraction]) -> "DirichletCharacter":
        """Build from turns on :func:`unit_group_generators` in order."""
        turns = list(turns)
        comps = []
        for p, a in sorted(factorize(modulus).items()):
            k = len(standard_generators(p, a))
            comps.append((p, a, tuple(turns[:k])))
            turns = turns[k:]
        if turns:
            raise ValueError("too many generator values")
        return cls(modulus, tuple(comps))

    # evaluation
    def turn(self, n: int) -> Optional[Fraction]:
        """chi(n) as a turn, or None when gcd(n, N) > 1."""
        if gcd(n, self.modulus) != 1:
            return None
        acc = Fraction(0)
        for p, a, turns in self.components:
            for e, t in zip(discrete_log(p, a, n), turns):
                acc += e * t
        return acc % 1

    def __call__(self, n: int) -> CycNum:
        t = self.turn(n)
        return CycNum.rational(0) if t is None else CycNum.root(t)

    @property
    def order(self) -> int:
        out = 1
        for _, _, turns in self.components:
            for t in turns:
                out = lcm(out, t.denominator)
        return out

    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def conductor(self) -> int:
        out = 1
        for p, a, turns in self.components:
            out *= p ** _component_conductor(p, a, turns)
        return out

    def primitive(self) -> "DirichletCharacter":
        comps = []
        for p, a, turns in self.components:
            b = _component_conductor(p, a, turns)
            if b:
                comps.append((p, b, _restrict_component(p, a, b, turns)))
        N = 1
        for p, b, _ in comps:
            N *= p**b
        return DirichletCharacter(N, tuple(comps))

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def component(self, p: int) -> tuple[int, Component]:
        for q, a, turns in self.components:
            if q == p:
                return a, turns
        return 0, ()

    def lift(self, M: int) -> "DirichletCharacter":
        """The same character viewed modulo a multiple M of the modulus."""
        if M % self.modulus:
            raise ValueError(f"{M} is not a multiple of {self.modulus}")
        comps = []
        for p, b in sorted(factorize(M).items()):
            a, turns = self.component(p)
            comps.append((p, b, _lift_component(p, a, b, turns)))
        return DirichletCharacter(M, tuple(comps))

    # group structure (primitive characters, so moduli may differ)
    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = lcm(self.modulus, other.modulus)
        a, b = self.lift(M), other.lift(M)
        comps = tuple((p, e, tuple(x + y for x, y in zip(s, t)))
                      for (p, e, s), (_, _, t) in zip(a.components, b.components))
        return DirichletCharacter(M, comps).primitive()

    def __pow__(self, k: int) -> "DirichletCharacter":
        comps = tuple((p, a, tuple(t * k for t in turns)) for p, a, turns in self.components)
        return DirichletCharacter(self.modulus, comps).primitive()

    def inverse(self) -> "DirichletCharacter":
        return self ** -1

    def same_as(self, other: "DirichletCharacter") -> bool:
        """Equality of the induced primitive characters."""
        return self.primitive() == other.primitive()

    def generator_values(self) -> list[tuple[int, Fraction]]:
        gens = unit_group_generators(self.modulus)
        turns = [t for _, _, ts in self.components for t in ts]
        return [(g, t) for (g, _), t in zip(gens, turns)]

    def __str__(self) -> str:
        body = ", ".join(f"{g}:{format_turn(t)}" for g, t in self.generator_values())
        return f"dirichlet({self.modulus}; {body})"

    def __repr__(self) -> str:
        return str(self)


_DIR_RE = re.compile(r"^\s*dirichlet\(\s*(\d+)\s*;(.*)\)\s*$")


def parse_dirichlet(text: str) -> DirichletCharacter:
    mt = _DIR_RE.match(text)
    if not mt:
        raise ValueError(f"malformed character: {text!r}")
    N = int(mt.group(1))
    body = mt.group(2).strip()
    values = {}
    for item in filter(None, split_top(body, ",")):
        g, t = item.split(":", 1)
        values[int(g)] = parse_turn(t)
    gens = unit_group_generators(N)
    if set(values) - {g for g, _ in gens}:
        raise ValueError(f"unknown generator in {text!r}")
    return DirichletCharacter.from_generator_values(N, [values.get(g, Fraction(0)) for g, _ in gens])


def all_characters(N: int, order_divides: Optional[int] = None) -> list[DirichletCharacter]:
    """Every character mod N (optionally of order dividing a bound)."""
    from itertools import product

    gens = unit_group_generators(N)
    out = []
    for exps in product(*[range(o) for _, o in gens]):
        chi = DirichletCharacter.from_generator_values(N, [Fraction(e, o) for e, (_, o) in zip(exps, gens)])
        if order_divides is None or order_divides % chi.order == 0:
            out.append(chi)
    return out


def character_group_vectors(gens: Iterable[DirichletCharacter]) -> tuple[int, int, list[tuple[int, ...]]]:
    """The group generated by ``gens`` as integer vectors.

    Returns (M, E, elems): every character is lifted to the common modulus M
    and written as the values on :func:`unit_group_generators` times the
    exponent E.  Elements are listed breadth-first from the trivial one.
    """
    prims = [g.primitive() for g in gens]
    M = lcm_many(1, *(g.modulus for g in prims))
    flat = [[t for _, _, ts in g.lift(M).components for t in ts] for g in prims]
    E = lcm_many(1, *(t.denominator for v in flat for t in v))
    steps = [tuple(int(t * E) % E for t in v) for v in flat]
    zero = tuple(0 for _ in unit_group_generators(M))
    elems, seen, frontier = [zero], {zero}, [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in steps:
                y = tuple((a + b) % E for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    return M, E, elems


def character_group(gens: Iterable[DirichletCharacter]) -> list[DirichletCharacter]:
    """All products of the given characters, as primitive characters."""
    M, E, elems = character_group_vectors(gens)
    return [DirichletCharacter.from_generator_values(M, [Fraction(x, E) for x in v]).primitive()
            for v in elems]


# local components -------------------------------------------------------------

@dataclass(frozen=True)
class LocalPrescription:
    """Local component at a prime p.

    ``exponent`` a = 0 means unramified, with ``value`` the turn taken at p.
    Otherwise ``turns`` are the values on the standard generators of
    (Z/p^a)^* and the uniformizer value is left free.
    """

    prime: int
    exponent: int = 0
    turns: Component = ()
    value: Optional[Fraction] = None

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        turns = tuple(Fraction(t) % 1 for t in self.turns)
        object.__setattr__(self, "turns", turns)
        if self.exponent == 0:
            if turns:
                raise ValueError("unramified prescription with unit values")
            object.__setattr__(self, "value", Fraction(self.value or 0) % 1)
        else:
            gens = standard_generators(self.prime, self.exponent)
            if len(turns) != len(gens):
                raise ValueError(f"need {len(gens)} values mod {self.prime}^{self.exponent}")
            if _component_conductor(self.prime, self.exponent, turns) != self.exponent:
                raise ValueError("ramified prescription is not primitive")
            object.__setattr__(self, "value", None)

    @classmethod
    def unramified(cls, p: int, value: Fraction) -> "LocalPrescription":
        return cls(p, 0, (), Fraction(value))

    @property
    def ramified(self) -> bool:
        return self.exponent > 0

    @property
    def order(self) -> int:
        if not self.ramified:
            return self.value.denominator
        out = 1
        for t in self.turns:
            out = lcm(out, t.denominator)
        return out

    def as_character(self) -> DirichletCharacter:
        """The ramified part as a character of conductor p^a."""
        if not self.ramified:
            return DirichletCharacter.trivial()
        return DirichletCharacter(self.prime**self.exponent, ((self.prime, self.exponent, self.turns),))

    def __str__(self) -> str:
        if not self.ramified:
            return f"at {self.prime} unram order {self.order} value {format_turn(self.value)}"
        vals = ",".join(format_turn(t) for t in self.turns)
        return f"at {self.prime} ram mod {self.prime ** self.exponent} values {vals}"


def local_component(chi: DirichletCharacter, p: int) -> LocalPrescription:
    prim = chi.primitive()
    a, turns = prim.component(p)
    if a == 0:
        return LocalPrescription.unramified(p, prim.turn(p))
    return LocalPrescription(p, a, turns)


# turn syntax ------------------------------------------------------------------

def format_turn(t: Fraction) -> str:
    t = Fraction(t) % 1
    if t == 0:
        return "1"
    if t == Fraction(1, 2):
        return "-1"
    return f"e({format_rational(t)})"


def parse_turn(text: str) -> Fraction:
    """Parse a root of unity written as 1, -1, e(j/k) or zeta(k,j)."""
    s = text.strip()
    if s == "1":
        return Fraction(0)
    if s == "-1":
        return Fraction(1, 2)
    mt = re.match(r"^e\(\s*(-?\d+(?:/\d+)?)\s*\)$", s)
    if mt:
        return Fraction(mt.group(1)) % 1
    mt = re.match(r"^zeta\(\s*(\d+)\s*,\s*(-?\d+)\s*\)$", s)
    if mt:
        return Fraction(int(mt.group(2)), int(mt.group(1))) % 1
    raise ValueError(f"malformed root of unity: {text!r}")


_AT_UNRAM = re.compile(r"^\s*(?:at\s+)?(\d+)\s+unram(?:\s+order\s+(\d+))?\s+value\s+(\S+)\s*$")
_AT_RAM = re.compile(r"^\s*(?:at\s+)?(\d+)\s+ram\s+mod\s+(\d+)\s+values\s+(.+?)\s*$")


def parse_prescription(text: str) -> LocalPrescription:
    """``at 5 unram order 2 value -1`` or ``at 2 ram mod 8 values -1,1``."""
    mt = _AT_UNRAM.match(text)
    if mt:
        p, order, value = int(mt.group(1)), mt.group(2), parse_turn(mt.group(3))
        out = LocalPrescription.unramified(p, value)
        if order is not None and out.order != int(order):
            raise ValueError(f"value {mt.group(3)} does not have order {order}")
        return out
    mt = _AT_RAM.match(text)
    if mt:
        p, mod = int(mt.group(1)), int(mt.group(2))
        fac = factorize(mod)
        if set(fac) != {p}:
            raise ValueError(f"modulus {mod} is not a power of {p}")
        turns = tuple(parse_turn(v) for v in mt.group(3).split(","))
        return LocalPrescription(p, fac[p], turns)
    raise ValueError(f"malformed prescription: {text!r}")
