"""Finite groups given by multiplication tables."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np


class GroupError(ValueError):
    pass


class FiniteGroup:
    """Elements are 0..n-1; ``table[a][b]`` is the product a*b."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = "G",
                 check: bool = True, labels: Optional[Sequence[str]] = None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name
        self.labels = tuple(labels) if labels else None
        if check:
            self.validate()
        self.identity = self._find_identity()

    def _find_identity(self) -> int:
        for e in range(self.order):
            if all(self.table[e][x] == x == self.table[x][e] for x in range(self.order)):
                return e
        raise GroupError("table has no identity element")

    def validate(self, max_assoc: int = 200) -> None:
        n = self.order
        if n == 0:
            raise GroupError("empty group")
        for row in self.table:
            if len(row) != n or sorted(row) != list(range(n)):
                raise GroupError("table rows must be permutations of 0..n-1")
        for col in range(n):
            if sorted(self.table[r][col] for r in range(n)) != list(range(n)):
                raise GroupError("table columns must be permutations of 0..n-1")
        self._find_identity()
        if n <= max_assoc:
            bad = self.associativity_failure()
            if bad is not None:
                a, b, c = bad
                raise GroupError(f"associativity fails for ({a}, {b}, {c})")

    def associativity_failure(self) -> Optional[tuple[int, int, int]]:
        t = np.asarray(self.table)
        left = t[t[:, :, None], np.arange(self.order)[None, None, :]]  # (ab)c
        right = t[np.arange(self.order)[:, None, None], t[None, :, :]]  # a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = bad[0]
            return int(a), int(b), int(c)
        return None

    # basic operations
    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for a in range(self.order):
            inv[a] = self.table[a].index(self.identity)
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def conj(self, g: int, h: int) -> int:
        """g h g^-1"""
        return self.table[self.table[g][h]][self.inverses[g]]

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != self.identity:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*self.element_orders)

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(a))

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    # subgroups
    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def is_subgroup(self, H: Iterable[int]) -> bool:
        H = set(H)
        if self.identity not in H:
            return False
        return all(self.table[a][self.inverses[b]] in H for a in H for b in H)

    def normalizes(self, g: int, H: Iterable[int]) -> bool:
        H = frozenset(H)
        return all(self.conj(g, h) in H for h in H)

    def is_normal(self, H: Iterable[int], within: Optional[Iterable[int]] = None) -> bool:
        H = frozenset(H)
        ambient = range(self.order) if within is None else within
        return all(self.normalizes(g, H) for g in ambient)

    def normal_closure(self, S: Iterable[int], within: Optional[Iterable[int]] = None) -> frozenset[int]:
        ambient = list(range(self.order) if within is None else within)
        gens = {self.conj(g, s) for g in ambient for s in S}
        return self.generated(gens)

    def normal_subgroups(self, within: Optional[Iterable[int]] = None) -> list[frozenset[int]]:
        """All normal subgroups of ``within`` (default: the whole group)."""
        ambient = frozenset(range(self.order) if within is None else within)
        minimal = {self.normal_closure([g], ambient) for g in ambient}
        found = {frozenset([self.identity])} | minimal
        frontier = list(found)
        while frontier:
            nxt = []
            for N in frontier:
                for M in minimal:
                    if M <= N:
                        continue
                    J = self.generated(N | M)
                    if J not in found:
                        found.add(J)
                        nxt.append(J)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def commutator_subgroup(self, within: Optional[Iterable[int]] = None) -> frozenset[int]:
        ambient = list(range(self.order) if within is None else within)
        comms = {self.table[self.table[a][b]][self.inverses[self.table[b][a]]]
                 for a in ambient for b in ambient}
        return self.generated(comms)

    def is_solvable(self, within: Optional[Iterable[int]] = None) -> bool:
        H = frozenset(range(self.order) if within is None else within)
        while len(H) > 1:
            D = self.commutator_subgroup(H)
            if D == H:
                return False
            H = D
        return True

    def small_generating_set(self, within: Optional[Iterable[int]] = None) -> list[int]:
        ambient = sorted(range(self.order) if within is None else within,
                         key=lambda a: (-self.element_orders[a], a))
        target = frozenset(ambient)
        gens: list[int] = []
        H = frozenset([self.identity])
        for a in ambient:
            if H == target:
                break
            if a not in H:
                gens.append(a)
                H = self.generated(gens)
        return gens

    def subgroup(self, H: Iterable[int], name: Optional[str] = None) -> tuple["FiniteGroup", tuple[int, ...]]:
        """Standalone group for H plus the embedding (new label -> old label)."""
        elems = tuple(sorted(H))
        if not self.is_subgroup(elems):
            raise GroupError("not a subgroup")
        index = {a: i for i, a in enumerate(elems)}
        table = [[index[self.table[a][b]] for b in elems] for a in elems]
        labels = [self.label(a) for a in elems] if self.labels else None
        return FiniteGroup(table, name or f"{self.name}|H", check=False, labels=labels), elems

    def quotient(self, N: Iterable[int], within: Optional[Iterable[int]] = None) -> tuple["FiniteGroup", dict[int, int]]:
        """Quotient (within)/N as a group, plus the projection map."""
        N = frozenset(N)
        ambient = sorted(range(self.order) if within is None else within)
        cosets: list[frozenset[int]] = []
        proj: dict[int, int] = {}
        for a in ambient:
            if a in proj:
                continue
            c = frozenset(self.table[a][n] for n in N)
            for x in c:
                proj[x] = len(cosets)
            cosets.append(c)
        reps = [min(c) for c in cosets]
        table = [[proj[self.table[a][b]] for b in reps] for a in reps]
        return FiniteGroup(table, f"{self.name}/N", check=False), proj

    @cached_property
    def conjugacy_classes(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        classes = []
        for a in range(self.order):
            if a in seen:
                continue
            cls = frozenset(self.conj(g, a) for g in range(self.order))
            seen |= cls
            classes.append(cls)
        return classes

    def class_of(self, a: int) -> frozenset[int]:
        for c in self.conjugacy_classes:
            if a in c:
                return c
        raise KeyError(a)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    # characters into Q/Z
    @cached_property
    def linear_characters(self) -> list[tuple[Fraction, ...]]:
        """All homomorphisms G -> Q/Z, as tuples of turns indexed by element."""
        return linear_characters(self)


def conjugacy_classes(G: FiniteGroup) -> list[frozenset[int]]:
    return G.conjugacy_classes


def linear_characters(G: FiniteGroup, within: Optional[Iterable[int]] = None) -> list[tuple[Fraction, ...]]:
    """Enumerate homomorphisms (within) -> Q/Z.

    Values outside ``within`` are reported as None.  The search assigns a
    turn of order dividing ord(g) to each generator and keeps the assignments
    that extend consistently, so the result is exact and complete.
    """
    ambient = frozenset(range(G.order) if within is None else within)
    gens = G.small_generating_set(ambient)
    out = []
    for choice in product(*[range(G.element_orders[g]) for g in gens]):
        vals = {G.identity: Fraction(0)}
        turns = [Fraction(c, G.element_orders[g]) for c, g in zip(choice, gens)]
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, t in zip(gens, turns):
                    y = G.table[x][g]
                    v = (vals[x] + t) % 1
                    if y in vals:
                        if vals[y] != v:
                            ok = False
                            break
                    else:
                        vals[y] = v
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok and all(vals[G.table[a][b]] == (vals[a] + vals[b]) % 1 for a in ambient for b in ambient):
            out.append(tuple(vals.get(a) for a in range(G.order)))
    out.sort(key=lambda chi: tuple((v if v is not None else Fraction(-1)) for v in chi))
    return out


# constructors ---------------------------------------------------------------

def from_permutations(gens: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    """Group generated by permutations (images of 0..d-1), BFS-labelled.

    Element 0 is the identity; elements are discovered breadth-first,
    multiplying on the right by generators in the given order.  The product
    convention is (a*b)(x) = a(b(x)).
    """
    gens = [tuple(g) for g in gens]
    if not gens:
        return FiniteGroup([[0]], name)
    d = len(gens[0])
    ident = tuple(range(d))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(a[g[x]] for x in range(d))
                if c not in index:
                    index[c] = len(elems)
                    elems.append(c)
                    nxt.append(c)
        frontier = nxt
    table = [[index[tuple(a[b[x]] for x in range(d))] for b in elems] for a in elems]
    G = FiniteGroup(table, name, check=len(elems) <= 200)
    G.permutations = elems
    G.generator_labels = [index[g] for g in gens]
    return G


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}", check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Element (g, h) is labelled g * |H| + h."""
    n = H.order
    table = [[G.table[a // n][b // n] * n + H.table[a % n][b % n]
              for b in range(G.order * n)] for a in range(G.order * n)]
    return FiniteGroup(table, f"{G.name}x{H.name}", check=False)


def symmetric_group(k: int) -> FiniteGroup:
    if k == 1:
        return FiniteGroup([[0]], "S1")
    cyc = tuple(list(range(1, k)) + [0])
    swap = tuple([1, 0] + list(range(2, k)))
    return from_permutations([cyc, swap], f"S{k}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], f"D{n}")


def quaternion_group() -> FiniteGroup:
    # regular representation of Q8 on {1,-1,i,-i,j,-j,k,-k}
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    mult = {("1", x): (1, x) for x in "1ijk"}
    mult.update({(x, "1"): (1, x) for x in "1ijk"})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})

    def split(name):
        return (-1, name[1:]) if name.startswith("-") else (1, name)

    def name_of(sign, unit):
        if sign == 1:
            return unit
        return "-1" if unit == "1" else "-" + unit

    table = []
    for a in names:
        row = []
        for b in names:
            sa, ua = split(a)
            sb, ub = split(b)
            s, u = mult[(ua, ub)]
            row.append(names.index(name_of(sa * sb * s, u)))
        table.append(row)
    return FiniteGroup(table, "Q8", labels=names)
