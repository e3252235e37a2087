"""Exact matrix representations of finite groups and their characters."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union

from .cyclo import CycNum, zeta
from .groups import FiniteGroup, GroupError

Matrix = tuple  # tuple[tuple[CycNum, ...], ...]


class RepresentationError(ValueError):
    pass


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(CycNum.coerce(x) for x in row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(CycNum.rational(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = CycNum.rational(0)
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if x and y:
                    acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_scale(c: CycNum, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def trace(a: Matrix) -> CycNum:
    acc = CycNum.rational(0)
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b)
    zero = CycNum.rational(0)
    rows = [tuple(a[i]) + (zero,) * m for i in range(n)]
    rows += [(zero,) * n + tuple(b[i]) for i in range(m)]
    return tuple(rows)


class Representation:
    """rho: G -> GL_n over a cyclotomic field, stored per element."""

    def __init__(self, group: FiniteGroup, matrices: Sequence[Matrix], name: str = "rho",
                 check: bool = True):
        if len(matrices) != group.order:
            raise RepresentationError("need one matrix per group element")
        self.group = group
        self.matrices = tuple(mat(m) for m in matrices)
        self.dim = len(self.matrices[0])
        self.name = name
        if check:
            self.check_homomorphism()

    @classmethod
    def from_generators(cls, group: FiniteGroup, images: Mapping[int, Matrix], name: str = "rho",
                        check: bool = True) -> "Representation":
        """Extend generator images to all elements along a BFS spanning tree."""
        images = {g: mat(m) for g, m in images.items()}
        if not images:
            raise RepresentationError("no generator images given")
        dim = len(next(iter(images.values())))
        mats: dict[int, Matrix] = {group.identity: identity_matrix(dim)}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, m in images.items():
                    y = group.table[x][g]
                    if y not in mats:
                        mats[y] = mat_mul(mats[x], m)
                        nxt.append(y)
            frontier = nxt
        if len(mats) != group.order:
            raise RepresentationError("generator images do not reach every element")
        return cls(group, [mats[a] for a in range(group.order)], name, check)

    @classmethod
    def from_linear(cls, group: FiniteGroup, turns: Sequence[Fraction], name: str = "chi") -> "Representation":
        return cls(group, [((CycNum.root(t),),) for t in turns], name, check=False)

    @classmethod
    def trivial(cls, group: FiniteGroup, dim: int = 1) -> "Representation":
        return cls(group, [identity_matrix(dim)] * group.order, "1", check=False)

    def check_homomorphism(self) -> None:
        G = self.group
        if self.matrices[G.identity] != identity_matrix(self.dim):
            raise RepresentationError("identity does not map to the identity matrix")
        for a in range(G.order):
            for b in range(G.order):
                if mat_mul(self.matrices[a], self.matrices[b]) != self.matrices[G.table[a][b]]:
                    raise RepresentationError(f"rho({a})rho({b}) != rho({a}*{b})")

    def __call__(self, g: int) -> Matrix:
        return self.matrices[g]

    @cached_property
    def character(self) -> tuple[CycNum, ...]:
        return tuple(trace(m) for m in self.matrices)

    def is_irreducible(self) -> bool:
        return inner_product(self.group, self.character, self.character) == 1

    def kernel(self) -> frozenset[int]:
        one = identity_matrix(self.dim)
        return frozenset(a for a in range(self.group.order) if self.matrices[a] == one)

    def acts_trivially(self, H: Iterable[int]) -> bool:
        one = identity_matrix(self.dim)
        return all(self.matrices[h] == one for h in H)

    def __repr__(self) -> str:
        return f"Representation({self.name}, dim={self.dim}, group={self.group.name})"


class OneDimChar:
    """Homomorphism G -> roots of unity, stored as turns in Q/Z."""

    def __init__(self, group: FiniteGroup, turns: Sequence[Fraction], check: bool = True):
        if len(turns) != group.order:
            raise RepresentationError("need one value per group element")
        self.group = group
        self.turns = tuple(Fraction(t) % 1 for t in turns)
        if check:
            for a in range(group.order):
                for b in range(group.order):
                    if self.turns[group.table[a][b]] != (self.turns[a] + self.turns[b]) % 1:
                        raise RepresentationError("values are not multiplicative")

    @property
    def values(self) -> tuple[CycNum, ...]:
        return tuple(CycNum.root(t) for t in self.turns)

    @property
    def order(self) -> int:
        from math import lcm

        return lcm(*(t.denominator for t in self.turns))

    def __mul__(self, other: "OneDimChar") -> "OneDimChar":
        return OneDimChar(self.group, [a + b for a, b in zip(self.turns, other.turns)], check=False)

    def inverse(self) -> "OneDimChar":
        return OneDimChar(self.group, [-a for a in self.turns], check=False)

    def is_trivial(self) -> bool:
        return not any(self.turns)

    def __eq__(self, other) -> bool:
        return isinstance(other, OneDimChar) and self.group is other.group and self.turns == other.turns

    def __hash__(self) -> int:
        return hash(self.turns)

    def __repr__(self) -> str:
        return f"OneDimChar(order={self.order}, {[str(t) for t in self.turns]})"


def one_dim_characters(G: FiniteGroup) -> list[OneDimChar]:
    return [OneDimChar(G, t, check=False) for t in G.linear_characters]


def inner_product(G: FiniteGroup, chi1: Sequence[CycNum], chi2: Sequence[CycNum]) -> Union[Fraction, CycNum]:
    """(1/|G|) sum chi1(g) conj(chi2(g)), summed class by class."""
    if len(chi1) != G.order or len(chi2) != G.order:
        raise RepresentationError("class functions on different groups")
    acc = CycNum.rational(0)
    for cls in G.conjugacy_classes:
        a = next(iter(cls))
        acc = acc + CycNum.coerce(chi1[a]) * CycNum.coerce(chi2[a]).conj() * len(cls)
    acc = acc * Fraction(1, G.order)
    return acc.to_fraction() if acc.is_rational() else acc


def twist(rho: Representation, psi: OneDimChar) -> Representation:
    if psi.group is not rho.group:
        raise RepresentationError("twist by a character of a different group")
    mats = [mat_scale(CycNum.root(t), m) for t, m in zip(psi.turns, rho.matrices)]
    return Representation(rho.group, mats, f"{rho.name}(x)psi", check=False)


def direct_sum(r1: Representation, r2: Representation) -> Representation:
    if r1.group is not r2.group:
        raise RepresentationError("direct sum over different groups")
    mats = [block_diag(a, b) for a, b in zip(r1.matrices, r2.matrices)]
    return Representation(r1.group, mats, f"{r1.name}+{r2.name}", check=False)


def dual(rho: Representation) -> Representation:
    G = rho.group
    mats = [transpose(rho.matrices[G.inv(a)]) for a in range(G.order)]
    return Representation(G, mats, f"{rho.name}~", check=False)


def restrict(rho: Representation, H: Iterable[int]) -> tuple[Representation, tuple[int, ...]]:
    """Restriction to H, returned over a standalone copy of H with its embedding."""
    H = frozenset(H)
    if not rho.group.is_subgroup(H):
        raise GroupError("restriction target is not a subgroup")
    sub, emb = rho.group.subgroup(H)
    return Representation(sub, [rho.matrices[a] for a in emb], f"{rho.name}|H", check=False), emb


def invariant_trace(rho: Representation, I: Iterable[int], sigma: int) -> CycNum:
    """Trace of rho(sigma) on the I-fixed subspace: (1/|I|) sum_h tr rho(sigma h)."""
    G = rho.group
    I = frozenset(I)
    if not G.is_subgroup(I):
        raise GroupError("inertia set is not a subgroup")
    if not G.normalizes(sigma, I):
        raise GroupError(f"element {sigma} does not normalize the subgroup")
    chi = rho.character
    acc = CycNum.rational(0)
    for h in I:
        acc = acc + chi[G.table[sigma][h]]
    return acc * Fraction(1, len(I))


def invariant_eigenvalues(rho: Representation, I: Iterable[int], sigma: int) -> list[Fraction]:
    """Eigenvalues (as turns) of rho(sigma) on V^I, with multiplicity.

    rho(sigma) has finite order k on V^I, so the multiplicity of
    exp(2 pi i j/k) is (1/k) sum_t zeta_k^(-jt) tr(rho(sigma)^t | V^I),
    and each trace is an :func:`invariant_trace`.
    """
    G = rho.group
    I = frozenset(I)
    cache = rho.__dict__.setdefault("_eigen_cache", {})
    if (I, sigma) in cache:
        return list(cache[I, sigma])
    k = G.element_orders[sigma]
    traces = [invariant_trace(rho, I, G.power(sigma, t)) for t in range(k)]
    out: list[Fraction] = []
    for j in range(k):
        acc = CycNum.rational(0)
        for t, tr in enumerate(traces):
            acc = acc + zeta(k, (-j * t) % k) * tr
        acc = acc * Fraction(1, k)
        if not acc.is_rational():
            raise RepresentationError("eigenvalue multiplicity is not rational")
        mult = acc.to_fraction()
        if mult.denominator != 1 or mult < 0:
            raise RepresentationError(f"invalid eigenvalue multiplicity {mult}")
        out.extend([Fraction(j, k)] * int(mult))
    cache[I, sigma] = tuple(out)
    return out


def self_twist_characters(rho: Representation) -> list[OneDimChar]:
    """All linear psi with rho (x) psi ~ rho, decided by character equality."""
    if not rho.is_irreducible():
        raise RepresentationError("self-twist search needs an irreducible representation")
    chi = rho.character
    out = []
    for psi in one_dim_characters(rho.group):
        if all(CycNum.root(t) * c == c for t, c in zip(psi.turns, chi)):
            out.append(psi)
    for psi in out:
        if rho.dim % psi.order:
            raise RepresentationError(f"self-twist of order {psi.order} does not divide {rho.dim}")
    return out
