"""Arithmetic L-data: Galois-backed and formal automorphic instances.

Both kinds carry a finite table of places.  Galois data compute local
factors from Frobenius eigenvalues on inertia invariants; formal data store
inverse-root multisets directly.  Twisting, contragredient and cyclic base
change are defined for both and agree where both are defined.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Optional, Sequence, Union

from .cyclo import CycNum, prime_power_base
from .dirichlet import DirichletCharacter
from .fields import QQ, AbelianField, CyclicExtensionDatum, places_above, twist_turn
from .groups import FiniteGroup, GroupError, cyclic_group, direct_product
from .local import (
    ArchFactor,
    EpsilonDatum,
    LocalFactor,
    expand_local_factor,
    poly_eq,
    poly_mul,
    LocalCoeff,
)
from .reps import (
    Representation,
    RepresentationError,
    dual,
    invariant_eigenvalues,
    mat_scale,
)


class PlaceError(KeyError):
    pass


def place_key(label: str, q: int) -> tuple:
    """Canonical place order: residue characteristic, then label."""
    return (prime_power_base(q)[0], label)


@dataclass(frozen=True)
class PlaceRecord:
    """A finite place of a Galois datum.

    ``monodromy`` is the Jordan type of the nilpotent operator (a partition;
    empty means N = 0).  Its rank is sum(part - 1).
    """

    label: str
    q: int
    frobenius: int
    inertia: frozenset = frozenset()
    monodromy: tuple[int, ...] = ()

    def __post_init__(self):
        prime_power_base(self.q)
        object.__setattr__(self, "inertia", frozenset(self.inertia))
        parts = tuple(sorted((int(x) for x in self.monodromy), reverse=True))
        if any(x < 1 for x in parts):
            raise ValueError("monodromy partition entries must be positive")
        object.__setattr__(self, "monodromy", parts)

    @property
    def prime(self) -> int:
        return prime_power_base(self.q)[0]

    @property
    def rank(self) -> int:
        return sum(x - 1 for x in self.monodromy)


def _check_place(G: FiniteGroup, dim: int, pl: PlaceRecord) -> PlaceRecord:
    if not 0 <= pl.frobenius < G.order:
        raise GroupError(f"place {pl.label}: Frobenius {pl.frobenius} is not a group element")
    inertia = pl.inertia | {G.identity}
    if not G.is_subgroup(inertia):
        raise GroupError(f"place {pl.label}: inertia is not a subgroup")
    if not G.normalizes(pl.frobenius, inertia):
        raise GroupError(f"place {pl.label}: Frobenius does not normalize inertia")
    if sum(pl.monodromy) > dim or pl.rank > dim:
        raise ValueError(f"place {pl.label}: monodromy partition exceeds dimension {dim}")
    return replace(pl, inertia=frozenset(inertia))


class GaloisDatum:
    """A finite-image Galois representation with a finite place table.

    ``linked`` pairs group-side linear characters (as turn tuples) with the
    Dirichlet characters cutting the same field; it is the only way the
    model knows that a Dirichlet character is not disjoint from the datum.
    """

    kind = "galois"

    def __init__(self, rep: Representation, places: Sequence[PlaceRecord],
                 field: AbelianField = QQ, arch: Optional[ArchFactor] = None,
                 epsilon: Optional[EpsilonDatum] = None, name: Optional[str] = None,
                 linked: Sequence[tuple[tuple[Fraction, ...], DirichletCharacter]] = ()):
        G = rep.group
        places = [_check_place(G, rep.dim, pl) for pl in places]
        labels = [pl.label for pl in places]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate place labels")
        self.rep = rep
        self.places = tuple(sorted(places, key=lambda pl: place_key(pl.label, pl.q)))
        self._by_label = {pl.label: pl for pl in self.places}
        self.field = field
        self.arch = arch
        self.epsilon = epsilon
        self.name = name or rep.name
        self.linked = tuple(linked)

    @property
    def group(self) -> FiniteGroup:
        return self.rep.group

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(pl.label for pl in self.places)

    def place(self, label: str) -> PlaceRecord:
        try:
            return self._by_label[label]
        except KeyError:
            raise PlaceError(f"unknown place {label!r}") from None

    def has_place(self, label: str) -> bool:
        return label in self._by_label

    def inertia_image_trivial(self, label: str) -> bool:
        return self.rep.acts_trivially(self.place(label).inertia)

    def unramified_at(self, label: str) -> bool:
        return self.inertia_image_trivial(label) and self.place(label).rank == 0

    def __repr__(self) -> str:
        return f"GaloisDatum({self.name}, dim={self.dim}, field={self.field.label}, places={list(self.labels)})"


@dataclass(frozen=True)
class FormalAutDatum:
    """A formal automorphic object: Satake multisets at finitely many places."""

    field: AbelianField
    factors: tuple[tuple[str, LocalFactor], ...]
    semistable: tuple[tuple[str, bool], ...] = ()
    epsilon: Optional[EpsilonDatum] = None
    arch: Optional[ArchFactor] = None
    name: str = "pi"

    kind = "formal"

    def __post_init__(self):
        facs = dict(self.factors)
        if len(facs) != len(self.factors):
            raise ValueError("duplicate place labels")
        flags = dict(self.semistable)
        if set(flags) - set(facs):
            raise PlaceError("semistability flag for a place without a factor")
        order = sorted(facs, key=lambda v: place_key(v, facs[v].q))
        object.__setattr__(self, "factors", tuple((v, facs[v]) for v in order))
        object.__setattr__(self, "semistable", tuple((v, flags.get(v, True)) for v in order))

    @classmethod
    def build(cls, field: AbelianField, factors: Mapping[str, LocalFactor],
              semistable: Optional[Mapping[str, bool]] = None, **kw) -> "FormalAutDatum":
        return cls(field, tuple(factors.items()), tuple((semistable or {}).items()), **kw)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.factors)

    @cached_property
    def _lookup(self) -> tuple[dict, dict]:
        return dict(self.factors), dict(self.semistable)

    def factor(self, label: str) -> LocalFactor:
        try:
            return self._lookup[0][label]
        except KeyError:
            raise PlaceError(f"unknown place {label!r}") from None

    def has_place(self, label: str) -> bool:
        return label in self._lookup[0]

    def is_semistable(self, label: str) -> bool:
        self.factor(label)
        return self._lookup[1][label]

    def table(self) -> dict[str, LocalFactor]:
        return dict(self.factors)


LData = Union[GaloisDatum, FormalAutDatum]


# local factors ----------------------------------------------------------------

def artin_local_factor(d: GaloisDatum, v: str, frobenius: Optional[int] = None,
                       q: Optional[int] = None) -> LocalFactor:
    """Eigenvalues of Frobenius on the inertia invariants, as a LocalFactor.

    A place outside the table is allowed when its Frobenius and q are
    supplied; it is then taken to be unramified.  A monodromy partition of
    rank r removes the top r eigenvalues in canonical order.
    """
    if d.has_place(v):
        pl = d.place(v)
    elif frobenius is not None and q is not None:
        pl = _check_place(d.group, d.dim, PlaceRecord(v, q, frobenius))
    else:
        raise PlaceError(f"place {v!r} is not in the table and no Frobenius was supplied")
    turns = invariant_eigenvalues(d.rep, pl.inertia, pl.frobenius)
    return LocalFactor.unramified(pl.q, turns).drop_top(pl.rank)


def local_factor(d: LData, v: str) -> LocalFactor:
    if isinstance(d, GaloisDatum):
        return artin_local_factor(d, v)
    return d.factor(v)


def semistable_at(d: LData, v: str) -> bool:
    """Galois data: inertia acts trivially (monodromy allowed).  Formal: the flag."""
    if isinstance(d, GaloisDatum):
        return d.inertia_image_trivial(v)
    return d.is_semistable(v)


def to_formal(d: GaloisDatum, name: Optional[str] = None) -> FormalAutDatum:
    """The tautological formal object: Artin factors at every listed place."""
    return FormalAutDatum.build(
        d.field, {v: artin_local_factor(d, v) for v in d.labels},
        {v: semistable_at(d, v) for v in d.labels},
        epsilon=d.epsilon, arch=d.arch, name=name or f"pi({d.name})")


# twisting -----------------------------------------------------------------------

def twist_ldata(d: LData, chi: DirichletCharacter) -> LData:
    """Twist by a Dirichlet character (composed with the norm to Q).

    Formal data: roots times chi(v) where chi is unramified, empty factor
    where it ramifies.  Galois data: the twisted representation of G x C_m,
    with inertia at a ramified place enlarged by the inertia image of chi.
    """
    chi = chi.primitive()
    if chi.is_trivial():
        return d
    if isinstance(d, FormalAutDatum):
        facs, flags = {}, {}
        for v, f in d.factors:
            t = twist_turn(d.field, chi, f.q)
            facs[v] = LocalFactor(f.q) if t is None else f.twist(t)
            flags[v] = d.is_semistable(v) if t is not None else False
        return FormalAutDatum.build(d.field, facs, flags, epsilon=None, arch=d.arch,
                                    name=f"{d.name}(x){chi}")
    return _twist_galois(d, chi)


def _twist_galois(d: GaloisDatum, chi: DirichletCharacter) -> GaloisDatum:
    m = chi.order
    G = d.group
    C = cyclic_group(m)
    P = direct_product(G, C)
    mats = [mat_scale(CycNum.root(Fraction(c, m)), d.rep.matrices[g])
            for g in range(G.order) for c in range(m)]
    rep = Representation(P, mats, f"{d.rep.name}(x)chi", check=False)
    ext = d.field.extend(chi)
    places = []
    for pl in d.places:
        t = twist_turn(d.field, chi, pl.q)
        inertia = {h * m for h in pl.inertia}
        if t is None:
            e = ext.splitting(pl.prime)[0] // d.field.splitting(pl.prime)[0]
            step = m // e
            inertia = {h * m + c for h in pl.inertia for c in range(0, m, step)}
            frob = pl.frobenius * m
        else:
            frob = pl.frobenius * m + int(t * m)
        places.append(PlaceRecord(pl.label, pl.q, frob, frozenset(inertia), pl.monodromy))
    linked = tuple((tuple(x for x in turns for _ in range(m)), dc) for turns, dc in d.linked)
    return GaloisDatum(rep, places, d.field, d.arch, None, f"{d.name}(x){chi}", linked)


def contragredient(d: LData) -> LData:
    if isinstance(d, FormalAutDatum):
        facs = {v: f.contragredient() for v, f in d.factors}
        eps = d.epsilon.dual() if d.epsilon else None
        return FormalAutDatum.build(d.field, facs, dict(d.semistable), epsilon=eps, arch=d.arch,
                                    name=_toggle_dual(d.name))
    eps = d.epsilon.dual() if d.epsilon else None
    rep = dual(d.rep)
    rep.name = _toggle_dual(d.rep.name)
    linked = tuple((tuple(-x % 1 for x in turns), dc.inverse()) for turns, dc in d.linked)
    return GaloisDatum(rep, d.places, d.field, d.arch, eps, _toggle_dual(d.name), linked)


def _toggle_dual(name: str) -> str:
    return name[:-1] if name.endswith("~") else name + "~"


# base change ----------------------------------------------------------------------

def base_change(d: LData, ext: CyclicExtensionDatum) -> LData:
    """Base change along a cyclic extension of prime degree.

    Galois data restrict to the subgroup fixing the extension (the place
    table is pushed forward); formal data use the character-product formula.
    """
    if d.field != ext.base:
        raise ValueError(f"datum lives over {d.field.label}, extension is over {ext.base.label}")
    if isinstance(d, GaloisDatum):
        return restrict_datum(d, ext.chi)
    return base_change_formal(d, ext)


def base_change_formal(d: FormalAutDatum, ext: CyclicExtensionDatum, check: bool = False) -> FormalAutDatum:
    """Split places copy the factor, inert places take p-th powers of the roots.

    With ``check`` the inert factor is also computed as the product of the
    twists by chi^j and compared with the p-th powers.
    """
    if d.field != ext.base:
        raise ValueError(f"datum lives over {d.field.label}, extension is over {ext.base.label}")
    p = ext.degree
    facs, flags = {}, {}
    for v, f in d.factors:
        for w in places_above(ext, v, f.q):
            if w.kind == "split":
                facs[w.label] = f
            elif w.kind == "inert":
                facs[w.label] = _inert_product(f, ext) if check else f.power(p)
            else:
                facs[w.label] = f
            flags[w.label] = d.is_semistable(v)
    return FormalAutDatum.build(ext.top, facs, flags, epsilon=None, arch=None,
                                name=f"BC({d.name})")


def _inert_product(f: LocalFactor, ext: CyclicExtensionDatum) -> LocalFactor:
    """prod_j L_v(pi (x) chi^j), re-expressed in T_w = T^p."""
    return _inert_product_cached(f, ext.degree)


@lru_cache(maxsize=4096)
def _inert_product_cached(f: LocalFactor, p: int) -> LocalFactor:
    # at an inert place chi(w) runs over all p-th roots of unity
    t = Fraction(1, p)
    poly = [LocalCoeff(1)]
    for j in range(p):
        poly = poly_mul(poly, expand_local_factor(f.twist(t * j)))
    for i, c in enumerate(poly):
        if i % p and not c.is_zero():
            raise AssertionError("inert base-change product is not a polynomial in T^p")
    out = f.power(p)
    if not poly_eq(poly[::p], expand_local_factor(out)):
        raise AssertionError("inert base-change product disagrees with the p-th powers")
    return out


class DisjointnessError(ValueError):
    pass


def restrict_datum(d: GaloisDatum, chi: DirichletCharacter,
                   kernels: Optional[Mapping[str, Mapping[int, Fraction]]] = None,
                   label: Optional[str] = None) -> GaloisDatum:
    """Restriction of the datum to the field cut by chi.

    The group and representation are unchanged.  The place table is pushed
    forward: split places are copied, inert places get sigma^p and q^p.  At a
    place ramified in the extension, ``kernels[v]`` (a character eta of the
    decomposition group, as element -> turn) says how the new inertia sits
    inside the old one: I_w = I_v meet ker(eta), and sigma_w is the first
    sigma*tau^k lying in ker(eta).  Without it the two inertia groups are
    taken to be independent and nothing changes.
    """
    kernels = dict(kernels or {})
    ext = CyclicExtensionDatum(d.field, chi, label)
    for turns, dc in d.linked:
        if any(dc.same_as(ext.chi ** k) for k in range(1, ext.degree)):
            raise DisjointnessError(f"{ext.chi} cuts a subfield of the datum's own field")
    G = d.group
    p = ext.degree
    out = []
    for pl in d.places:
        eta = kernels.pop(pl.label, None)
        above = places_above(ext, pl.label, pl.q)
        kind = above[0].kind
        if eta is not None:
            _check_eta(G, pl, eta, kind, p)
        for w in above:
            if kind == "split":
                out.append(replace(pl, label=w.label))
            elif kind == "inert":
                out.append(replace(pl, q=w.q, frobenius=G.power(pl.frobenius, p)))
            elif eta is None:
                out.append(pl)
            else:
                out.append(_ramified_restriction(G, pl, eta, p))
    if kernels:
        raise PlaceError(f"kernel data for unknown places {sorted(kernels)}")
    return GaloisDatum(d.rep, out, ext.top, None, None, d.name, d.linked)


def _check_eta(G: FiniteGroup, pl: PlaceRecord, eta: Mapping[int, Fraction], kind: str, p: int) -> None:
    D = G.generated(set(pl.inertia) | {pl.frobenius})
    if set(eta) != set(D):
        raise ValueError(f"place {pl.label}: eta must be given on the decomposition group")
    for a in D:
        for b in D:
            if eta[G.table[a][b]] % 1 != (eta[a] + eta[b]) % 1:
                raise ValueError(f"place {pl.label}: eta is not a character")
    on_inertia = any(eta[h] % 1 for h in pl.inertia)
    order = max((Fraction(x).denominator for x in eta.values()), default=1)
    if order != p:
        raise ValueError(f"place {pl.label}: eta has order {order}, extension has degree {p}")
    expected = "ramified" if on_inertia else "inert"
    if kind != expected:
        raise ValueError(f"place {pl.label}: eta predicts a {expected} place, the extension is {kind}")


def _ramified_restriction(G: FiniteGroup, pl: PlaceRecord, eta: Mapping[int, Fraction], p: int) -> PlaceRecord:
    tau = min(h for h in pl.inertia if eta[h] % 1)
    inertia = frozenset(h for h in pl.inertia if eta[h] % 1 == 0)
    sigma = pl.frobenius
    for _ in range(p):
        if eta[sigma] % 1 == 0:
            break
        sigma = G.table[sigma][tau]
    else:
        raise AssertionError("no Frobenius lift in the kernel")
    return replace(pl, frobenius=sigma, inertia=inertia)


# Dirichlet series ---------------------------------------------------------------

def partial_l_series(d: LData, X: int) -> dict[int, CycNum]:
    """Dirichlet coefficients a(n), n <= X, of the Euler product over listed places.

    Only places with q_v <= X contribute, so a(n) vanishes when n has a
    prime factor not in the table.  Inverse roots must have cyclotomic
    absolute values (k*w even or odd, for q = l^k).
    """
    if X < 1:
        raise ValueError("cutoff must be at least 1")
    coeffs: dict[int, CycNum] = {1: CycNum.rational(1)}
    labels = d.labels
    for v in labels:
        f = local_factor(d, v)
        if f.q > X:
            continue
        kmax = 0
        while f.q ** (kmax + 1) <= X:
            kmax += 1
        local = _inverse_series(f, kmax)
        new: dict[int, CycNum] = {}
        for n, c in coeffs.items():
            qk = 1
            for k in range(kmax + 1):
                if n * qk > X:
                    break
                if not local[k].is_zero():
                    new[n * qk] = new.get(n * qk, CycNum.rational(0)) + c * local[k]
                qk *= f.q
        coeffs = new
    return {n: coeffs.get(n, CycNum.rational(0)) for n in range(1, X + 1)}


def _inverse_series(f: LocalFactor, kmax: int) -> list[CycNum]:
    """Coefficients of 1/prod(1 - alpha T) up to T^kmax."""
    poly = []
    for c in expand_local_factor(f):
        if not c.b.is_zero():
            raise ValueError("inverse root magnitude is not cyclotomic")
        poly.append(c.a)
    out = [CycNum.rational(1)]
    for k in range(1, kmax + 1):
        acc = CycNum.rational(0)
        for i in range(1, min(k, len(poly) - 1) + 1):
            acc = acc - poly[i] * out[k - i]
        out.append(acc)
    return out
