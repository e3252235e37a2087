"""Induction on the ramification index, with descent back to the base field.

At every bad place the engine picks the smallest quotient H_v of the
decomposition image whose kernel meets the inertia image trivially.  The
largest modulus (|H_v|, p) over the bad places drives one step.  Characters
eta_v of order p on H_v are turned into local prescriptions, a Dirichlet
character with those components is constructed, and the datum is restricted
to the field it cuts.  Probe branches are lifted recursively and descended.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Mapping, Optional, Sequence

from .cyclo import prime_power_base
from .dirichlet import DirichletCharacter, LocalPrescription
from .fields import AbelianField, CyclicExtensionDatum, places_above
from .groups import FiniteGroup, GroupError
from .grunwald import Infeasible, solve_report
from .ldata import (
    FormalAutDatum,
    GaloisDatum,
    PlaceRecord,
    artin_local_factor,
    base_change_formal,
    restrict_datum,
    semistable_at,
    to_formal,
    twist_ldata,
)
from .local import LocalFactor
from .reps import RepresentationError, self_twist_characters


class ReductionError(RuntimeError):
    """A reduction step could not be carried out."""

    def __init__(self, message: str, partial: Optional["ReductionNode"] = None):
        super().__init__(message)
        self.partial = partial


class ProbeExhausted(ReductionError):
    """Fewer than two probe places produced a usable extension."""


MAX_AUX = 8


class DescentError(ValueError):
    pass


class NoDescent(DescentError):
    pass


class AmbiguousDescent(DescentError):
    pass


# moduli ------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class RamModulus:
    """(|H|, p), ordered by size first and then by the prime."""

    size: int
    prime: int

    def __lt__(self, other: "RamModulus") -> bool:
        return (self.size, self.prime) < (other.size, other.prime)

    def __str__(self) -> str:
        return f"({self.size},{self.prime})"


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class Trivializer:
    """H_v = D/N together with its order-p characters pulled back to D."""

    label: str
    decomposition: frozenset
    inertia: frozenset
    kernel: frozenset
    H: FiniteGroup
    projection: Mapping[int, int]
    surjections: Mapping[int, tuple[tuple[Fraction, ...], ...]]

    @property
    def primes(self) -> list[int]:
        return sorted(p for p, chars in self.surjections.items() if chars)

    @property
    def modulus(self) -> RamModulus:
        return RamModulus(self.H.order, self.primes[-1])

    def eta(self, p: int, index: int = 0) -> dict[int, Fraction]:
        """The index-th order-p character of H_v as a function on D."""
        chi = self.surjections[p][index]
        return {g: chi[self.projection[g]] for g in sorted(self.decomposition)}


def minimal_local_trivializer(d: GaloisDatum, v: str) -> Trivializer:
    """Smallest quotient of the decomposition group killing the inertia image.

    Work modulo K = D meet ker(rho).  Candidates are normal subgroups N of D
    containing K with N meet I*K inside K; H_v = D/N for the largest such N,
    ties broken by the least prime admitting a surjection H_v -> Z/p and then
    by the sorted element labels of N.
    """
    G = d.group
    pl = d.place(v)
    if d.rep.acts_trivially(pl.inertia):
        raise ReductionError(f"place {v} is semistable")
    D = G.generated(set(pl.inertia) | {pl.frobenius})
    ker = d.rep.kernel()
    K = D & ker
    IK = G.generated(set(pl.inertia) | set(K))
    image_I, _ = G.quotient(K, within=IK)
    if not image_I.is_solvable():
        raise ReductionError(f"inertia image at {v} is not solvable")
    best = None
    for N in G.normal_subgroups(within=D):
        if not K <= N or not (N & IK) <= K:
            continue
        H, proj = G.quotient(N, within=D)
        surj = {}
        for p in _prime_factors(H.order):
            surj[p] = tuple(chi for chi in H.linear_characters
                            if max(t.denominator for t in chi) == p)
        primes = [p for p, c in surj.items() if c]
        if not primes:
            continue
        key = (H.order, min(primes), sorted(N))
        if best is None or key < best[0]:
            best = (key, N, H, proj, surj)
    if best is None:
        raise ReductionError(f"no solvable trivializer at {v}")
    _, N, H, proj, surj = best
    H.name = f"H[{v}]"
    return Trivializer(v, D, frozenset(pl.inertia), N, H, proj, surj)


def ramification_modulus(d: GaloisDatum) -> tuple[Optional[RamModulus], list[str], dict[str, Trivializer]]:
    """(R, T, trivializers); R is None when the datum is semistable everywhere."""
    trivs = {v: minimal_local_trivializer(d, v) for v in d.labels if not semistable_at(d, v)}
    if not trivs:
        return None, [], {}
    R = max(t.modulus for t in trivs.values())
    T = [v for v in d.labels if v in trivs and trivs[v].modulus == R]
    return R, T, trivs


# prescriptions -------------------------------------------------------------------

def prescription_from_eta(d: GaloisDatum, v: str, eta: Mapping[int, Fraction], p: int) -> Optional[LocalPrescription]:
    """Dirichlet-side local component matching a group-side eta at v.

    The pairing between inertia and local units is a convention: the least
    inertia element tau with eta(tau) != 0 corresponds to the standard unit
    generator at l.  Unramified eta fixes chi(l) through chi(l)^k = eta(sigma)
    where q_v = l^k.
    """
    pl = d.place(v)
    ell, k = prime_power_base(pl.q)
    ramified = [h for h in sorted(pl.inertia) if eta[h] % 1]
    if not ramified:
        t = eta[pl.frobenius] % 1
        if k % p:
            return LocalPrescription.unramified(ell, t * pow(k, -1, p) % 1)
        if t:
            raise ReductionError(f"place {v} has residue degree {k}; an order-{p} unramified "
                                 "character of Q cannot become nontrivial there")
        return None
    t = eta[ramified[0]] % 1
    if ell != p and (ell - 1) % p == 0:
        return LocalPrescription(ell, 1, (t,))
    if ell == p and p != 2:
        return LocalPrescription(ell, 2, (t,))
    if ell == p == 2:
        return LocalPrescription(2, 2, (t,))
    raise ReductionError(f"no tamely ramified character of order {p} at {ell}")


def split_prescription(d: GaloisDatum, v: str, p: int) -> Optional[LocalPrescription]:
    """Force the extension to split completely at v."""
    ell, k = prime_power_base(d.place(v).q)
    if k % p == 0:
        return None
    return LocalPrescription.unramified(ell, Fraction(0))


def _merge(prs: Sequence[Optional[LocalPrescription]]) -> list[LocalPrescription]:
    out: dict[int, LocalPrescription] = {}
    for pr in prs:
        if pr is None:
            continue
        if pr.prime in out and out[pr.prime] != pr:
            raise ReductionError(f"incompatible prescriptions at {pr.prime}")
        out[pr.prime] = pr
    return [out[p] for p in sorted(out)]


# step construction ----------------------------------------------------------------

@dataclass
class StepPlan:
    modulus: RamModulus
    T: list[str]
    p: int
    etas: dict[str, dict[int, Fraction]]
    prescriptions: list[LocalPrescription]
    trivializers: dict[str, Trivializer]


def plan_step(d: GaloisDatum) -> StepPlan:
    R, T, trivs = ramification_modulus(d)
    if R is None:
        raise ReductionError("datum is already semistable everywhere")
    p = R.prime
    etas = {v: trivs[v].eta(p) for v in T}
    prs = _merge([prescription_from_eta(d, v, etas[v], p) for v in T])
    return StepPlan(R, T, p, etas, prs, trivs)


def good_places(d: GaloisDatum) -> list[str]:
    return [v for v in d.labels if d.unramified_at(v)]


def choose_w0(d: GaloisDatum, banned_primes: set[int]) -> list[str]:
    """Places where every nontrivial self-twist is non-split.

    A single place suffices when the self-twist group is cyclic; otherwise a
    set of places is used so that each nontrivial self-twist is non-split at
    one of them.
    """
    try:
        twists = [psi for psi in self_twist_characters(d.rep) if not psi.is_trivial()]
    except RepresentationError as exc:
        raise ReductionError(f"reduction needs an irreducible datum: {exc}") from None
    chosen: list[str] = []
    uncovered = list(twists)
    used = set(banned_primes)
    for v in good_places(d):
        if not uncovered:
            break
        pl = d.place(v)
        if pl.prime in used:
            continue
        hit = [psi for psi in uncovered if psi.turns[pl.frobenius] != 0
               and psi.turns[pl.frobenius].denominator == psi.order]
        if hit:
            chosen.append(v)
            used.add(pl.prime)
            uncovered = [psi for psi in uncovered if psi not in hit]
    if uncovered:
        raise ReductionError("no places make every self-twist non-split")
    return chosen


@dataclass
class Step:
    probe: str
    character: DirichletCharacter
    auxiliary: tuple[int, ...]
    extension: CyclicExtensionDatum
    child: GaloisDatum


def build_reduction_step(d: GaloisDatum, probe: str, plan: Optional[StepPlan] = None,
                         w0: Sequence[str] = (), split_at: Sequence[str] = (),
                         exclude: Sequence[DirichletCharacter] = (),
                         avoid: Sequence[int] = ()) -> Step:
    plan = plan or plan_step(d)
    p = plan.p
    if probe in plan.T or probe in w0:
        raise ReductionError(f"probe {probe} must lie outside T and w0")
    if not d.unramified_at(probe):
        raise ReductionError(f"probe {probe} is not an unramified place")
    splits = [split_prescription(d, v, p) for v in [probe, *w0, *split_at]]
    prs = _merge(plan.prescriptions + splits)
    listed = {pl.prime for pl in d.places}
    support = {pr.prime for pr in prs}
    banned = (listed | set(avoid)) - support
    linked = [dc for _, dc in d.linked]
    try:
        rep = solve_report(prs, p, avoid=banned, exclude=list(d.field.generators) + linked + list(exclude),
                           max_aux=MAX_AUX)
    except Infeasible as exc:
        raise ReductionError(f"probe {probe}: {exc}") from None
    chi = rep.character
    ext = CyclicExtensionDatum(d.field, chi, f"{d.field.label}+{probe}")
    child = restrict_datum(d, chi, plan.etas, ext.label)
    R_child, _, _ = ramification_modulus(child)
    if R_child is not None and not R_child < plan.modulus:
        raise ReductionError(f"modulus did not drop: {R_child} after {plan.modulus}")
    return Step(probe, chi, rep.auxiliary, ext, child)


# descent ------------------------------------------------------------------------

def base_label(label: str, base_labels: set[str]) -> Optional[str]:
    """The base-field place below a tower label (labels grow by '.j')."""
    cur = label
    while True:
        if cur in base_labels:
            return cur
        if "." not in cur:
            return None
        cur = cur.rsplit(".", 1)[0]


def fibers(table: Mapping[str, LocalFactor], base_labels: set[str]) -> dict[str, tuple]:
    """Sorted tuple of factors over each base place."""
    out: dict[str, list] = {}
    for w, f in table.items():
        v = base_label(w, base_labels)
        if v is not None:
            out.setdefault(v, []).append((f.q, f.roots))
    return {v: tuple(sorted(fs)) for v, fs in out.items()}


@dataclass(frozen=True)
class DescentObject:
    """A table over K = F(chi), stored with an F-level twist-orbit representative."""

    ext: CyclicExtensionDatum
    table: tuple[tuple[str, LocalFactor], ...]
    good: frozenset
    seed: Optional[FormalAutDatum] = None

    @property
    def field(self) -> AbelianField:
        return self.ext.top

    @property
    def twist_orbit(self) -> list[DirichletCharacter]:
        return [self.ext.chi ** j for j in range(self.ext.degree)]

    @classmethod
    def from_datum(cls, pi: FormalAutDatum, ext: CyclicExtensionDatum, good, seed=None) -> "DescentObject":
        if pi.field != ext.top:
            raise ValueError("datum does not live over the extension")
        return cls(ext, pi.factors, frozenset(good), seed)

    def check_invariant(self, base_labels: set[str]) -> None:
        for v, fs in fibers(dict(self.table), base_labels).items():
            if len({f for f in fs}) > 1:
                raise NoDescent(f"{self.field.label}: factors above {v} are not Galois-invariant")


@dataclass
class DescentResult:
    datum: FormalAutDatum
    index: int
    matches: list[int]
    compared: dict[int, list[str]] = field(default_factory=dict)


def _agree(candidate: FormalAutDatum, ext: CyclicExtensionDatum, obj_table: Mapping[str, LocalFactor],
           good: set[str]) -> tuple[bool, list[str]]:
    bc = base_change_formal(candidate, ext).table()
    base = set(candidate.labels)
    a, b = fibers(bc, base), fibers(obj_table, base)
    places = sorted(v for v in good if v in a and v in b)
    return all(a[v] == b[v] for v in places), places


def descend(objects: Sequence[DescentObject],
            tables: Optional[Mapping[tuple[int, int], DescentObject]] = None) -> DescentResult:
    """The unique F-object base-changing to every K_i-object.

    Candidates are the twists seed (x) chi_1^j of object 1's orbit
    representative.  Each is base-changed to K_2 and compared; exactly one
    must match.  Further objects and the pairwise compositum tables
    ((i, j) -> table over K_i K_j, reached through K_i) are then checked.
    """
    if len(objects) < 2:
        raise ValueError("descent needs at least two extensions")
    base = objects[0].ext.base
    for obj in objects:
        if obj.ext.base != base:
            raise ValueError("objects live over different base fields")
    seed = objects[0].seed
    if seed is None:
        raise ValueError("the first object needs an orbit representative")
    if seed.field != base:
        raise ValueError("orbit representative does not live over the base field")
    base_labels = set(seed.labels)
    for obj in objects:
        obj.check_invariant(base_labels)
    for i, a in enumerate(objects):
        for b in objects[i + 1:]:
            if a.field.contains(b.ext.chi):
                raise ValueError("extensions are not linearly disjoint")
    first, second = objects[0], objects[1]
    ok, _ = _agree(seed, first.ext, dict(first.table), set(first.good))
    if not ok:
        raise NoDescent("orbit representative does not base-change to the first object")
    matches, compared = [], {}
    candidates = {}
    for j, psi in enumerate(first.twist_orbit):
        cand = twist_ldata(seed, psi) if j else seed
        candidates[j] = cand
        ok, places = _agree(cand, second.ext, dict(second.table), set(first.good) & set(second.good))
        compared[j] = places
        if ok:
            matches.append(j)
    if not matches:
        raise NoDescent("no twist of the first object matches the second")
    if len(matches) > 1:
        raise AmbiguousDescent(f"twists {matches} all match; the extensions are not disjoint enough")
    j = matches[0]
    chosen = candidates[j]
    for obj in objects[2:]:
        ok, _ = _agree(chosen, obj.ext, dict(obj.table), set(first.good) & set(obj.good))
        if not ok:
            raise NoDescent(f"descent does not base-change to {obj.field.label}")
    for (a, b), tab in (tables or {}).items():
        over_a = base_change_formal(chosen, objects[a].ext)
        ext_ab = CyclicExtensionDatum(objects[a].field, objects[b].ext.chi)
        ok, _ = _agree(over_a, ext_ab, dict(tab.table), set())
        bc = base_change_formal(over_a, ext_ab).table()
        good = {w for w in bc if base_label(w, base_labels) in (set(first.good) & tab.good)}
        if any(bc.get(w) != dict(tab.table).get(w) for w in good):
            raise NoDescent(f"descent disagrees with the compositum table ({a},{b})")
    return DescentResult(chosen, j, matches, compared)


# driver ----------------------------------------------------------------------------

Lifter = Callable[[GaloisDatum], FormalAutDatum]


def tautological_lifter(d: GaloisDatum) -> FormalAutDatum:
    """Frobenius eigenvalues as Satake parameters, for semistable data."""
    for v in d.labels:
        if not semistable_at(d, v):
            raise ReductionError(f"lifter called on a datum ramified at {v}")
    return to_formal(d, name=f"lift({d.name})")


def artin_oracle(d: GaloisDatum) -> FormalAutDatum:
    """Default orbit representative for descent: the Artin factors of d."""
    return to_formal(d, name=f"seed({d.name})")


@dataclass
class Branch:
    probe: str
    character: DirichletCharacter
    auxiliary: tuple[int, ...]
    node: "ReductionNode"


@dataclass
class ReductionNode:
    datum: GaloisDatum
    modulus: Optional[RamModulus] = None
    T: list[str] = field(default_factory=list)
    p: Optional[int] = None
    etas: dict[str, dict[int, Fraction]] = field(default_factory=dict)
    w0: list[str] = field(default_factory=list)
    probes: list[str] = field(default_factory=list)
    branches: list[Branch] = field(default_factory=list)
    descent_index: Optional[int] = None
    lift: Optional[FormalAutDatum] = None
    skipped: list[str] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.modulus is None

    def edges(self):
        for b in self.branches:
            yield self, b.node
            yield from b.node.edges()

    def auxiliary_primes(self) -> set[int]:
        out = set()
        for b in self.branches:
            out |= set(b.auxiliary)
            out |= b.node.auxiliary_primes()
        return out


def run_reduction(d: GaloisDatum, lifter: Lifter = tautological_lifter, budget: int = 3,
                  oracle: Lifter = artin_oracle, avoid: Sequence[int] = ()) -> tuple[ReductionNode, FormalAutDatum]:
    """Reduce to the semistable case and descend the lifts back to d's field."""
    if budget < 2:
        raise ValueError("descent needs a probe budget of at least 2")
    R, _, _ = ramification_modulus(d)
    node = ReductionNode(d)
    if R is None:
        try:
            node.lift = lifter(d)
        except Exception as exc:
            raise ReductionError(f"lifter failed: {exc}", node) from exc
        return node, node.lift
    plan = plan_step(d)
    node.modulus, node.T, node.p, node.etas = plan.modulus, plan.T, plan.p, plan.etas
    T_primes = {d.place(v).prime for v in plan.T}
    node.w0 = choose_w0(d, T_primes)
    banned = T_primes | {d.place(v).prime for v in node.w0}
    probes = []
    for v in good_places(d):
        pr = d.place(v).prime
        if pr not in banned:
            probes.append(v)
            banned.add(pr)
    node.probes = probes
    used: list[DirichletCharacter] = []
    avoid = set(avoid)
    for w in probes:
        if len(node.branches) == budget:
            break
        try:
            step = build_reduction_step(d, w, plan, node.w0, [x for x in probes[:budget] if x != w],
                                        exclude=used, avoid=avoid)
        except (ReductionError, GroupError, ValueError, NotImplementedError) as exc:
            node.skipped.append(f"{w}: {exc}")
            continue
        child, _ = run_reduction(step.child, lifter, budget, oracle, avoid)
        node.branches.append(Branch(w, step.character, step.auxiliary, child))
        used.append(step.character)
    if len(node.branches) < 2:
        raise ProbeExhausted(f"probe budget exhausted with {len(node.branches)} usable probes", node)
    for parent, child in node.edges():
        if child.modulus is not None and parent.modulus is not None and not child.modulus < parent.modulus:
            raise AssertionError("ramification modulus failed to decrease")
    seed = oracle(d)
    good = {v for v in d.labels if d.unramified_at(v)}
    objects = []
    for b in node.branches:
        ext = CyclicExtensionDatum(d.field, b.character, b.node.datum.field.label)
        good_b = {v for v in good if places_above(ext, v, d.place(v).q)[0].kind != "ramified"}
        objects.append(DescentObject.from_datum(b.node.lift, ext, good_b, seed if not objects else None))
    tables = {}
    for i in range(len(objects)):
        for j in range(i + 1, len(objects)):
            ext_ij = CyclicExtensionDatum(objects[i].field, objects[j].ext.chi)
            tab = base_change_formal(branch_lift(node.branches[i]), ext_ij)
            tables[(i, j)] = DescentObject(ext_ij, tab.factors, frozenset(objects[i].good & objects[j].good))
    res = descend(objects, tables)
    node.descent_index = res.index
    flags = {v: semistable_at(d, v) for v in d.labels}
    node.lift = FormalAutDatum.build(d.field, res.datum.table(), flags, epsilon=d.epsilon,
                                     arch=d.arch, name=f"lift({d.name})")
    return node, node.lift


def branch_lift(b: Branch) -> FormalAutDatum:
    return b.node.lift


def weak_lift_failures(d: GaloisDatum, lift: FormalAutDatum, exceptional: Sequence[str] = ()) -> list[str]:
    """Places where d is unramified but the lift differs from the Artin factor."""
    bad = []
    for v in d.labels:
        if v in exceptional or not d.unramified_at(v):
            continue
        if lift.factor(v) != artin_local_factor(d, v):
            bad.append(v)
    return bad


# checks ----------------------------------------------------------------------------

def tree_checks(node: ReductionNode) -> list[tuple[str, bool]]:
    """Invariants asserted on every certificate, in a stable order."""
    out = []
    for parent, child in node.edges():
        ok = child.modulus is None or (parent.modulus is not None and child.modulus < parent.modulus)
        out.append((f"decrease {parent.datum.field.label} -> {child.datum.field.label}", ok))
    for n in _nodes(node):
        for i, a in enumerate(n.branches):
            for b in n.branches[i + 1:]:
                la, lb = n.datum.place(a.probe).prime, n.datum.place(b.probe).prime
                ok = (b.character.turn(la) == 0 and a.character.turn(lb) == 0
                      and not _same_field(a.character, b.character))
                out.append((f"disjoint {a.probe} {b.probe} over {n.datum.field.label}", ok))
    return out


def _same_field(a: DirichletCharacter, b: DirichletCharacter) -> bool:
    return any(a.same_as(b ** k) for k in range(1, b.order))


def _nodes(node: ReductionNode):
    yield node
    for b in node.branches:
        yield from _nodes(b.node)


@dataclass
class ReductionRun:
    node: ReductionNode
    lift: FormalAutDatum
    coverage: Optional[bool]
    checks: list[tuple[str, bool]]


def reduce_datum(d: GaloisDatum, budget: int = 3, lifter: Lifter = tautological_lifter,
                 oracle: Lifter = artin_oracle, coverage: bool = True) -> ReductionRun:
    """run_reduction plus the coverage re-run and the certificate checks.

    The re-run bans every auxiliary prime of the first run, so the places
    where the splitting characters may ramify change; the two lifts must
    then agree as tables.
    """
    node, lift = run_reduction(d, lifter, budget, oracle)
    cov = None
    if coverage and not node.is_leaf:
        _, lift2 = run_reduction(d, lifter, budget, oracle, avoid=sorted(node.auxiliary_primes()))
        cov = lift2.table() == lift.table()
    return ReductionRun(node, lift, cov, tree_checks(node))
