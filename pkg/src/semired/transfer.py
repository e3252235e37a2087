"""Completing a weak transfer to a strong one at a single unknown place.

With every other place matched, the global functional equations give

    L(1-s, pi1~) / L(1-s, pi2~) = eps_ratio(s) * L_v(s, pi1) / L_v(s, pi2)

at the remaining place v.  The left side has its singularities on
Re s = 1 + w/2 and the right side on Re s = w/2, so when every weight is
below 1 the two sets are disjoint, both sides are entire and non-vanishing,
and the ratio of Euler polynomials must be constant.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .fields import CyclicExtensionDatum, places_above, twist_turn
from .ldata import FormalAutDatum, LData, base_change, local_factor, place_key
from .local import (
    ArchFactor,
    EpsilonDatum,
    LocalFactor,
    expand_local_factor,
    poly_divmod,
    poly_gcd,
    poly_trim,
)


class TransferError(ValueError):
    code = "transfer"


class InconsistentFunctionalEquation(TransferError):
    code = "inconsistent-fe"


class JSViolation(TransferError):
    code = "js-violation"


class ContradictoryData(TransferError):
    code = "contradictory"


def js_check(f: LocalFactor) -> bool:
    """Holomorphy of L_v(s) on the closed half-plane Re s >= 1/2.

    A root of weight w gives a pole on Re s = w/2, so the condition is w < 1.
    """
    return all(r.weight < 1 for r in f.roots)


def js_propagate(pi: LData, ext: CyclicExtensionDatum) -> bool:
    """JS for the base change at w implies JS for every twist at v below it."""
    bc = base_change(pi, ext)
    ok = True
    for v in pi.labels:
        f = local_factor(pi, v)
        above = places_above(ext, v, f.q)
        top = [local_factor(bc, w.label) for w in above]
        if not all(js_check(g) for g in top):
            continue
        t = twist_turn(pi.field, ext.chi, f.q)
        twists = [f] if t is None else [f.twist(t * j) for j in range(ext.degree)]
        ok = ok and all(js_check(g) for g in twists)
    return ok


# forcing ------------------------------------------------------------------------

def singular_lines(f: LocalFactor) -> set[Fraction]:
    """Real parts of the poles of L_v(s) = 1/P(q^-s)."""
    return {r.weight / 2 for r in f.roots}


def dual_singular_lines(f: LocalFactor) -> set[Fraction]:
    """Real parts of the poles of L_v(1-s, pi~)."""
    return {1 - r.inverse().weight / 2 for r in f.roots}


def reduced_ratio(f1: LocalFactor, f2: LocalFactor):
    """P2/P1 in lowest terms, as a pair of polynomials in T."""
    p1, p2 = expand_local_factor(f1), expand_local_factor(f2)
    g = poly_gcd(p1, p2)
    n, r1 = poly_divmod(p2, g)
    d, r2 = poly_divmod(p1, g)
    assert not poly_trim(r1) and not poly_trim(r2)
    return poly_trim(n), poly_trim(d)


def forcing_predicate(f1: LocalFactor, f2: LocalFactor) -> bool:
    """True when the functional-equation argument forces L_v(pi1) = L_v(pi2).

    L(s,pi1)/L(s,pi2) = P2/P1 is singular only on the lines of the reduced
    factors; the dual side only on the dual lines.  If the two families of
    lines are disjoint both sides are entire and non-vanishing, which for
    polynomials with constant term 1 means the reduced ratio is 1.
    """
    if f1.q != f2.q:
        raise ValueError("factors over different residue fields")
    # Both polynomials split into linear factors (1 - alpha T), so the gcd is
    # the common part of the root multisets; reduced_ratio does it the slow way.
    rest1 = _roots_of_reduced(f1, f2)
    rest2 = _roots_of_reduced(f2, f1)
    direct = singular_lines(LocalFactor(f1.q, rest1)) | singular_lines(LocalFactor(f1.q, rest2))
    dual = dual_singular_lines(LocalFactor(f1.q, rest1)) | dual_singular_lines(LocalFactor(f1.q, rest2))
    if direct & dual:
        return False
    return not rest1 and not rest2


def _roots_of_reduced(f: LocalFactor, g: LocalFactor):
    left = Counter(f.roots) - Counter(g.roots)
    return list(left.elements())


def forcing_oracle(f1: LocalFactor, f2: LocalFactor) -> bool:
    """Multiset equality of inverse roots."""
    return Counter(f1.roots) == Counter(f2.roots)


# transfer pairs --------------------------------------------------------------------

@dataclass
class TransferPair:
    """Two formal objects over the same field; ``None`` marks an unknown factor."""

    places: tuple[tuple[str, int], ...]
    side1: dict[str, Optional[LocalFactor]]
    side2: dict[str, Optional[LocalFactor]]
    epsilon1: Optional[EpsilonDatum] = None
    epsilon2: Optional[EpsilonDatum] = None
    arch1: Optional[ArchFactor] = None
    arch2: Optional[ArchFactor] = None
    unstable1: frozenset = frozenset()
    unstable2: frozenset = frozenset()

    def __post_init__(self):
        labels = [v for v, _ in self.places]
        for side in (self.side1, self.side2):
            extra = set(side) - set(labels)
            if extra:
                raise KeyError(f"factor for undeclared places {sorted(extra)}")
            for v, q in self.places:
                f = side.get(v)
                if f is not None and f.q != q:
                    raise ValueError(f"place {v}: factor over q={f.q}, declared q={q}")

    @property
    def labels(self) -> list[str]:
        return [v for v, _ in self.places]

    def q(self, v: str) -> int:
        return dict(self.places)[v]

    def unknown(self) -> list[tuple[int, str]]:
        out = []
        for v in self.labels:
            if self.side1.get(v) is None:
                out.append((1, v))
            if self.side2.get(v) is None:
                out.append((2, v))
        return out

    def weak_places(self) -> list[str]:
        """Places known and semistable on both sides."""
        return [v for v in self.labels
                if self.side1.get(v) is not None and self.side2.get(v) is not None
                and v not in self.unstable1 and v not in self.unstable2]

    @classmethod
    def from_data(cls, pi1: FormalAutDatum, pi2: FormalAutDatum, unknown1=(), unknown2=()) -> "TransferPair":
        if pi1.field != pi2.field:
            raise ValueError("transfer pair sides live over different fields")
        places = sorted({(v, f.q) for d in (pi1, pi2) for v, f in d.factors}, key=lambda x: place_key(*x))
        s1 = {v: (None if v in unknown1 else f) for v, f in pi1.factors}
        s2 = {v: (None if v in unknown2 else f) for v, f in pi2.factors}
        un1 = frozenset(v for v, ok in pi1.semistable if not ok)
        un2 = frozenset(v for v, ok in pi2.semistable if not ok)
        return cls(tuple(places), s1, s2, pi1.epsilon, pi2.epsilon, pi1.arch, pi2.arch, un1, un2)


@dataclass
class Completion:
    place: str
    side: int
    factor: LocalFactor
    transcript: list[str] = field(default_factory=list)


def complete_missing_factor(pair: TransferPair, v: Optional[str] = None) -> Completion:
    """Recover the single unknown local factor of a weak transfer."""
    unknown = pair.unknown()
    if len(unknown) > 1:
        raise ContradictoryData(f"{len(unknown)} unknown factors; isolate a single place first")
    if v is None:
        if not unknown:
            raise ValueError("no unknown place; name one with --place")
        v = unknown[0][1]
    if v not in pair.labels:
        raise KeyError(f"unknown place {v!r}")
    if unknown and unknown[0][1] != v:
        raise ContradictoryData(f"the unknown factor is at {unknown[0][1]}, not {v}")
    log = []
    for side, table in ((1, pair.side1), (2, pair.side2)):
        for w in pair.labels:
            f = table.get(w)
            if f is not None and not js_check(f):
                raise JSViolation(f"side {side} fails the JS condition at {w}: {f}")
    log.append("js: all known factors holomorphic on Re s >= 1/2")
    for w in pair.labels:
        if w == v:
            continue
        f1, f2 = pair.side1.get(w), pair.side2.get(w)
        if f1 != f2:
            raise ContradictoryData(f"sides differ at {w}; the single-place argument does not apply")
    log.append(f"other places: {len(pair.labels) - 1} matched")
    if pair.epsilon1 is None or pair.epsilon2 is None:
        raise InconsistentFunctionalEquation("both epsilon data are required")
    ratio = pair.epsilon1.ratio(pair.epsilon2)
    q = pair.q(v)
    k = _log_q(ratio.conductor, q)
    if k is None:
        raise InconsistentFunctionalEquation(
            f"conductor ratio {ratio.conductor} is not a power of q_v = {q}")
    log.append(f"epsilon ratio: W' = {ratio.root_number}, Delta' = {q}^{k}")
    side = unknown[0][0] if unknown else 2
    known = pair.side1[v] if side == 2 else pair.side2[v]
    candidate = known
    if not forcing_predicate(known, candidate):
        raise ContradictoryData("the forcing argument does not pin down the factor")
    # With P1 = P2 the ratio identity reads 1 = W' q^(k/2) T^k.
    if k != 0 or ratio.root_number != 1:
        raise InconsistentFunctionalEquation(
            f"epsilon ratio W' q^(k/2) T^k with W' = {ratio.root_number}, k = {k} is not 1")
    log.append("forcing: ratio is entire and non-vanishing, hence constant")
    existing = pair.side2[v] if side == 2 else pair.side1[v]
    if existing is not None and existing != candidate:
        raise ContradictoryData(f"sides differ at {v}")
    log.append(f"completed side {side} at {v}: {candidate}")
    return Completion(v, side, candidate, log)


def _log_q(x: Fraction, q: int) -> Optional[int]:
    k = 0
    num, den = x.numerator, x.denominator
    sign = 1
    if den > 1:
        num, den, sign = den, num, -1
    if den != 1:
        return None
    while num % q == 0:
        num //= q
        k += 1
    return sign * k if num == 1 else None


def completed_pair(pair: TransferPair, c: Completion) -> TransferPair:
    s1, s2 = dict(pair.side1), dict(pair.side2)
    (s1 if c.side == 1 else s2)[c.place] = c.factor
    return TransferPair(pair.places, s1, s2, pair.epsilon1, pair.epsilon2, pair.arch1, pair.arch2,
                        pair.unstable1, pair.unstable2)


def arch_match(a1: Optional[ArchFactor], a2: Optional[ArchFactor], fe_consistent: bool = True) -> bool:
    """Gamma_R products with a constant ratio have equal shift multisets."""
    if not fe_consistent:
        return False
    if a1 is None or a2 is None:
        return a1 is a2
    return Counter(a1.shifts) == Counter(a2.shifts)


@dataclass
class TransferReport:
    places: list[tuple[str, str]]
    epsilon_equal: Optional[bool]
    arch_equal: bool
    strong: bool

    def lines(self) -> list[str]:
        out = [f"place {v}: {verdict}" for v, verdict in self.places]
        eps = {True: "equal", False: "different", None: "missing"}[self.epsilon_equal]
        out.append(f"epsilon: {eps}")
        out.append(f"arch: {'equal' if self.arch_equal else 'different'}")
        out.append(f"verdict: {'strong' if self.strong else 'weak-only'}")
        return out


def verify_strong_transfer(pair: TransferPair) -> TransferReport:
    rows = []
    for v in pair.labels:
        f1, f2 = pair.side1.get(v), pair.side2.get(v)
        if f1 is None or f2 is None:
            rows.append((v, "unknown"))
        else:
            rows.append((v, "match" if f1 == f2 else f"mismatch {f1} vs {f2}"))
    if pair.epsilon1 is None or pair.epsilon2 is None:
        eps = None
    else:
        eps = pair.epsilon1 == pair.epsilon2
    arch = arch_match(pair.arch1, pair.arch2)
    strong = all(verdict == "match" for _, verdict in rows)
    if strong and eps is False:
        raise ContradictoryData("all places match but the epsilon data differ")
    return TransferReport(rows, eps, arch, strong)
