"""Inverse roots, local Euler factors and their polynomial expansions.

An inverse root is a Weil number zeta * q**(w/2) with zeta a root of unity and
w a half-integer.  A local factor is a multiset of inverse roots sharing the
residue cardinality q; its expansion prod(1 - alpha*T) is a polynomial in
T = q**(-s) whose coefficients live in Q(zeta_m)(p**(1/4)), p the residue
characteristic.  That ring is modelled by :class:`LocalCoeff`.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import floor
from typing import Iterable, Optional, Sequence

from .cyclo import (
    CycNum,
    format_cyc,
    format_rational,
    parse_cyc,
    prime_power_base,
    sqrt_prime,
)


class LocalCoeff:
    """a + b*theta with a, b in a cyclotomic field and theta = p**(1/4).

    Since sqrt(p) is cyclotomic but p**(1/4) generates a non-abelian
    extension, {1, theta} is a basis over any cyclotomic field and the pair
    (a, b) is canonical.
    """

    __slots__ = ("a", "b", "p")

    def __init__(self, a, b=0, p: Optional[int] = None):
        self.a = CycNum.coerce(a)
        self.b = CycNum.coerce(b)
        if self.b.is_zero():
            p = None
        elif p is None:
            raise ValueError("a quartic surd part needs its prime")
        self.p = p

    @staticmethod
    def _prime(x: "LocalCoeff", y: "LocalCoeff") -> Optional[int]:
        if x.p and y.p and x.p != y.p:
            raise ValueError("coefficients over different residue characteristics")
        return x.p or y.p

    def __add__(self, other):
        other = coerce_coeff(other)
        return LocalCoeff(self.a + other.a, self.b + other.b, self._prime(self, other))

    __radd__ = __add__

    def __neg__(self):
        return LocalCoeff(-self.a, -self.b, self.p)

    def __sub__(self, other):
        return self + (-coerce_coeff(other))

    def __rsub__(self, other):
        return coerce_coeff(other) - self

    def __mul__(self, other):
        other = coerce_coeff(other)
        p = self._prime(self, other)
        a = self.a * other.a
        bb = self.b * other.b
        if not bb.is_zero():
            a = a + bb * sqrt_prime(p)
        return LocalCoeff(a, self.a * other.b + self.b * other.a, p)

    __rmul__ = __mul__

    def inverse(self) -> "LocalCoeff":
        if self.b.is_zero():
            return LocalCoeff(self.a.inverse())
        # (a + b t)(a - b t) = a^2 - b^2 sqrt(p)
        norm = self.a * self.a - self.b * self.b * sqrt_prime(self.p)
        ninv = norm.inverse()
        return LocalCoeff(self.a * ninv, -self.b * ninv, self.p)

    def __truediv__(self, other):
        return self * coerce_coeff(other).inverse()

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __eq__(self, other) -> bool:
        try:
            other = coerce_coeff(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        if self.b.is_zero():
            return format_cyc(self.a)
        return f"{format_cyc(self.a)} + {format_cyc(self.b)}*{self.p}^(1/4)"


def coerce_coeff(x) -> LocalCoeff:
    if isinstance(x, LocalCoeff):
        return x
    return LocalCoeff(CycNum.coerce(x))


def prime_power_value(p: int, e: Fraction) -> LocalCoeff:
    """p**e exactly, for e a multiple of 1/4."""
    e = Fraction(e)
    if (4 * e).denominator != 1:
        raise ValueError(f"exponent {e} is not a multiple of 1/4")
    n = floor(e)
    r = int(4 * (e - n))
    base = CycNum.rational(Fraction(p) ** n)
    if r >= 2:
        base = base * sqrt_prime(p)
    if r % 2:
        return LocalCoeff(0, base, p)
    return LocalCoeff(base)


# inverse roots -------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class InverseRoot:
    """alpha = exp(2 pi i * turn) * q**(weight/2)."""

    turn: Fraction
    weight: Fraction
    q: int

    def __post_init__(self):
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)
        w = Fraction(self.weight)
        if (2 * w).denominator != 1:
            raise ValueError(f"weight {w} must have denominator dividing 2")
        object.__setattr__(self, "weight", w)
        prime_power_base(self.q)

    @classmethod
    def unit(cls, k: int, j: int, q: int, weight: Fraction = Fraction(0)) -> "InverseRoot":
        return cls(Fraction(j, k), weight, q)

    @property
    def order(self) -> int:
        return self.turn.denominator

    @property
    def exponent(self) -> int:
        return self.turn.numerator

    def magnitude_exponent(self) -> Fraction:
        """e such that |alpha| = p**e."""
        _, k = prime_power_base(self.q)
        return k * self.weight / 2

    def value(self) -> LocalCoeff:
        p, _ = prime_power_base(self.q)
        mag = prime_power_value(p, self.magnitude_exponent())
        return LocalCoeff(CycNum.root(self.turn)) * mag

    def __mul__(self, other: "InverseRoot") -> "InverseRoot":
        if self.q != other.q:
            raise ValueError("inverse roots over different residue fields")
        return InverseRoot(self.turn + other.turn, self.weight + other.weight, self.q)

    def twist(self, turn: Fraction) -> "InverseRoot":
        return InverseRoot(self.turn + turn, self.weight, self.q)

    def power(self, n: int) -> "InverseRoot":
        """alpha**n viewed over the residue field of size q**n."""
        return InverseRoot(self.turn * n, self.weight, self.q**n)

    def inverse(self) -> "InverseRoot":
        return InverseRoot(-self.turn, -self.weight, self.q)

    def sort_key(self):
        return (self.weight, self.turn)

    def __lt__(self, other: "InverseRoot") -> bool:
        return (self.q, *self.sort_key()) < (other.q, *other.sort_key())

    def __str__(self) -> str:
        return f"root({self.order},{self.exponent}; {format_rational(self.weight)}; {self.q})"


_ROOT_RE = re.compile(r"^\s*root\(\s*(\d+)\s*,\s*(-?\d+)\s*;\s*([-\d/]+)\s*;\s*(\d+)\s*\)\s*$")


def parse_root(text: str) -> InverseRoot:
    mt = _ROOT_RE.match(text)
    if not mt:
        raise ValueError(f"malformed inverse root: {text!r}")
    k, j, w, q = mt.groups()
    if int(k) <= 0:
        raise ValueError("root of unity order must be positive")
    return InverseRoot(Fraction(int(j), int(k)), Fraction(w), int(q))


def split_roots(text: str) -> list[str]:
    """Split a comma-separated list of root(...) tokens."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        out.append(tail)
    return [t.strip() for t in out if t.strip()]


# local factors ---------------------------------------------------------------

class LocalFactor:
    """Multiset of inverse roots at one finite place, all over the same q."""

    __slots__ = ("q", "roots")

    def __init__(self, q: int, roots: Iterable[InverseRoot] = ()):
        prime_power_base(q)
        roots = tuple(sorted(roots, key=InverseRoot.sort_key))
        for r in roots:
            if r.q != q:
                raise ValueError(f"root over q={r.q} in a factor over q={q}")
        self.q = q
        self.roots = roots

    @classmethod
    def unramified(cls, q: int, turns: Iterable[Fraction]) -> "LocalFactor":
        return cls(q, (InverseRoot(t, 0, q) for t in turns))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def __add__(self, other: "LocalFactor") -> "LocalFactor":
        """Multiset union (the factor of a direct sum)."""
        if self.q != other.q:
            raise ValueError("cannot combine factors at different q")
        return LocalFactor(self.q, self.roots + other.roots)

    def twist(self, turn: Fraction) -> "LocalFactor":
        return LocalFactor(self.q, (r.twist(turn) for r in self.roots))

    def contragredient(self) -> "LocalFactor":
        return LocalFactor(self.q, (r.inverse() for r in self.roots))

    def power(self, n: int) -> "LocalFactor":
        return LocalFactor(self.q**n, (r.power(n) for r in self.roots))

    def drop_top(self, r: int) -> "LocalFactor":
        if r > self.degree:
            raise ValueError("monodromy rank exceeds the factor degree")
        return LocalFactor(self.q, self.roots[: self.degree - r])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalFactor):
            return NotImplemented
        return self.q == other.q and self.roots == other.roots

    def __hash__(self) -> int:
        return hash((self.q, self.roots))

    def __repr__(self) -> str:
        return f"LocalFactor(q={self.q}, {{{', '.join(map(str, self.roots))}}})"

    def __str__(self) -> str:
        if not self.roots:
            return f"empty({self.q})"
        return ", ".join(map(str, self.roots))


def parse_local_factor(text: str, q: Optional[int] = None) -> LocalFactor:
    text = text.strip()
    mt = re.match(r"^empty\((\d+)\)$", text)
    if mt:
        return LocalFactor(int(mt.group(1)))
    roots = [parse_root(t) for t in split_roots(text)]
    if not roots:
        if q is None:
            raise ValueError("empty factor needs an explicit q")
        return LocalFactor(q)
    return LocalFactor(q or roots[0].q, roots)


# polynomials in T over LocalCoeff -----------------------------------------------

Poly = list  # list[LocalCoeff], low degree first


def poly_trim(a: Poly) -> Poly:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def poly_mul(a: Sequence[LocalCoeff], b: Sequence[LocalCoeff]) -> Poly:
    if not a or not b:
        return []
    out = [LocalCoeff(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def poly_eq(a: Sequence[LocalCoeff], b: Sequence[LocalCoeff]) -> bool:
    a, b = poly_trim(a), poly_trim(b)
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


def poly_divmod(a: Sequence[LocalCoeff], b: Sequence[LocalCoeff]) -> tuple[Poly, Poly]:
    a, b = poly_trim(a), poly_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [LocalCoeff(0)] * max(len(a) - len(b) + 1, 0)
    inv_lead = b[-1].inverse()
    while len(a) >= len(b):
        c = a[-1] * inv_lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] = a[shift + j] - c * bj
        a = poly_trim(a)
    return q, a


def poly_gcd(a: Sequence[LocalCoeff], b: Sequence[LocalCoeff]) -> Poly:
    """Monic gcd over the coefficient field."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    inv = a[-1].inverse()
    return [c * inv for c in a]


def expand_local_factor(f: LocalFactor) -> Poly:
    """Coefficients of prod(1 - alpha_i T), constant term first."""
    out: Poly = [LocalCoeff(1)]
    for r in f.roots:
        out = poly_mul(out, [LocalCoeff(1), -r.value()])
    return out


def factor_ratio_is_constant(num: LocalFactor, den: LocalFactor) -> bool:
    """Whether expand(num)/expand(den) is identically 1."""
    if num.q != den.q:
        raise ValueError(f"factors over different q ({num.q} vs {den.q})")
    return Counter(num.roots) == Counter(den.roots)


# epsilon data -------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonDatum:
    """epsilon(s) = W * Delta**(1/2 - s)."""

    root_number: CycNum
    conductor: Fraction

    def __post_init__(self):
        object.__setattr__(self, "root_number", CycNum.coerce(self.root_number))
        object.__setattr__(self, "conductor", Fraction(self.conductor))
        if self.conductor <= 0:
            raise ValueError("conductor magnitude must be positive")
        if self.root_number.is_zero():
            raise ValueError("root number must be non-zero")

    def ratio(self, other: "EpsilonDatum") -> "EpsilonDatum":
        return EpsilonDatum(self.root_number / other.root_number,
                            self.conductor / other.conductor)

    def dual(self) -> "EpsilonDatum":
        # from L(1-s, pi~) = eps(s, pi) L(s, pi) applied twice
        return EpsilonDatum(self.root_number.inverse(), self.conductor)

    def __str__(self) -> str:
        return f"{format_cyc(self.root_number)}, {format_rational(self.conductor)}"


def parse_epsilon(text: str) -> EpsilonDatum:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return EpsilonDatum(parse_cyc(text[:i]), Fraction(text[i + 1:].strip()))
    raise ValueError(f"malformed epsilon datum: {text!r}")


# archimedean factors ------------------------------------------------------------

@dataclass(frozen=True)
class ArchFactor:
    """prod Gamma_R(s + mu) over a multiset of half-integral shifts mu."""

    shifts: tuple[Fraction, ...] = ()

    def __post_init__(self):
        shifts = tuple(sorted(Fraction(x) for x in self.shifts))
        for x in shifts:
            if (2 * x).denominator != 1:
                raise ValueError(f"Gamma shift {x} must have denominator dividing 2")
        object.__setattr__(self, "shifts", shifts)

    def __str__(self) -> str:
        return "gamma(" + ", ".join(format_rational(x) for x in self.shifts) + ")"


def parse_arch(text: str) -> ArchFactor:
    mt = re.match(r"^\s*gamma\(([^)]*)\)\s*$", text)
    if not mt:
        raise ValueError(f"malformed archimedean factor: {text!r}")
    body = mt.group(1).strip()
    return ArchFactor(tuple(Fraction(x) for x in body.split(",")) if body else ())
