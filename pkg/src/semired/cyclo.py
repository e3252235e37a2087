"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) of Q(zeta_m),
reduced modulo the m-th cyclotomic polynomial, which makes the coefficient
vector a canonical form for a fixed conductor.  Conductors m = 2 (mod 4) are
folded to m/2 since the fields coincide.  Values living in different
conductors are compared by lifting both into the lcm conductor.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def factorize(n: int) -> dict[int, int]:
    return dict(_factor_pairs(n))


@lru_cache(maxsize=4096)
def _factor_pairs(n: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return tuple(out.items())


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power_base(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, or raise ValueError."""
    f = factorize(q) if q > 1 else {}
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the m-th cyclotomic polynomial."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_divide(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_divide(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]  # den is monic
        out[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    assert not any(num[:dd]), "cyclotomic division left a remainder"
    return out


def _fold(m: int, coeffs: Iterable[Rational]) -> list[Fraction]:
    """Reduce exponents mod m, then reduce modulo Phi_m."""
    buf = [Fraction(0)] * m
    for i, c in enumerate(coeffs):
        if c:
            buf[i % m] += c
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    for i in range(m - 1, d - 1, -1):
        c = buf[i]
        if c:
            buf[i] = Fraction(0)
            for j in range(d):
                if phi[j]:
                    buf[i - d + j] -= c * phi[j]
    return buf[:d]


def _fold_conductor(m: int, coeffs: list[Fraction]) -> tuple[int, list[Fraction]]:
    # zeta_{2k} = -zeta_k^((k+1)/2) for odd k
    if m % 4 != 2:
        return m, coeffs
    k = m // 2
    half = (k + 1) // 2
    out = [Fraction(0)] * k
    for i, c in enumerate(coeffs):
        if c:
            out[(i * half) % k] += -c if i % 2 else c
    return k, out


def cyc_normalize(m: int, coeffs: Sequence[Rational]) -> "CycNum":
    """Canonical cyclotomic number sum(c_i * zeta_m**i)."""
    if m <= 0:
        raise ValueError("conductor must be positive")
    if len(coeffs) > m:
        raise ValueError("coefficient vector longer than the conductor")
    return CycNum(m, coeffs)


class CycNum:
    """Element of Q(zeta_m) in canonical power-basis form."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs: Sequence[Rational] = ()):
        if m <= 0:
            raise ValueError("conductor must be positive")
        vec = [Fraction(c) for c in coeffs]
        m, vec = _fold_conductor(m, vec)
        coeffs = tuple(_fold(m, vec))
        if m > 1 and not any(coeffs[1:]):
            m, coeffs = 1, coeffs[:1]
        self.m = m
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def _raw(cls, m: int, coeffs: tuple[Fraction, ...]) -> "CycNum":
        obj = object.__new__(cls)
        if m > 1 and not any(coeffs[1:]):
            m, coeffs = 1, coeffs[:1]
        obj.m = m
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def rational(cls, r: Rational) -> "CycNum":
        return cls._raw(1, (Fraction(r),))

    @classmethod
    def root(cls, turn: Fraction) -> "CycNum":
        """exp(2 pi i * turn) for a rational turn."""
        turn = Fraction(turn) % 1
        k = turn.denominator
        vec = [0] * k
        vec[turn.numerator] = 1
        return cls(k, vec)

    @classmethod
    def coerce(cls, x: "CycLike") -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycNum")

    # embedding
    def lift(self, M: int) -> "CycNum":
        if M == self.m:
            return self
        if M % self.m:
            raise ValueError(f"Q(zeta_{self.m}) does not embed in Q(zeta_{M})")
        step = M // self.m
        vec = [Fraction(0)] * M
        for i, c in enumerate(self.coeffs):
            vec[i * step] = c
        return CycNum(M, vec)

    def _vector(self, M: int) -> tuple[Fraction, ...]:
        """Power-basis coordinates in Q(zeta_M), without renormalizing."""
        step = M // self.m
        vec = [Fraction(0)] * M
        for i, c in enumerate(self.coeffs):
            vec[i * step] = c
        return tuple(_fold(M, vec))

    def _common(self, other: "CycNum") -> tuple[int, tuple, tuple]:
        if self.m == other.m:
            return self.m, self.coeffs, other.coeffs
        M = lcm(self.m, other.m)
        return M, self._vector(M), other._vector(M)

    # arithmetic
    def __add__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        m, a, b = self._common(other)
        return CycNum._raw(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.m, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CycNum.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum._raw(self.m, tuple(c * other for c in self.coeffs))
        if not isinstance(other, CycNum):
            return NotImplemented
        if other.m == 1:
            return self * other.coeffs[0]
        if self.m == 1:
            return other * self.coeffs[0]
        m, a, b = self._common(other)
        prod = [Fraction(0)] * (len(a) + len(b))
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycNum._raw(m, tuple(_fold(m, prod)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc = CycNum.rational(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __truediv__(self, other):
        other = CycNum.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycNum.coerce(other) * self.inverse()

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.m == 1:
            return CycNum.rational(1 / self.coeffs[0])
        a = list(self.coeffs)
        f = [Fraction(c) for c in cyclotomic_poly(self.m)]
        s = _poly_inverse_mod(a, f)
        return CycNum._raw(self.m, tuple(s + [Fraction(0)] * (len(f) - 1 - len(s))))

    # Galois action
    def galois(self, a: int) -> "CycNum":
        """Image under zeta_m -> zeta_m**a (a coprime to m)."""
        if gcd(a, self.m) != 1:
            raise ValueError("Galois twist must be coprime to the conductor")
        vec = [Fraction(0)] * self.m
        for i, c in enumerate(self.coeffs):
            if c:
                vec[(i * a) % self.m] += c
        return CycNum(self.m, vec)

    def conj(self) -> "CycNum":
        return self.galois(-1)

    # predicates / conversions
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def normalized_trace(self) -> Fraction:
        """Tr_{Q(zeta_m)/Q}(x) / phi(m); independent of the conductor used."""
        total = Fraction(0)
        for i, c in enumerate(self.coeffs):
            if c:
                d = self.m // gcd(i, self.m)
                total += c * Fraction(mobius(d), euler_phi(d))
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        if self.m == other.m:
            return self.coeffs == other.coeffs
        m, a, b = self._common(other)
        return a == b

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def __repr__(self) -> str:
        return format_cyc(self)

    __str__ = __repr__


CycLike = Union[CycNum, int, Fraction]


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        _poly_trim(a)
    return q, a


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(x) for x in out])


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_inverse_mod(a: list[Fraction], f: list[Fraction]) -> list[Fraction]:
    # extended Euclid on (f, a); f irreducible so gcd is a unit
    r0, r1 = list(f), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    c = r1[0]
    _, s = _poly_divmod([x / c for x in s1], f)
    return s


# textual encoding -----------------------------------------------------------

def format_rational(r: Fraction) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_cyc(x: CycNum) -> str:
    return f"cyc({x.m}; {','.join(format_rational(c) for c in x.coeffs)})"


_CYC_RE = re.compile(r"^\s*cyc\(\s*(\d+)\s*;\s*([^)]*)\)\s*$")


def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(text[start:i].strip())
            start = i + 1
    out.append(text[start:].strip())
    return out


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def parse_cyc(text: str) -> CycNum:
    """Parse ``cyc(m; c0,c1,...)`` or a bare rational."""
    mt = _CYC_RE.match(text)
    if not mt:
        return CycNum.rational(parse_rational(text))
    m = int(mt.group(1))
    body = mt.group(2).strip()
    coeffs = [parse_rational(c) for c in body.split(",")] if body else []
    return cyc_normalize(m, coeffs)


# special values ---------------------------------------------------------------

def zeta(k: int, j: int = 1) -> CycNum:
    return CycNum.root(Fraction(j, k))


@lru_cache(maxsize=None)
def sqrt_prime(p: int) -> CycNum:
    """A fixed square root of the prime p inside a cyclotomic field (Gauss sum)."""
    if p == 2:
        return zeta(8) + zeta(8, 7)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    vec = [0] * p
    for a in range(1, p):
        vec[a] = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
    g = CycNum(p, vec)
    if p % 4 == 1:
        return g
    return -zeta(4) * g
