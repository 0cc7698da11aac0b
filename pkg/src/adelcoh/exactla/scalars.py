"""Scalar rings for abelian atoms and small integer arithmetic helpers."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factorize 0")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_set(n: int) -> frozenset:
    return frozenset(p for p, _ in factorize(n))


def valuation(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


@dataclass(frozen=True)
class Scalars:
    """A subring of Q or Q_p: Z, Z_(S), Z[1/P], Q, Z_p or Q_p.

    ``kind`` is one of ``"Z", "ZS", "ZInv", "Q", "Zp", "Qp"``.
    """

    kind: str
    primes: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("Z", "ZS", "ZInv", "Q", "Zp", "Qp"):
            raise ValueError(f"unknown scalar kind {self.kind!r}")
        for p in self.primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        if self.kind in ("Zp", "Qp") and len(self.primes) != 1:
            raise ValueError("p-adic scalars need exactly one prime")

    @property
    def p(self) -> int | None:
        if self.kind in ("Zp", "Qp"):
            return next(iter(self.primes))
        return None

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "Qp")

    @property
    def complete(self) -> bool:
        return self.kind in ("Zp", "Qp")

    def unit_prime(self, q: int) -> bool:
        k = self.kind
        if k == "Z":
            return False
        if k == "ZInv":
            return q in self.primes
        if k in ("ZS", "Zp"):
            return q not in self.primes
        return True

    def is_unit(self, x) -> bool:
        x = Fraction(x)
        if x == 0:
            return False
        n = abs(x.numerator * x.denominator)
        return n == 1 or all(self.unit_prime(q) for q in prime_set(n))

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x.denominator == 1:
            return True
        return all(self.unit_prime(q) for q in prime_set(x.denominator))

    def local_part(self, n: int) -> int:
        """The part of ``n`` supported at non-unit primes (0 stays 0)."""
        if n == 0:
            return 0
        out = 1
        for q, k in factorize(n):
            if not self.unit_prime(q):
                out *= q ** k
        return out

    def maps_to(self, other: "Scalars") -> bool:
        """Whether the canonical ring map self -> other exists."""
        if self.complete and not (other.complete and other.p == self.p):
            return False
        return _units_subset(self, other)

    @property
    def label(self) -> str:
        k = self.kind
        ps = ",".join(str(p) for p in sorted(self.primes))
        if k == "Z":
            return "Z"
        if k == "Q":
            return "Q"
        if k == "ZS":
            return f"Z_({ps})"
        if k == "ZInv":
            return f"Z[1/{ps}]"
        if k == "Zp":
            return f"Z_{ps}"
        return f"Q_{ps}"

    def __str__(self):
        return self.label

    def invert(self, primes) -> "Scalars":
        """Localization inverting ``primes``."""
        primes = frozenset(primes)
        k = self.kind
        if k == "Z":
            return Scalars("ZInv", primes) if primes else self
        if k == "ZInv":
            return Scalars("ZInv", self.primes | primes)
        if k == "ZS":
            rest = self.primes - primes
            return Scalars("ZS", rest) if rest else Q
        if k == "Zp":
            return Qp(self.p) if self.p in primes else self
        return self


def _units_subset(a: Scalars, b: Scalars) -> bool:
    # unit primes as (cofinite?, set)
    def units(s: Scalars):
        if s.kind == "Z":
            return (False, frozenset())
        if s.kind == "ZInv":
            return (False, s.primes)
        if s.kind in ("ZS", "Zp"):
            return (True, s.primes)
        return (True, frozenset())

    ca, sa = units(a)
    cb, sb = units(b)
    if not ca and not cb:
        return sa <= sb
    if not ca and cb:
        return not (sa & sb)
    if ca and not cb:
        return False
    return sb <= sa


Z = Scalars("Z")
Q = Scalars("Q")


def ZS(primes) -> Scalars:
    primes = frozenset(primes)
    return Scalars("ZS", primes) if primes else Q


def ZInv(primes) -> Scalars:
    primes = frozenset(primes)
    return Scalars("ZInv", primes) if primes else Z


def Zp(p: int) -> Scalars:
    return Scalars("Zp", frozenset([p]))


def Qp(p: int) -> Scalars:
    return Scalars("Qp", frozenset([p]))
