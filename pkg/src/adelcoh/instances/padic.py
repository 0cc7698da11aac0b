"""p-adic numbers at finite precision, with optional exact rational backing."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..exactla.scalars import valuation as rational_valuation


class InsufficientPrecision(ArithmeticError):
    pass


@dataclass(frozen=True)
class PAdic:
    """``p^v * u`` known modulo ``p^(v + k)``; ``exact`` holds the value when it is rational.

    An inexact element with ``k == 0`` is zero to absolute precision ``v``.
    """

    p: int
    v: int
    u: int
    k: int
    exact: Fraction | None = None

    # -------------------------------------------------------------- construction

    @classmethod
    def from_rational(cls, x, p: int, k: int = 32) -> "PAdic":
        if k < 1:
            raise ValueError("precision must be at least 1")
        x = Fraction(x)
        if x == 0:
            return cls(p, 0, 0, k, Fraction(0))
        v = rational_valuation(x, p)
        y = x / Fraction(p) ** v
        mod = p ** k
        u = (y.numerator * pow(y.denominator, -1, mod)) % mod
        return cls(p, v, u, k, x)

    @classmethod
    def from_digits(cls, p: int, v: int, digits) -> "PAdic":
        """Inexact element ``sum d_i p^(v+i)`` known to ``len(digits)`` digits."""
        digits = list(digits)
        if any(not 0 <= d < p for d in digits):
            raise ValueError("digits out of range")
        u = sum(d * p ** i for i, d in enumerate(digits))
        return cls._normal(p, v, u, v + len(digits))

    @classmethod
    def zero(cls, p: int) -> "PAdic":
        return cls(p, 0, 0, 1, Fraction(0))

    @classmethod
    def _normal(cls, p: int, m: int, s: int, N: int) -> "PAdic":
        """Normalize ``p^m * s`` known modulo ``p^N``."""
        if N <= m:
            return cls(p, N, 0, 0)
        s %= p ** (N - m)
        if s == 0:
            return cls(p, N, 0, 0)
        while s % p == 0:
            s //= p
            m += 1
        return cls(p, m, s % p ** (N - m), N - m)

    # -------------------------------------------------------------- properties

    @property
    def absolute_precision(self) -> int:
        return self.v + self.k

    @property
    def is_exact_zero(self) -> bool:
        return self.exact is not None and self.exact == 0

    def valuation(self) -> int:
        if self.is_exact_zero:
            raise InsufficientPrecision("valuation of exact zero is infinite")
        if self.k == 0:
            raise InsufficientPrecision(
                f"all digits cancelled: zero modulo {self.p}^{self.v}, valuation undetermined")
        return self.v

    def digits(self) -> list[int]:
        out, u = [], self.u
        for _ in range(self.k):
            out.append(u % self.p)
            u //= self.p
        return out

    def principal_part(self) -> Fraction:
        """Negative-power digits as an exact rational."""
        if self.exact is not None:
            if self.exact == 0:
                return Fraction(0)
        if self.k and self.v >= 0:
            return Fraction(0)
        if self.k == 0:
            if self.v >= 0:
                return Fraction(0)
            raise InsufficientPrecision("principal part undetermined: known only modulo a negative power")
        if self.absolute_precision < 0:
            raise InsufficientPrecision(
                f"need digits down to p^-1 but only known to p^{self.absolute_precision}")
        e = -self.v
        return Fraction(self.u % self.p ** e, self.p ** e)

    def is_integral(self) -> bool:
        if self.is_exact_zero:
            return True
        if self.k == 0:
            if self.v >= 0:
                return True
            raise InsufficientPrecision("integrality undetermined after cancellation")
        return self.v >= 0

    def residue(self, e: int) -> int:
        """Class modulo ``p^e`` of an integral element."""
        if e <= 0:
            return 0
        if self.exact is not None:
            x = self.exact
            if x.denominator % self.p == 0:
                raise ValueError("element is not integral")
            mod = self.p ** e
            return (x.numerator * pow(x.denominator, -1, mod)) % mod
        if self.absolute_precision < e:
            raise InsufficientPrecision(f"residue mod {self.p}^{e} needs more digits")
        if self.k == 0:
            return 0
        if self.v < 0:
            raise ValueError("element is not integral")
        return (self.p ** self.v * self.u) % self.p ** e

    # -------------------------------------------------------------- arithmetic

    def _check(self, other: "PAdic") -> None:
        if self.p != other.p:
            raise ValueError("p-adic numbers for different primes")

    def __add__(self, other):
        if not isinstance(other, PAdic):
            other = PAdic.from_rational(other, self.p, max(self.k, 1))
        self._check(other)
        if self.exact is not None and other.exact is not None:
            k = max(min(self.k, other.k), 1)
            return PAdic.from_rational(self.exact + other.exact, self.p, k)
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        N = min(self.absolute_precision, other.absolute_precision)
        m = min(self.v, other.v)
        s = self.p ** (self.v - m) * self.u + self.p ** (other.v - m) * other.u
        return PAdic._normal(self.p, m, s, N)

    __radd__ = __add__

    def __neg__(self):
        if self.exact is not None:
            return PAdic.from_rational(-self.exact, self.p, max(self.k, 1))
        if self.k == 0:
            return self
        return PAdic(self.p, self.v, (-self.u) % self.p ** self.k, self.k)

    def __sub__(self, other):
        if not isinstance(other, PAdic):
            other = PAdic.from_rational(other, self.p, max(self.k, 1))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PAdic):
            other = PAdic.from_rational(other, self.p, max(self.k, 1))
        self._check(other)
        if self.exact is not None and other.exact is not None:
            return PAdic.from_rational(self.exact * other.exact, self.p, max(min(self.k, other.k), 1))
        if self.is_exact_zero or other.is_exact_zero:
            return PAdic.zero(self.p)
        if self.k == 0 or other.k == 0:
            # a zero known modulo p^N times p^w * unit is zero modulo p^(N + w)
            return PAdic(self.p, self.v + other.v, 0, 0)
        k = min(self.k, other.k)
        return PAdic(self.p, self.v + other.v, (self.u * other.u) % self.p ** k, k)

    __rmul__ = __mul__

    def agrees(self, other: "PAdic") -> bool:
        """Equal on all digits known for both."""
        d = self - other
        return d.is_exact_zero or d.k == 0

    def __str__(self):
        if self.exact is not None:
            return f"{self.exact} (in Q_{self.p})"
        if self.k == 0:
            return f"O({self.p}^{self.v})"
        return f"{self.p}^{self.v}*{self.u} + O({self.p}^{self.absolute_precision})"


def digit_stream(rng_seed: int, p: int, v: int) -> Callable[[int], PAdic]:
    """An inexact p-adic number whose first ``k`` digits are reproducible for any ``k``."""
    import random

    cache: list[int] = []
    rng = random.Random(rng_seed)

    def at(k: int) -> PAdic:
        while len(cache) < k:
            d = rng.randrange(p)
            if not cache and d == 0:
                d = 1 + rng.randrange(p - 1)
            cache.append(d)
        return PAdic.from_digits(p, v, cache[:k])

    return at
