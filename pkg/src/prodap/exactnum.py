"""Exact arithmetic substrate: primes, factorization, p-adic valuations, and
quadratic-field elements a + b*sqrt(m).

Python ints are arbitrary precision, so they serve directly as the natural and
signed integer types; ``fractions.Fraction`` provides reduced rationals with a
positive denominator. Everything here is exact: no floats and no probabilistic
primality anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import (
    CapacityError,
    DomainError,
    FieldMismatchError,
    InputError,
)

DEFAULT_SIEVE_CAPACITY = 10**8


class PrimeTable:
    """Growable prime sieve with a hard capacity.

    Primality is decided only by trial division against sieved primes; any
    request that would need a prime beyond ``capacity`` raises CapacityError
    instead of falling back to a probabilistic test.
    """

    def __init__(self, capacity: int = DEFAULT_SIEVE_CAPACITY):
        if capacity < 2:
            raise InputError("sieve capacity must be at least 2")
        self.capacity = capacity
        self._limit = 0
        self._primes: list[int] = []

    @property
    def limit(self) -> int:
        return self._limit

    @property
    def primes(self) -> list[int]:
        return self._primes

    def _ensure(self, limit: int) -> None:
        if limit <= self._limit:
            return
        if limit > self.capacity:
            raise CapacityError(
                f"sieve limit {limit} exceeds capacity {self.capacity}",
                limit=self.capacity,
            )
        limit = min(max(limit, 2 * self._limit, 1 << 10), self.capacity)
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, isqrt(limit) + 1):
            if sieve[p]:
                step = len(range(p * p, limit + 1, p))
                sieve[p * p :: p] = bytearray(step)
        self._primes = [i for i, flag in enumerate(sieve) if flag]
        self._limit = limit

    def primes_upto(self, n: int) -> list[int]:
        """All primes <= n, ascending."""
        if n < 2:
            return []
        self._ensure(n)
        hi = len(self._primes)
        lo = 0
        while lo < hi:
            mid = (lo + hi) // 2
            if self._primes[mid] <= n:
                lo = mid + 1
            else:
                hi = mid
        return self._primes[:lo]

    def primes_in(self, lo: int, hi: int) -> list[int]:
        """Primes p with lo <= p <= hi, ascending (segmented sieve)."""
        if lo > hi:
            raise InputError(f"empty range: lo={lo} > hi={hi}")
        if hi > self.capacity:
            raise CapacityError(
                f"primes_in upper bound {hi} exceeds capacity {self.capacity}",
                limit=self.capacity,
            )
        lo = max(lo, 2)
        if lo > hi:
            return []
        base = self.primes_upto(isqrt(hi))
        width = hi - lo + 1
        segment = bytearray([1]) * width
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start > hi:
                continue
            segment[start - lo :: p] = bytearray(len(range(start, hi + 1, p)))
        return [lo + i for i, flag in enumerate(segment) if flag and lo + i >= 2]

    def is_prime(self, n: int) -> bool:
        """Exact primality for n <= capacity**2; beyond that, CapacityError."""
        if n < 2:
            return False
        if n <= self._limit:
            i = self._bisect(n)
            return i < len(self._primes) and self._primes[i] == n
        root = isqrt(n)
        if root > self.capacity:
            raise CapacityError(
                f"cannot certify primality of {n}: needs primes beyond "
                f"capacity {self.capacity}",
                limit=self.capacity,
            )
        for p in self.primes_upto(root):
            if n % p == 0:
                return False
        return True

    def _bisect(self, n: int) -> int:
        lo, hi = 0, len(self._primes)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._primes[mid] < n:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization [(p, e), ...] with ascending p, exact or error.

        Never returns a partial factorization: if the remaining cofactor
        cannot be certified prime within capacity, raises CapacityError.
        """
        if n < 2:
            raise DomainError(f"factorize requires n >= 2, got {n}")
        out: list[tuple[int, int]] = []
        rem = n
        root = isqrt(rem)
        self._ensure(min(max(root, 2), self.capacity))
        idx = 0
        while rem > 1:
            if idx >= len(self._primes):
                if self._limit >= self.capacity:
                    break
                self._ensure(min(max(root, 2 * self._limit), self.capacity))
                if idx >= len(self._primes):
                    break
            p = self._primes[idx]
            if p > root:
                break
            if rem % p == 0:
                e = 0
                while rem % p == 0:
                    rem //= p
                    e += 1
                out.append((p, e))
                root = isqrt(rem)
            idx += 1
        if rem > 1:
            # cofactor has no prime factor <= min(sqrt(rem), capacity)
            if isqrt(rem) > self.capacity:
                raise CapacityError(
                    f"factor of {n} exceeds capacity {self.capacity}: "
                    f"cofactor {rem} not certifiable",
                    limit=self.capacity,
                )
            out.append((rem, 1))
        return out


DEFAULT_TABLE = PrimeTable()


def primes_in(lo: int, hi: int, table: PrimeTable | None = None) -> list[int]:
    return (table or DEFAULT_TABLE).primes_in(lo, hi)


def is_prime(n: int, table: PrimeTable | None = None) -> bool:
    return (table or DEFAULT_TABLE).is_prime(n)


def factorize(n: int, table: PrimeTable | None = None) -> list[tuple[int, int]]:
    return (table or DEFAULT_TABLE).factorize(n)


def ord_p(n: int, p: int, table: PrimeTable | None = None) -> int:
    """Largest e such that p**e divides n.  Undefined for n = 0."""
    if n == 0:
        raise DomainError("p-adic valuation of 0 is undefined")
    if not (table or DEFAULT_TABLE).is_prime(p):
        raise DomainError(f"ord_p requires a prime modulus, got {p}")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def largest_prime_factor(n: int, table: PrimeTable | None = None) -> int:
    return factorize(n, table)[-1][0]


def smallest_prime_factor(n: int, table: PrimeTable | None = None) -> int:
    return factorize(n, table)[0][0]


@lru_cache(maxsize=None)
def _squarefree_ok(m: int) -> bool:
    if m in (0, 1):
        return False
    a = abs(m)
    if a == 1:
        return True  # m == -1
    return all(e == 1 for _, e in DEFAULT_TABLE.factorize(a))


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n >= 1 as s**2 * m with m squarefree; returns (s, m)."""
    if n < 1:
        raise DomainError(f"squarefree_decompose requires n >= 1, got {n}")
    if n == 1:
        return 1, 1
    s = 1
    m = 1
    for p, e in DEFAULT_TABLE.factorize(n):
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def sqrt_decompose(d: Fraction) -> tuple[Fraction, int]:
    """Write a positive rational d as s**2 * m with s rational and m a
    squarefree positive integer; returns (s, m).  m == 1 iff d is a square."""
    d = Fraction(d)
    if d <= 0:
        raise DomainError(f"sqrt_decompose requires d > 0, got {d}")
    t, m = squarefree_decompose(d.numerator * d.denominator)
    return Fraction(t, d.denominator), m


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise InputError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, eq=False)
class QuadElem:
    """Element a + b*sqrt(m) of the real or imaginary quadratic field Q(sqrt(m)).

    m is a fixed squarefree integer outside {0, 1}; negative m realizes
    complex instances.  Elements compare equal to plain rationals when b == 0.
    Composite extensions (mixing two different m) are rejected on every
    operation.
    """

    a: Fraction
    b: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))
        if not isinstance(self.m, int):
            raise InputError("field discriminant m must be an integer")
        if not _squarefree_ok(self.m):
            raise InputError(f"m must be squarefree and outside {{0, 1}}, got {self.m}")

    @classmethod
    def from_rational(cls, x, m: int) -> "QuadElem":
        return cls(_as_fraction(x), Fraction(0), m)

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.m != self.m:
                raise FieldMismatchError(
                    f"mixed fields: sqrt({self.m}) versus sqrt({other.m})"
                )
            return other
        return QuadElem.from_rational(_as_fraction(other), self.m)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise DomainError(f"{self} is not rational")
        return self.a

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.m)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.m

    @property
    def sort_key(self) -> tuple[Fraction, Fraction]:
        """Deterministic total order on coordinates (not the real order)."""
        return (self.a, self.b)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElem(self.a + o.a, self.b + o.b, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.m)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadElem(
            self.a * o.a + self.b * o.b * self.m,
            self.a * o.b + self.b * o.a,
            self.m,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise DomainError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadElem(num.a / n, num.b / n, self.m)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            if self.m != other.m:
                return self.is_rational and other.is_rational and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __repr__(self):
        return f"QuadElem({self.a!r}, {self.b!r}, m={self.m})"

    def __str__(self):
        if self.is_rational:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.m})"


def quad_mul(x: QuadElem, y: QuadElem) -> QuadElem:
    return x * y


def quad_div(x: QuadElem, y: QuadElem) -> QuadElem:
    return x / y


def quad_is_rational(x: QuadElem) -> bool:
    return x.is_rational
