"""Dense product-set cover: the first n integers together with all primes up
to floor(n*ln n), whose product set covers the whole interval [1, floor(n*ln n)].

Witnesses are produced by a greedy splitter: a term with a large prime factor
splits off that prime directly; otherwise factors migrate one smallest prime
at a time from the big part to the small part until both parts land in the
set.  Threshold comparisons against ln n are decided by certified interval
refinement, never by a float.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import iv

from .errors import DomainError, FalsificationError, InputError
from .exactnum import DEFAULT_TABLE, PrimeTable

SIZE_RATIO_CHECK_FROM = 10  # |B| <= 2n is asserted from this n on

_LN_CACHE: dict[int, tuple] = {}


def _ln_endpoints(n: int, prec: int):
    """Certified enclosure of ln n: exact-float endpoints (lo, hi)."""
    old = iv.prec
    try:
        iv.prec = prec
        v = iv.log(iv.mpf(n))
        return mpmath.mpf(v.a), mpmath.mpf(v.b)
    finally:
        iv.prec = old


def _nlogn_endpoints(n: int, prec: int):
    old = iv.prec
    try:
        iv.prec = prec
        v = iv.mpf(n) * iv.log(iv.mpf(n))
        return mpmath.mpf(v.a), mpmath.mpf(v.b)
    finally:
        iv.prec = old


def floor_n_log_n(n: int) -> int:
    """floor(n * ln n), certified: precision grows until both interval
    endpoints share a floor (ln n is irrational for n >= 2, so this ends)."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if n == 1:
        return 0
    prec = 64
    while True:
        a, b = _nlogn_endpoints(n, prec)
        lo = int(mpmath.floor(a))
        hi = int(mpmath.floor(b))
        if lo == hi:
            return lo
        prec *= 2


def exceeds_ln(p: int, n: int) -> bool:
    """Exact decision of p > ln n for integer p (never equal for n >= 2).

    Comparison against certified float endpoints is exact; precision doubles
    until p falls outside the enclosure."""
    if n < 2:
        return p > 0
    prec, lo, hi = _LN_CACHE.get(n, (0, None, None))
    while True:
        if lo is not None:
            if p > hi:
                return True
            if p < lo:
                return False
        prec = max(2 * prec, 64)
        lo, hi = _ln_endpoints(n, prec)
        _LN_CACHE[n] = (prec, lo, hi)


@dataclass
class ConstructionResult:
    """The cover set for a given n, with witness pairs for [1, M] once the
    coverage check has run.  methods records which splitting path produced
    each witness."""

    n: int
    M: int
    elements: tuple[int, ...]
    witnesses: dict[int, tuple[int, int]] = field(default_factory=dict)
    methods: dict[int, str] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return 1 <= x <= self.n or (
            x <= self.M and x > self.n and DEFAULT_TABLE.is_prime(x)
        )


def cover_set(n: int, table: PrimeTable | None = None) -> ConstructionResult:
    """[1..n] together with the primes in [n, floor(n*ln n)]."""
    if n < 3:
        raise InputError(f"need n >= 3, got {n}")
    table = table or DEFAULT_TABLE
    M = floor_n_log_n(n)
    elements = sorted(set(range(1, n + 1)) | set(table.primes_in(n, M)))
    result = ConstructionResult(n, M, tuple(elements))
    if n >= SIZE_RATIO_CHECK_FROM and result.size > 2 * n:
        raise FalsificationError(
            f"cover set for n={n} has {result.size} > 2n elements",
            payload={"n": n, "M": M, "size": result.size},
        )
    return result


def _in_cover(x: int, n: int, M: int, table: PrimeTable) -> bool:
    if x < 1 or x > M:
        return False
    return x <= n or table.is_prime(x)


def split_factor(
    x: int, n: int, result: ConstructionResult, table: PrimeTable | None = None
) -> tuple[int, int] | None:
    """Witness pair (d1, d2), d1 <= d2, with d1*d2 = x and both in the cover
    set, or None if the transfer loop fails (which the coverage argument says
    cannot happen for x in range)."""
    table = table or DEFAULT_TABLE
    if not 1 <= x <= result.M:
        raise InputError(f"x={x} outside [1, {result.M}]")
    if x == 1:
        return (1, 1)
    factors = table.factorize(x)
    p_big = factors[-1][0]
    if exceeds_ln(p_big, n) and x // p_big <= n:
        a, b = sorted((p_big, x // p_big))
        return (a, b)
    # transfer loop: start from the largest prime, migrate the smallest prime
    # factor of the big part across until both parts are in the set
    d1, d2 = p_big, x // p_big
    while True:
        if _in_cover(d1, n, result.M, table) and _in_cover(d2, n, result.M, table):
            a, b = sorted((d1, d2))
            return (a, b)
        if d2 == 1:
            return None
        p_small = table.factorize(d2)[0][0]
        d1 *= p_small
        d2 //= p_small


def _split_method(x: int, n: int, result: ConstructionResult, table: PrimeTable) -> str:
    if x == 1:
        return "unit"
    p_big = table.factorize(x)[-1][0]
    if exceeds_ln(p_big, n) and x // p_big <= n:
        return "large-prime"
    return "transfer"


def _exhaustive_witness(
    x: int, n: int, result: ConstructionResult, table: PrimeTable
) -> tuple[int, int] | None:
    d = 1
    while d * d <= x:
        if x % d == 0 and _in_cover(d, n, result.M, table) and _in_cover(
            x // d, n, result.M, table
        ):
            return (d, x // d)
        d += 1
    return None


def coverage_check(n: int, table: PrimeTable | None = None) -> ConstructionResult:
    """Certify that every x in [1, floor(n*ln n)] is a product of two cover-set
    elements, recording one witness per x.  A missing witness is a
    falsification, not a crash; below n = 10 an exhaustive pair search backs
    up the greedy splitter."""
    table = table or DEFAULT_TABLE
    result = cover_set(n, table)
    for x in range(1, result.M + 1):
        pair = split_factor(x, n, result, table)
        method = _split_method(x, n, result, table) if pair else None
        if pair is None and n < 10:
            pair = _exhaustive_witness(x, n, result, table)
            method = "exhaustive"
        if pair is None:
            raise FalsificationError(
                f"no witness for {x} in the cover set of n={n}",
                payload={"n": n, "M": result.M, "x": x},
            )
        d1, d2 = pair
        if d1 * d2 != x or not (
            _in_cover(d1, n, result.M, table) and _in_cover(d2, n, result.M, table)
        ):
            raise FalsificationError(
                f"invalid witness ({d1}, {d2}) for {x}",
                payload={"n": n, "x": x, "d1": d1, "d2": d2},
            )
        result.witnesses[x] = pair
        result.methods[x] = method
    return result
