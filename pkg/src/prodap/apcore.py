"""Arithmetic-progression descriptors, reduction to coprime-difference form,
and the pairwise-gcd bound auditor.

A progression is stored as D*(r + d*i) for i = 0..L-1.  ``reduce_ap`` rewrites
an input progression A inside B.B into that shape with gcd(d, D*r) = 1 by
repeatedly dividing out a prime that appears to a higher power in the
difference than in the start, shrinking B alongside.  Every step is followed
by an independent re-verification that A is still covered by products of the
shrunken set; the case analysis is never trusted on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import (
    FalsificationError,
    InputError,
    RepresentationError,
    ShapeError,
)
from .exactnum import DEFAULT_TABLE, PrimeTable


@dataclass(frozen=True)
class APDescriptor:
    """Progression D*(r + d*i), i = 0..L-1.  All of D, r, d >= 1 and L >= 3."""

    D: int
    r: int
    d: int
    L: int

    def __post_init__(self):
        for name in ("D", "r", "d"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise InputError(f"APDescriptor.{name} must be a positive integer, got {v}")
        if not isinstance(self.L, int) or self.L < 3:
            raise InputError(f"APDescriptor.L must be an integer >= 3, got {self.L}")

    def term(self, i: int) -> int:
        return self.D * (self.r + self.d * i)

    def terms(self) -> list[int]:
        return [self.term(i) for i in range(self.L)]

    @property
    def is_reduced(self) -> bool:
        return gcd(self.d, self.D * self.r) == 1


def ap_terms(desc: APDescriptor) -> list[int]:
    """The L terms of the progression, ascending."""
    return desc.terms()


def validate_ap(A: list[int]) -> tuple[int, int, int]:
    """Check A is an ascending AP of >= 3 positive integers; return (r, d, L)."""
    if len(A) < 3:
        raise ShapeError(f"need at least 3 terms, got {len(A)}")
    if any(not isinstance(a, int) or a < 1 for a in A):
        raise InputError("AP terms must be positive integers")
    d = A[1] - A[0]
    if d < 1:
        raise ShapeError(f"difference must be positive, got {d}")
    for i in range(2, len(A)):
        if A[i] - A[i - 1] != d:
            raise ShapeError(
                f"not an arithmetic progression: gap at position {i} "
                f"is {A[i] - A[i - 1]}, expected {d}"
            )
    return A[0], d, len(A)


def _find_pair(a: int, elems: list[int], elem_set: set[int]) -> tuple[int, int] | None:
    """Lexicographically first pair (x, y), x <= y, with x*y == a, both in the set."""
    for x in elems:
        if x * x > a:
            break
        if a % x == 0 and a // x in elem_set:
            return (x, a // x)
    return None


def verify_coverage(A: list[int], B: list[int]) -> None:
    """Raise RepresentationError at the first term of A not in B.B."""
    elems = sorted(B)
    elem_set = set(elems)
    for a in A:
        if _find_pair(a, elems, elem_set) is None:
            raise RepresentationError(
                f"term {a} is not a product of two set elements", term=a
            )


def _omega_sum(B: list[int], table: PrimeTable) -> int:
    """Total prime multiplicity of the product of all elements (1 contributes 0)."""
    return sum(sum(e for _, e in table.factorize(b)) for b in B if b > 1)


@dataclass(frozen=True)
class ReductionStep:
    prime: int | None  # None for the terminal gcd extraction
    case: str  # "k1" | "partition-B1B2B3" | "extract-gcd"
    divisors: tuple[tuple[int, int], ...]  # (element before, divisor applied)
    result_set: tuple[int, ...]
    result_desc: APDescriptor
    measure: int  # prime-multiplicity measure of result_set


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...] = ()
    k0_primes: tuple[int, ...] = ()  # primes dividing d but not D*r, no step needed
    initial_measure: int = 0

    def __len__(self):
        return len(self.steps)


def reduce_ap(
    A: list[int], B: list[int], table: PrimeTable | None = None
) -> tuple[list[int], APDescriptor, ReductionTrace]:
    """Rewrite A subset of B.B as D*(r + d*i) with gcd(d, D*r) = 1.

    Returns (B', descriptor, trace).  The returned descriptor's terms are the
    transformed progression (the original A divided by the primes recorded in
    the trace), each still a product of two elements of B'.  Raises
    FalsificationError if a case of the reduction fails its post-step coverage
    oracle on a concrete instance.
    """
    table = table or DEFAULT_TABLE
    r, d, L = validate_ap(A)
    if any(not isinstance(b, int) or b < 1 for b in B):
        raise InputError("base-set elements must be positive integers")
    cur_B = sorted(set(B))
    verify_coverage(A, cur_B)

    steps: list[ReductionStep] = []
    initial_measure = _omega_sum(cur_B, table)
    measure = initial_measure

    while True:
        # smallest prime appearing to a higher power in d than in r, with the
        # power in r at least 1 (the power-0 case is handled by extraction)
        pick = None
        for p, e_d in (table.factorize(d) if d > 1 else []):
            e_r = 0
            rr = r
            while rr % p == 0:
                rr //= p
                e_r += 1
            if e_d > e_r >= 1:
                pick = (p, e_r, e_d)
                break
        if pick is None:
            break
        p, k_r, k_d = pick
        if k_r == 1:
            # every term carries exactly one factor p; strip one p from the
            # divisible elements of B and divide A by p
            divisors = tuple((b, p if b % p == 0 else 1) for b in cur_B)
            new_B = sorted({b // p if b % p == 0 else b for b in cur_B})
            ap_div = p
            case = "k1"
        else:
            # k_d > k_r >= 2: terms carry exactly p**k_r; split B by valuation
            # and divide A by p**2
            divs = []
            for b in cur_B:
                e = 0
                bb = b
                while bb % p == 0:
                    bb //= p
                    e += 1
                if e == 0:
                    divs.append((b, 1))
                elif e < k_r:
                    divs.append((b, p))
                else:
                    divs.append((b, p * p))
            divisors = tuple(divs)
            new_B = sorted({b // q for b, q in divs})
            ap_div = p * p
            case = "partition-B1B2B3"
        r //= ap_div
        d //= ap_div
        new_A = [r + d * i for i in range(L)]
        try:
            verify_coverage(new_A, new_B)
        except RepresentationError as exc:
            raise FalsificationError(
                f"reduction case {case} at p={p} broke coverage: {exc}",
                payload={
                    "case": case,
                    "prime": p,
                    "set": [str(b) for b in new_B],
                    "ap": [str(a) for a in new_A],
                    "missing_term": str(exc.term),
                },
            ) from exc
        new_measure = _omega_sum(new_B, table)
        if new_measure >= measure:
            raise FalsificationError(
                "reduction step did not decrease the prime-multiplicity measure",
                payload={"case": case, "prime": p, "before": measure, "after": new_measure},
            )
        steps.append(
            ReductionStep(
                prime=p,
                case=case,
                divisors=divisors,
                result_set=tuple(new_B),
                result_desc=APDescriptor(1, r, d, L),
                measure=new_measure,
            )
        )
        cur_B = new_B
        measure = new_measure

    g = gcd(r, d)
    desc = APDescriptor(g, r // g, d // g, L)
    assert desc.is_reduced, "terminal extraction must yield gcd(d, D*r) = 1"
    k0 = tuple(
        p for p, _ in table.factorize(desc.d) if desc.r % p != 0
    ) if desc.d > 1 else ()
    if g > 1:
        steps.append(
            ReductionStep(
                prime=None,
                case="extract-gcd",
                divisors=(),
                result_set=tuple(cur_B),
                result_desc=desc,
                measure=measure,
            )
        )
    trace = ReductionTrace(tuple(steps), k0, initial_measure)
    return cur_B, desc, trace


def _worst_pair_gcd_fast(desc: APDescriptor) -> tuple[int, int, int]:
    """Maximum pairwise gcd over all j < i, for terms within int64 range.

    Euclid's first step gives gcd(t_i, t_j) = gcd(t_j, D*d*(i-j)), and
    gcd(a, b*c) = gcd(a, b) * gcd(a // gcd(a, b), c) holds unconditionally
    (check each prime's exponent), so with G_j = gcd(t_j, D*d) the pairwise
    gcd is G_j * gcd(t_j // G_j, i - j).  The second factor only sees values
    below L, which keeps the vectorized scan cheap.
    """
    L = desc.L
    t = desc.D * (desc.r + desc.d * np.arange(L, dtype=np.int64))
    G = np.gcd(t, desc.D * desc.d)
    u = t // G
    best_g, best_i, best_j = 0, 1, 0
    chunk = 128
    for lo in range(1, L, chunk):
        hi = min(lo + chunk, L)
        deltas = np.arange(lo, hi, dtype=np.int64)
        rows = L - lo
        g = np.gcd(u[:rows, None] % deltas[None, :], deltas[None, :])
        g *= G[:rows, None]
        jj = np.arange(rows, dtype=np.int64)[:, None]
        g[jj + deltas[None, :] > L - 1] = 0
        flat = int(np.argmax(g))
        j0, k0 = divmod(flat, hi - lo)
        val = int(g[j0, k0])
        if val > best_g:
            best_g, best_i, best_j = val, j0 + lo + k0, j0
    return best_i, best_j, best_g


def gcd_bound_audit(desc: APDescriptor) -> tuple[bool, tuple[int, int, int]]:
    """Check gcd(term_i, term_j) <= D*L over all pairs j < i of a reduced
    descriptor; returns (ok, (i, j, gcd)) for a maximizing pair."""
    if not desc.is_reduced:
        raise InputError(
            f"descriptor not reduced: gcd(d={desc.d}, D*r={desc.D * desc.r}) != 1"
        )
    terms = desc.terms()
    bound = desc.D * desc.L
    if terms[-1] < 2**62:
        i, j, worst = _worst_pair_gcd_fast(desc)
    else:
        worst, i, j = 0, 1, 0
        for jj in range(desc.L):
            for ii in range(jj + 1, desc.L):
                g = gcd(terms[ii], terms[jj])
                if g > worst:
                    worst, i, j = g, ii, jj
    return worst <= bound, (i, j, worst)
