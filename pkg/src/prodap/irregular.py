"""Prime-window irregularity analysis.

For a reduced progression of length L, the window holds the primes strictly
between L/3 and L/2 that do not divide the difference.  Each such prime
divides only two or three terms, an edge is p-irregular when its value
carries more factors p than the common factor D does, and a greedy pass picks
an independent set of irregular edges (at most one per prime) which is then
checked to span a forest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .apcore import APDescriptor
from .errors import InputError
from .exactnum import DEFAULT_TABLE, PrimeTable
from .prodset import Edge, RepGraph


@dataclass(frozen=True)
class PrimeWindow:
    """Primes p with L/3 < p < L/2 and p not dividing d, ascending."""

    L: int
    primes: tuple[int, ...]

    def __contains__(self, p: int) -> bool:
        return p in self.primes


def prime_window(desc: APDescriptor, table: PrimeTable | None = None) -> PrimeWindow:
    """The window primes of a reduced descriptor; empty windows are normal
    for short progressions."""
    if not desc.is_reduced:
        raise InputError("descriptor must be reduced")
    table = table or DEFAULT_TABLE
    L = desc.L
    lo = L // 3 + 1  # smallest integer > L/3
    hi = (L - 1) // 2  # largest integer < L/2
    if lo > hi:
        return PrimeWindow(L, ())
    primes = tuple(
        p for p in table.primes_in(lo, hi) if 3 * p > L and 2 * p < L and desc.d % p != 0
    )
    return PrimeWindow(L, primes)


def hit_count(p: int, desc: APDescriptor, table: PrimeTable | None = None) -> int:
    """Number of i in [0, L-1] with p dividing r + d*i."""
    table = table or DEFAULT_TABLE
    L = desc.L
    if not (3 * p > L and 2 * p < L and desc.d % p != 0 and table.is_prime(p)):
        raise InputError(f"{p} is not a window prime for L={L}, d={desc.d}")
    i0 = (-desc.r * pow(desc.d, -1, p)) % p
    if i0 >= L:
        return 0
    return (L - 1 - i0) // p + 1


def _ord(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass
class IrregularityReport:
    """Classification result: per-prime irregular edges, the greedy selection
    (at most one irregular edge per prime), and the forest verdict."""

    window: PrimeWindow
    per_prime: dict[int, tuple[Edge, ...]]
    edge_primes: dict[int, tuple[int, ...]]  # edge index -> its irregular primes
    selected: tuple[Edge, ...] = ()
    selected_primes: dict[int, tuple[int, ...]] = field(default_factory=dict)
    forest: bool | None = None


def classify_edges(
    graph: RepGraph, desc: APDescriptor, window: PrimeWindow
) -> IrregularityReport:
    """Mark each edge p-irregular when its value carries a strictly larger
    power of p than the common factor D does."""
    for e in graph.edges:
        if not isinstance(e.value, int):
            raise InputError("irregularity analysis needs an integer instance")
        if e.value != desc.term(e.index):
            raise InputError(
                f"edge {e.index} has value {e.value}, expected {desc.term(e.index)}"
            )
    per_prime: dict[int, list[Edge]] = {p: [] for p in window.primes}
    edge_primes: dict[int, tuple[int, ...]] = {}
    d_ord = {p: _ord(desc.D, p) for p in window.primes}
    for e in sorted(graph.edges, key=lambda e: e.index):
        mine = tuple(p for p in window.primes if _ord(e.value, p) > d_ord[p])
        if mine:
            edge_primes[e.index] = mine
            for p in mine:
                per_prime[p].append(e)
    return IrregularityReport(
        window,
        {p: tuple(edges) for p, edges in per_prime.items()},
        edge_primes,
    )


def select_independent_irregulars(report: IrregularityReport) -> tuple[Edge, ...]:
    """Greedy pass over irregular edges in ascending index order; an edge
    joins the selection iff none of its irregular primes is used yet, and
    joining claims all of them.  Fills the report in place and returns S."""
    used: set[int] = set()
    selected: list[Edge] = []
    selected_primes: dict[int, tuple[int, ...]] = {}
    by_index: dict[int, Edge] = {}
    for edges in report.per_prime.values():
        for e in edges:
            by_index[e.index] = e
    for idx in sorted(report.edge_primes):
        primes = report.edge_primes[idx]
        if any(p in used for p in primes):
            continue
        used.update(primes)
        selected.append(by_index[idx])
        selected_primes[idx] = primes
    report.selected = tuple(selected)
    report.selected_primes = selected_primes
    return report.selected


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        """Merge the classes of x and y; False if already joined."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def forest_check(graph: RepGraph, edges) -> bool:
    """True iff the edge-induced subgraph is acyclic (union-find)."""
    uf = UnionFind()
    for e in edges:
        if not uf.union((0, e.u), (1, e.v)):
            return False
    return True


def irregularity_report(
    graph: RepGraph, desc: APDescriptor, table: PrimeTable | None = None
) -> IrregularityReport:
    """Full pass: window, classification, greedy selection, forest check."""
    report = classify_edges(graph, desc, prime_window(desc, table))
    select_independent_irregulars(report)
    report.forest = forest_check(graph, report.selected)
    return report
