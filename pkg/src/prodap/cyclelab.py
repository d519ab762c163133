"""Even-cycle machinery over representation graphs.

Every cycle in the doubled bipartite graph is even.  Walking a cycle and
multiplying edge values with alternating exponents telescopes to 1, so the
product of odd-position edge values equals the product of even-position
values.  Writing each value as r + j*d and expanding turns the identity into
a polynomial relation whose coefficients are differences of elementary
symmetric functions of the edge indices; those coefficients drive exact
divisibility audits.  The module also provides the even-cycle extremal edge
bound ex(n, C_2k) < 100*k*n^(1+1/k), computed with exact integer k-th roots.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb

from .apcore import APDescriptor
from .errors import FalsificationError, InputError, ShapeError
from .prodset import RepGraph

Vertex = tuple[int, int]


@dataclass(frozen=True)
class EvenCycle:
    """Simple even cycle: vertices in canonical traversal order, and the
    progression index of each edge (edge t joins vertices t and t+1, wrapping).
    All indices are distinct because each term has exactly one edge."""

    vertices: tuple[Vertex, ...]
    indices: tuple[int, ...]
    values: tuple

    def __post_init__(self):
        n = len(self.vertices)
        if n < 4 or n % 2 != 0:
            raise ShapeError(f"cycle length must be even and >= 4, got {n}")
        if len(self.indices) != n or len(self.values) != n:
            raise ShapeError("one index and one value per edge required")
        if len(set(self.vertices)) != n:
            raise ShapeError("cycle revisits a vertex")
        if len(set(self.indices)) != n:
            raise ShapeError("cycle reuses a progression index")
        for t in range(n):
            if self.vertices[t][0] == self.vertices[(t + 1) % n][0]:
                raise ShapeError("consecutive cycle vertices must alternate sides")

    @property
    def k(self) -> int:
        return len(self.vertices) // 2

    def odd_position_indices(self) -> tuple[int, ...]:
        return self.indices[0::2]

    def even_position_indices(self) -> tuple[int, ...]:
        return self.indices[1::2]


def _edge_lookup(graph: RepGraph) -> dict:
    table = {}
    for e in graph.edges:
        table[((0, e.u), (1, e.v))] = e
        table[((1, e.v), (0, e.u))] = e
    return table


def _canonical_cycle(graph: RepGraph, vertices: list[Vertex]) -> EvenCycle:
    """Rotate to the smallest vertex and orient toward its smaller neighbor."""
    lookup = _edge_lookup(graph)
    n = len(vertices)
    key = graph.vertex_order_key
    start = min(range(n), key=lambda t: key(vertices[t]))
    prev_v = vertices[(start - 1) % n]
    next_v = vertices[(start + 1) % n]
    step = 1 if key(next_v) <= key(prev_v) else -1
    ordered = [vertices[(start + step * t) % n] for t in range(n)]
    indices, values = [], []
    for t in range(n):
        e = lookup.get((ordered[t], ordered[(t + 1) % n]))
        if e is None:
            raise ShapeError(f"no edge between {ordered[t]} and {ordered[(t + 1) % n]}")
        indices.append(e.index)
        values.append(e.value)
    return EvenCycle(tuple(ordered), tuple(indices), tuple(values))


def _cycle_sort_key(graph: RepGraph, cycle: EvenCycle):
    return (len(cycle.vertices), [graph.vertex_order_key(v) for v in cycle.vertices])


def find_even_cycle(graph: RepGraph, k: int) -> EvenCycle | None:
    """Shortest cycle of length <= 2k, or None.

    For each edge in turn, a breadth-first search for the shortest path
    between its endpoints avoiding the edge itself closes the shortest cycle
    through that edge; the minimum over edges is the girth.  Ties break by
    canonical vertex order.
    """
    if k < 2:
        raise InputError(f"half-length bound must be >= 2, got {k}")
    adj = graph.adjacency
    best = None
    best_key = None
    for e in sorted(graph.edges, key=lambda e: e.index):
        src, dst = (0, e.u), (1, e.v)
        max_edges = (2 * k - 1) if best is None else min(2 * k, len(best.vertices)) - 1
        parent: dict = {src: None}
        queue = deque([(src, 0)])
        found = None
        while queue:
            v, depth = queue.popleft()
            if depth >= max_edges:
                continue
            for w, via in adj.get(v, ()):
                if via.index == e.index or w in parent:
                    continue
                parent[w] = v
                if w == dst:
                    found = w
                    queue.clear()
                    break
                queue.append((w, depth + 1))
        if found is None:
            continue
        path = []
        v = found
        while v is not None:
            path.append(v)
            v = parent[v]
        cycle = _canonical_cycle(graph, path)
        ck = _cycle_sort_key(graph, cycle)
        if best is None or ck < best_key:
            best, best_key = cycle, ck
    return best


def enumerate_even_cycles(
    graph: RepGraph, k: int, max_count: int | None = None
) -> list[EvenCycle]:
    """All simple cycles of length <= 2k, canonicalized and deduplicated,
    sorted by (length, vertex order).  max_count caps the search."""
    if k < 2:
        raise InputError(f"half-length bound must be >= 2, got {k}")
    adj = graph.adjacency
    order = {v: i for i, v in enumerate(sorted(adj, key=graph.vertex_order_key))}
    found: dict = {}

    def dfs(root, v, path, on_path):
        if max_count is not None and len(found) >= max_count:
            return
        for w, _ in adj.get(v, ()):
            if w == root and len(path) >= 4:
                # avoid the mirror image of each cycle: first step below last
                if order[path[1]] < order[path[-1]]:
                    cycle = _canonical_cycle(graph, path)
                    found.setdefault((cycle.vertices, cycle.indices), cycle)
                continue
            if w in on_path or order.get(w, -1) < order[root]:
                continue
            if len(path) < 2 * k:
                on_path.add(w)
                path.append(w)
                dfs(root, w, path, on_path)
                path.pop()
                on_path.discard(w)

    for root in sorted(adj, key=graph.vertex_order_key):
        dfs(root, root, [root], {root})
        if max_count is not None and len(found) >= max_count:
            break
    return sorted(found.values(), key=lambda c: _cycle_sort_key(graph, c))


def _prod(values):
    out = values[0]
    for v in values[1:]:
        out = out * v
    return out


def cycle_identity_check(cycle: EvenCycle, A) -> bool:
    """Exact check that odd-position edge values multiply to the same result
    as even-position edge values."""
    vals = []
    for t, j in enumerate(cycle.indices):
        if j < 0 or j >= len(A):
            raise ShapeError(f"edge index {j} outside progression of length {len(A)}")
        if cycle.values[t] != A[j]:
            raise ShapeError(
                f"edge {t} carries value {cycle.values[t]} but term {j} is {A[j]}"
            )
        vals.append(A[j])
    return _prod(vals[0::2]) == _prod(vals[1::2])


def elementary_symmetric(values: list[int]) -> list[int]:
    """e_0..e_n of the given values, by the product recurrence, exact."""
    e = [1] + [0] * len(values)
    for t, x in enumerate(values, start=1):
        for s in range(t, 0, -1):
            e[s] += x * e[s - 1]
    return e


def symmetric_coefficients(even_indices, odd_indices) -> tuple[int, ...]:
    """c_t = e_t(even indices) - e_t(odd indices) for t = 0..k.

    This is the raw coefficient computation; it accepts any two index lists
    of equal length, genuine cycle or not."""
    if len(even_indices) != len(odd_indices):
        raise InputError("index lists must have equal length")
    even = elementary_symmetric(list(even_indices))
    odd = elementary_symmetric(list(odd_indices))
    return tuple(even[t] - odd[t] for t in range(len(even_indices) + 1))


@dataclass(frozen=True)
class CyclePoly:
    """Coefficients c_0..c_k with c_t = e_t(even-position indices) minus
    e_t(odd-position indices); l and m bracket the nonzero coefficients."""

    k: int
    coeffs: tuple[int, ...]
    l: int
    m: int
    max_index: int


def cycle_poly(cycle: EvenCycle, desc: APDescriptor) -> CyclePoly:
    """Coefficient vector of the cycle's polynomial relation; verifies that
    the full evaluation at (r, d) vanishes exactly."""
    if not desc.is_reduced:
        raise InputError("descriptor must be reduced")
    k = cycle.k
    coeffs = symmetric_coefficients(
        cycle.even_position_indices(), cycle.odd_position_indices()
    )
    if all(c == 0 for c in coeffs):
        raise FalsificationError(
            "all cycle coefficients vanish, impossible for distinct indices",
            payload={"indices": list(cycle.indices)},
        )
    value = sum(c * desc.r ** (k - t) * desc.d**t for t, c in enumerate(coeffs))
    if value != 0:
        raise FalsificationError(
            "cycle polynomial does not vanish at (r, d)",
            payload={
                "indices": list(cycle.indices),
                "coeffs": [str(c) for c in coeffs],
                "r": str(desc.r),
                "d": str(desc.d),
                "value": str(value),
            },
        )
    nonzero = [t for t, c in enumerate(coeffs) if c != 0]
    return CyclePoly(k, coeffs, nonzero[0], nonzero[-1], max(cycle.indices))


@dataclass(frozen=True)
class DivisibilityReport:
    d_divides_cl: bool
    r_divides_cm: bool
    coeff_bound_ok: bool
    c_l: int
    c_m: int


def divisibility_audit(poly: CyclePoly, desc: APDescriptor) -> DivisibilityReport:
    """Assert d | c_l, r | c_m, and |c_t| <= 2*C(k,t)*(max index)^t; any
    failure raises FalsificationError carrying the full evidence."""
    if not desc.is_reduced:
        raise InputError("descriptor must be reduced")
    c_l, c_m = poly.coeffs[poly.l], poly.coeffs[poly.m]
    d_ok = c_l % desc.d == 0
    r_ok = c_m % desc.r == 0
    bound_ok = all(
        abs(c) <= 2 * comb(poly.k, t) * poly.max_index**t
        for t, c in enumerate(poly.coeffs)
    )
    report = DivisibilityReport(d_ok, r_ok, bound_ok, c_l, c_m)
    if not (d_ok and r_ok and bound_ok):
        raise FalsificationError(
            "cycle coefficient audit failed",
            payload={
                "coeffs": [str(c) for c in poly.coeffs],
                "l": poly.l,
                "m": poly.m,
                "d_divides_cl": d_ok,
                "r_divides_cm": r_ok,
                "coeff_bound_ok": bound_ok,
                "descriptor": {"D": desc.D, "r": desc.r, "d": desc.d, "L": desc.L},
            },
        )
    return report


def integer_kth_root(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0, k >= 1, exact."""
    if x < 0 or k < 1:
        raise InputError("integer_kth_root requires x >= 0 and k >= 1")
    if x in (0, 1) or k == 1:
        return x
    guess = int(round(x ** (1.0 / k)))
    while guess > 0 and guess**k > x:
        guess -= 1
    while (guess + 1) ** k <= x:
        guess += 1
    return guess


def bondy_simonovits_bound(n: int, k: int) -> int:
    """ceil(100 * k * n^(1+1/k)): the even-cycle extremal edge bound, via
    integer k-th-root bracketing (no floating point)."""
    if n < 2 or k < 2:
        raise InputError("need n >= 2 and k >= 2")
    target = (100 * k) ** k * n ** (k + 1)
    root = integer_kth_root(target, k)
    return root if root**k == target else root + 1


@dataclass(frozen=True)
class CycleBoundReport:
    n: int
    k: int
    edges: int
    bound: int
    exceeded: bool
    cycle: EvenCycle | None


def cycle_bound_audit(graph: RepGraph, k: int) -> CycleBoundReport:
    """If the graph has more edges than the extremal bound allows, a cycle of
    length <= 2k must exist; its absence is a falsifying instance.  Only
    vertices incident to an edge count toward n."""
    touched = {(0, e.u) for e in graph.edges} | {(1, e.v) for e in graph.edges}
    n = max(len(touched), 2)
    bound = bondy_simonovits_bound(n, k)
    edges = len(graph.edges)
    exceeded = edges > bound
    cycle = find_even_cycle(graph, k)
    if exceeded and cycle is None:
        raise FalsificationError(
            "edge count exceeds the even-cycle extremal bound yet no cycle found",
            payload={"n": n, "k": k, "edges": edges, "bound": str(bound)},
        )
    return CycleBoundReport(n, k, edges, bound, exceeded, cycle)
