"""Rescaling pipeline that turns a quadratic-field instance whose target
progression is rational into an all-rational base set preserving the
progression inside the product set.

Per connected component of the bipartite representation graph, vertices on
the pivot's side divide by the pivot and vertices on the other side multiply
by it; every edge product is untouched, and parity of connecting paths makes
every rescaled element rational.  A 4-cycle pins down the progression start
as an exact rational, and the extremal C4 edge bound says when a 4-cycle must
exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .cyclelab import EvenCycle, find_even_cycle
from .errors import (
    DomainError,
    FalsificationError,
    InputError,
    UnsupportedExtensionError,
)
from .exactnum import QuadElem, sqrt_decompose
from .prodset import RepGraph, build_rep_graph, product_set, sort_key


@dataclass
class QuadInstance:
    """A base set over a single Q(sqrt(m)) whose product set carries a
    rational progression, plus the representation graph tying them together."""

    m: int
    elements: list[QuadElem]
    targets: list[Fraction]
    graph: RepGraph


def make_quad_instance(elements, targets, m: int) -> QuadInstance:
    """Validate and assemble an instance: shared field, nonzero distinct
    elements, rational targets, every target representable."""
    elems = []
    for x in elements:
        q = x if isinstance(x, QuadElem) else QuadElem.from_rational(Fraction(x), m)
        if q.m != m:
            raise InputError(f"element {q} lives in sqrt({q.m}), instance has sqrt({m})")
        if q.is_zero:
            raise InputError("zero element makes products degenerate")
        elems.append(q)
    targs = []
    for t in targets:
        if isinstance(t, QuadElem):
            if not t.is_rational:
                raise DomainError(f"target {t} is not rational")
            t = t.as_rational()
        targs.append(Fraction(t))
    graph = build_rep_graph(elems, [QuadElem.from_rational(t, m) for t in targs])
    return QuadInstance(m, sorted(elems, key=sort_key), targs, graph)


def scale_by_sqrt_d(B, d):
    """Divide every element by sqrt(d), d a positive rational.

    Rational sqrt(d): stays in the current field.  Otherwise the squarefree
    part of d becomes (or must match) the instance field; anything that would
    need a second independent surd is rejected.
    """
    d = Fraction(d)
    if d <= 0:
        raise DomainError(f"need d > 0, got {d}")
    if not B:
        raise InputError("empty set")
    s, m0 = sqrt_decompose(d)
    quad_ms = {x.m for x in B if isinstance(x, QuadElem)}
    if len(quad_ms) > 1:
        raise InputError("mixed fields in input set")
    if m0 == 1:
        return [x / s for x in B]
    existing = quad_ms.pop() if quad_ms else None
    if existing is None:
        # rational set moves into Q(sqrt(m0)): b / (s*sqrt(m0)) = (b/(s*m0))*sqrt(m0)
        return [QuadElem(Fraction(0), Fraction(x) / (s * m0), m0) for x in B]
    if existing == m0:
        inv_sqrt = QuadElem(Fraction(0), Fraction(1, 1) / (s * m0), m0)
        return [x * inv_sqrt for x in B]
    raise UnsupportedExtensionError(
        f"dividing a Q(sqrt({existing})) set by sqrt({d}) would need a second surd"
    )


def four_cycle_r(graph: RepGraph, cycle: EvenCycle, i1: int, i2: int) -> Fraction:
    """Recover the progression start from two adjacent edges of a 4-cycle.

    With edge values r + i1 and r + i2 and rational quotient q, the start is
    r = (i1 - q*i2)/(q - 1).  The result is checked against both edge values.
    """
    if len(cycle.vertices) != 4:
        raise InputError(f"need a 4-cycle, got length {len(cycle.vertices)}")
    pos = {cycle.indices[t]: t for t in range(4)}
    if i1 not in pos or i2 not in pos:
        raise InputError(f"indices ({i1}, {i2}) are not edges of the cycle")
    t1, t2 = pos[i1], pos[i2]
    if (t2 - t1) % 4 not in (1, 3):
        raise InputError(f"edges {i1} and {i2} are not adjacent in the cycle")
    a1 = Fraction(cycle.values[t1]) if not isinstance(cycle.values[t1], QuadElem) else cycle.values[t1].as_rational()
    a2 = Fraction(cycle.values[t2]) if not isinstance(cycle.values[t2], QuadElem) else cycle.values[t2].as_rational()
    if a1 == a2:
        raise DomainError("degenerate cycle: equal adjacent edge values")
    q = a1 / a2
    r = (i1 - q * i2) / (q - 1)
    if r + i1 != a1 or r + i2 != a2:
        raise InputError(
            f"edge values are not start + index (got r={r}, values {a1}, {a2}); "
            "normalize the progression to difference 1 first"
        )
    return r


def four_cycle_r_rotations(graph: RepGraph, cycle: EvenCycle) -> list[Fraction]:
    """The start recovered from each of the four adjacent edge pairs."""
    out = []
    for t in range(4):
        i1 = cycle.indices[t]
        i2 = cycle.indices[(t + 1) % 4]
        out.append(four_cycle_r(graph, cycle, i1, i2))
    return out


def path_parity_value(graph: RepGraph, path: list) -> Fraction:
    """Alternating product along a simple path with rational edge values.

    An even number of edges yields first/last; an odd number yields
    first*last.
    """
    if len(path) < 2:
        raise InputError("path needs at least one edge")
    if len(set(path)) != len(path):
        raise InputError("path revisits a vertex")
    adj = graph.adjacency
    value = None
    for t in range(len(path) - 1):
        edge = None
        for w, e in adj.get(path[t], ()):
            if w == path[t + 1]:
                edge = e
                break
        if edge is None:
            raise InputError(f"no edge between {path[t]} and {path[t + 1]}")
        v = edge.value
        v = v.as_rational() if isinstance(v, QuadElem) else Fraction(v)
        if v == 0:
            raise DomainError("zero edge value")
        if value is None:
            value = v
        elif t % 2 == 1:
            value = value / v
        else:
            value = value * v
    return value


def _components(graph: RepGraph) -> list[list]:
    adj = graph.adjacency
    seen = set()
    comps = []
    for start in sorted(adj, key=graph.vertex_order_key):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w, _ in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp, key=graph.vertex_order_key))
    return comps


def rationalize_components(inst: QuadInstance) -> list[Fraction]:
    """Rescale each component so every vertex value becomes rational while
    every target keeps its product representation; returns the sorted,
    deduplicated rational base set.

    Vertices on the pivot's color class divide by the pivot, the others
    multiply by it; isolated vertices carry no edge and become 1.
    """
    graph = inst.graph
    new_value: dict = {}
    for comp in _components(graph):
        whites = [v for v in comp if v[0] == 0]
        pivot_vertex = min(whites, key=graph.vertex_order_key)
        pivot = graph.vertex_value(pivot_vertex)
        if pivot.is_zero:
            raise InputError("zero pivot")
        for v in comp:
            val = graph.vertex_value(v)
            scaled = val / pivot if v[0] == 0 else val * pivot
            if not scaled.is_rational:
                raise FalsificationError(
                    "component rescaling left an irrational element",
                    payload={
                        "component": [[side, str(graph.vertex_value((side, i)))] for side, i in comp],
                        "pivot": str(pivot),
                        "vertex": str(val),
                        "scaled": str(scaled),
                    },
                )
            new_value[v] = scaled.as_rational()
    touched = set(new_value)
    for side in (0, 1):
        for i in range(len(graph.elements)):
            if (side, i) not in touched:
                new_value[(side, i)] = Fraction(1)  # isolated vertex
    # every edge product must be exactly preserved
    for e in graph.edges:
        target = inst.targets[e.index]
        got = new_value[(0, e.u)] * new_value[(1, e.v)]
        if got != target:
            raise FalsificationError(
                "rescaling changed an edge product",
                payload={"index": e.index, "expected": str(target), "got": str(got)},
            )
    rational_set = sorted(set(new_value.values()))
    ps = product_set(rational_set)
    for t in inst.targets:
        if t not in ps:
            raise FalsificationError(
                "a target lost all representations after rescaling",
                payload={"target": str(t), "set": [str(x) for x in rational_set]},
            )
    return rational_set


def c4_extremal_threshold(n: int) -> int:
    """ceil((n/4)(1 + sqrt(4n - 3))), exact via integer square-root bracketing."""
    if n < 1:
        raise InputError(f"need n >= 1, got {n}")
    u = n * n * (4 * n - 3)
    t = isqrt(u)
    # exact root: ceil((n+t)/4); otherwise sqrt(u) lies in (t, t+1) strictly
    return (n + t + 3) // 4 if t * t == u else (n + t + 4) // 4


@dataclass(frozen=True)
class C4AuditReport:
    n: int
    edges: int
    threshold: int
    exceeded: bool
    cycle: EvenCycle | None


def four_cycle_exists_audit(graph: RepGraph) -> C4AuditReport:
    """Above the C4 extremal threshold a 4-cycle must exist; its absence is a
    falsifying instance.  Below threshold the count is just reported.

    n counts only vertices incident to an edge: isolated copies would merely
    weaken the bound."""
    touched = {(0, e.u) for e in graph.edges} | {(1, e.v) for e in graph.edges}
    n = max(len(touched), 1)
    threshold = c4_extremal_threshold(n)
    edges = len(graph.edges)
    exceeded = edges > threshold
    cycle = find_even_cycle(graph, 2) if graph.edges else None
    if cycle is not None and len(cycle.vertices) != 4:
        cycle = None
    if exceeded and cycle is None:
        raise FalsificationError(
            "edge count exceeds the C4 extremal threshold yet no 4-cycle found",
            payload={"n": n, "edges": edges, "threshold": threshold},
        )
    return C4AuditReport(n, edges, threshold, exceeded, cycle)
