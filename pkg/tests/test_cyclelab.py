"""Cycle detection, the alternating product identity, coefficient audits,
and the even-cycle extremal bound."""

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prodap.apcore import APDescriptor
from prodap.cyclelab import (
    CyclePoly,
    EvenCycle,
    bondy_simonovits_bound,
    cycle_bound_audit,
    cycle_identity_check,
    cycle_poly,
    divisibility_audit,
    elementary_symmetric,
    enumerate_even_cycles,
    find_even_cycle,
    integer_kth_root,
    symmetric_coefficients,
)
from prodap.errors import FalsificationError, InputError, ShapeError
from prodap.prodset import Edge, RepGraph, build_rep_graph

# B = [1,2,6,7] with terms {6,7,12,14} interlocks into a 4-cycle:
# 6=1*6, 7=1*7, 12=2*6, 14=2*7
SQUARE_B = [1, 2, 6, 7]
SQUARE_A = [6, 7, 12, 14]


def cover_instance(n=10):
    from prodap.construct import cover_set

    res = cover_set(n)
    A = list(range(1, res.M + 1))
    return list(res.elements), A, build_rep_graph(list(res.elements), A)


def to_networkx(graph: RepGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from((0, i) for i in range(len(graph.elements)))
    G.add_nodes_from((1, i) for i in range(len(graph.elements)))
    G.add_edges_from(((0, e.u), (1, e.v)) for e in graph.edges)
    return G


class TestFindCycle:
    def test_explicit_square(self):
        g = build_rep_graph(SQUARE_B, SQUARE_A)
        cyc = find_even_cycle(g, 2)
        assert cyc is not None and len(cyc.vertices) == 4
        assert sorted(cyc.values) == [6, 7, 12, 14]

    def test_tree_has_none(self):
        g = build_rep_graph([2, 3, 5, 7], [6, 10, 14])
        assert find_even_cycle(g, 5) is None

    def test_shortest_matches_girth(self):
        _, _, g = cover_instance(10)
        cyc = find_even_cycle(g, 10)
        assert len(cyc.vertices) == nx.girth(to_networkx(g))

    def test_k_cap_respected(self):
        # a lone 6-cycle: values chain around six vertices
        elements = (2, 3, 5, 7, 11, 13)
        edges = tuple(
            Edge(u, v, i, elements[u] * elements[v])
            for i, (u, v) in enumerate([(0, 3), (1, 3), (1, 4), (2, 4), (2, 5), (0, 5)])
        )
        g = RepGraph(elements, edges)
        assert find_even_cycle(g, 2) is None
        assert find_even_cycle(g, 3) is not None

    def test_invalid_k(self):
        g = build_rep_graph([2], [4])
        with pytest.raises(InputError):
            find_even_cycle(g, 1)


class TestEnumerate:
    def test_counts_match_networkx(self):
        for n in (10, 15):
            _, _, g = cover_instance(n)
            ours = enumerate_even_cycles(g, 5)
            G = to_networkx(g)
            ref = [c for c in nx.simple_cycles(G, length_bound=10)]
            assert len(ours) == len(ref)
            assert sorted(len(c.vertices) for c in ours) == sorted(len(c) for c in ref)

    def test_max_count_caps(self):
        _, _, g = cover_instance(15)
        capped = enumerate_even_cycles(g, 5, max_count=3)
        assert len(capped) == 3

    def test_cycles_are_valid(self):
        _, A, g = cover_instance(12)
        for cyc in enumerate_even_cycles(g, 5):
            assert cycle_identity_check(cyc, A)


class TestIdentity:
    def test_genuine_cycles_pass(self):
        _, A, g = cover_instance(10)
        cyc = find_even_cycle(g, 5)
        assert cycle_identity_check(cyc, A) is True

    def test_perturbed_value_fails(self):
        g = build_rep_graph(SQUARE_B, SQUARE_A)
        cyc = find_even_cycle(g, 2)
        A_bad = list(SQUARE_A)
        pos = A_bad.index(cyc.values[0])
        A_bad[pos] += 1
        bad_cycle = EvenCycle(
            cyc.vertices,
            cyc.indices,
            tuple(A_bad[j] for j in cyc.indices),
        )
        assert cycle_identity_check(bad_cycle, A_bad) is False

    def test_value_mismatch_is_shape_error(self):
        g = build_rep_graph(SQUARE_B, SQUARE_A)
        cyc = find_even_cycle(g, 2)
        with pytest.raises(ShapeError):
            cycle_identity_check(cyc, [60, 70, 120, 140])

    def test_four_cycle_alternating_product(self):
        g = build_rep_graph(SQUARE_B, SQUARE_A)
        cyc = find_even_cycle(g, 2)
        vals = cyc.values
        assert vals[0] * vals[2] == vals[1] * vals[3]


class TestCoefficients:
    def test_elementary_symmetric(self):
        assert elementary_symmetric([0, 3]) == [1, 3, 0]
        assert elementary_symmetric([1, 2]) == [1, 3, 2]
        assert elementary_symmetric([2, 3, 5]) == [1, 10, 31, 30]

    def test_hand_expansions(self):
        # (r)(r+3d) - (r+d)(r+2d) = -2d^2
        assert symmetric_coefficients((0, 3), (1, 2)) == (0, 0, -2)
        # (r+d)(r+4d) - (r+2d)(r+3d) = -2d^2
        assert symmetric_coefficients((1, 4), (2, 3)) == (0, 0, -2)

    def test_equal_multisets_vanish(self):
        assert symmetric_coefficients((1, 2), (2, 1)) == (0, 0, 0)

    def test_poly_on_genuine_cycle(self):
        _, A, g = cover_instance(10)
        desc = APDescriptor(1, 1, 1, 23)
        for cyc in enumerate_even_cycles(g, 5):
            poly = cycle_poly(cyc, desc)
            assert poly.coeffs[0] == 0
            assert poly.l >= 1 and poly.l < poly.m
            value = sum(
                c * desc.r ** (poly.k - t) * desc.d**t
                for t, c in enumerate(poly.coeffs)
            )
            assert value == 0

    def test_fake_cycle_falsifies(self):
        # indices {0,3} versus {1,2} cannot close a genuine cycle: the
        # polynomial evaluates to -2*d^2 != 0
        g = build_rep_graph(SQUARE_B, SQUARE_A)
        cyc = find_even_cycle(g, 2)
        fake = EvenCycle(cyc.vertices, (1, 0, 2, 3), cyc.values)
        with pytest.raises(FalsificationError):
            cycle_poly(fake, APDescriptor(1, 1, 2, 5))

    def test_all_zero_guard(self):
        g = build_rep_graph(SQUARE_B, SQUARE_A)
        cyc = find_even_cycle(g, 2)
        degenerate = object.__new__(EvenCycle)
        object.__setattr__(degenerate, "vertices", cyc.vertices)
        object.__setattr__(degenerate, "indices", (1, 1, 2, 2))
        object.__setattr__(degenerate, "values", cyc.values)
        with pytest.raises(FalsificationError) as exc:
            cycle_poly(degenerate, APDescriptor(1, 1, 2, 5))
        assert "vanish" in str(exc.value)

    def test_poly_requires_reduced(self):
        g = build_rep_graph(SQUARE_B, SQUARE_A)
        cyc = find_even_cycle(g, 2)
        with pytest.raises(InputError):
            cycle_poly(cyc, APDescriptor(2, 2, 2, 5))


class TestDivisibility:
    def test_hand_example(self):
        poly = CyclePoly(k=2, coeffs=(0, 0, -2), l=2, m=2, max_index=3)
        report = divisibility_audit(poly, APDescriptor(1, 1, 2, 5))
        assert report.d_divides_cl and report.r_divides_cm and report.coeff_bound_ok

    def test_trivial_when_r_d_one(self):
        _, A, g = cover_instance(10)
        desc = APDescriptor(1, 1, 1, 23)
        for cyc in enumerate_even_cycles(g, 5):
            divisibility_audit(cycle_poly(cyc, desc), desc)

    def test_coefficient_bound_form(self):
        poly = CyclePoly(k=2, coeffs=(0, 0, -2), l=2, m=2, max_index=4)
        report = divisibility_audit(poly, APDescriptor(1, 1, 2, 5))
        assert report.coeff_bound_ok  # |-2| <= 2 * C(2,2) * 16

    def test_violation_falsifies(self):
        poly = CyclePoly(k=2, coeffs=(0, 3, -2), l=1, m=2, max_index=3)
        with pytest.raises(FalsificationError):
            divisibility_audit(poly, APDescriptor(1, 1, 2, 5))  # d=2 does not divide 3


class TestBound:
    def test_examples(self):
        assert bondy_simonovits_bound(16, 4) == 12800
        assert bondy_simonovits_bound(2, 2) == 566

    def test_rejects_degenerate(self):
        with pytest.raises(InputError):
            bondy_simonovits_bound(1, 2)
        with pytest.raises(InputError):
            bondy_simonovits_bound(4, 1)

    def test_integer_kth_root(self):
        assert integer_kth_root(0, 3) == 0
        assert integer_kth_root(26, 3) == 2
        assert integer_kth_root(27, 3) == 3
        assert integer_kth_root(10**18, 2) == 10**9
        big = 7**40
        assert integer_kth_root(big, 40) == 7
        assert integer_kth_root(big - 1, 40) == 6

    @given(st.integers(min_value=0, max_value=10**24), st.integers(min_value=1, max_value=12))
    def test_root_brackets(self, x, k):
        r = integer_kth_root(x, k)
        assert r**k <= x < (r + 1) ** k

    def test_audit_below_bound(self):
        _, _, g = cover_instance(10)
        report = cycle_bound_audit(g, 2)
        assert not report.exceeded  # desk-scale graphs sit far below the bound
        assert report.cycle is not None
        assert report.edges <= report.bound


class TestForestAgreement:
    @settings(max_examples=60)
    @given(
        st.lists(
            st.tuples(st.integers(0, 6), st.integers(0, 6)),
            min_size=0,
            max_size=14,
            unique=True,
        )
    )
    def test_cycle_detection_matches_union_find(self, pairs):
        elements = tuple(range(2, 16))
        edges = tuple(
            Edge(u, v, i, elements[u] * elements[v]) for i, (u, v) in enumerate(pairs)
        )
        g = RepGraph(elements, edges)
        # independent acyclicity oracle
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                x = parent[x]
            return x

        acyclic = True
        for e in edges:
            ra, rb = find((0, e.u)), find((1, e.v))
            if ra == rb:
                acyclic = False
                break
            parent[ra] = rb
        found = find_even_cycle(g, len(edges) // 2 + 2) if edges else None
        assert (found is None) == acyclic
