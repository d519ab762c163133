"""Descriptor reduction and the pairwise-gcd bound."""

import random
from math import gcd

import pytest

from prodap.apcore import (
    APDescriptor,
    ap_terms,
    gcd_bound_audit,
    reduce_ap,
    validate_ap,
    verify_coverage,
)
from prodap.errors import InputError, RepresentationError, ShapeError


class TestDescriptor:
    def test_terms_examples(self):
        assert ap_terms(APDescriptor(1, 1, 1, 4)) == [1, 2, 3, 4]
        assert ap_terms(APDescriptor(2, 3, 2, 3)) == [6, 10, 14]
        assert ap_terms(APDescriptor(4, 2, 1, 3)) == [8, 12, 16]

    def test_validation(self):
        with pytest.raises(InputError):
            APDescriptor(0, 1, 1, 3)
        with pytest.raises(InputError):
            APDescriptor(1, 1, 0, 3)
        with pytest.raises(InputError):
            APDescriptor(1, 1, 1, 2)

    def test_is_reduced(self):
        assert APDescriptor(1, 3, 2, 3).is_reduced
        assert not APDescriptor(2, 3, 2, 3).is_reduced

    def test_validate_ap(self):
        assert validate_ap([3, 5, 7]) == (3, 2, 3)
        with pytest.raises(ShapeError):
            validate_ap([1, 2])
        with pytest.raises(ShapeError):
            validate_ap([3, 3, 3])
        with pytest.raises(ShapeError):
            validate_ap([1, 2, 4])
        with pytest.raises(InputError):
            validate_ap([-1, 0, 1])


class TestReduce:
    def test_single_strip(self):
        B2, desc, trace = reduce_ap([6, 10, 14], [2, 3, 5, 7])
        assert B2 == [1, 3, 5, 7]
        assert desc == APDescriptor(1, 3, 2, 3)
        assert [s.case for s in trace.steps] == ["k1"]
        assert trace.steps[0].prime == 2
        assert trace.k0_primes == (2,)
        assert ap_terms(desc) == [3, 5, 7]

    def test_gcd_extraction_only(self):
        B2, desc, trace = reduce_ap([8, 12, 16], [2, 4, 6, 8])
        assert B2 == [2, 4, 6, 8]
        assert desc == APDescriptor(4, 2, 1, 3)
        assert [s.case for s in trace.steps] == ["extract-gcd"]

    def test_already_reduced(self):
        B2, desc, trace = reduce_ap([3, 5, 7], [1, 3, 5, 7])
        assert B2 == [1, 3, 5, 7]
        assert desc == APDescriptor(1, 3, 2, 3)
        assert len(trace) == 0

    def test_partition_case(self):
        # ord_2(r=4) = 2, ord_2(d=8) = 3: the three-way split applies
        A = [4, 12, 20, 28]
        B = [2, 4, 6, 10, 14]  # 4=2*2, 12=2*6, 20=2*10, 28=2*14
        B2, desc, trace = reduce_ap(A, B)
        assert desc == APDescriptor(1, 1, 2, 4)
        assert B2 == [1, 3, 5, 7]
        assert ap_terms(desc) == [desc.D * (desc.r + desc.d * i) for i in range(4)]
        cases = [s.case for s in trace.steps]
        assert "partition-B1B2B3" in cases
        verify_coverage(ap_terms(desc), B2)

    def test_length_preserved_and_measure_decreases(self):
        B2, desc, trace = reduce_ap([6, 10, 14], [2, 3, 5, 7])
        assert all(s.result_desc.L == 3 for s in trace.steps)
        measures = [trace.initial_measure] + [s.measure for s in trace.steps]
        assert all(b < a for a, b in zip(measures, measures[1:]))

    def test_idempotent_on_examples(self):
        for A, B in [
            ([6, 10, 14], [2, 3, 5, 7]),
            ([8, 12, 16], [2, 4, 6, 8]),
            ([3, 5, 7], [1, 3, 5, 7]),
        ]:
            B1, d1, _ = reduce_ap(A, B)
            B2, d2, _ = reduce_ap(ap_terms(d1), B1)
            assert B1 == B2 and d1 == d2

    def test_unrepresentable_term_reported(self):
        with pytest.raises(RepresentationError) as exc:
            reduce_ap([6, 10, 14], [2, 3, 5])
        assert exc.value.term == 14

    def test_randomized_inflations(self):
        rng = random.Random(0xAB12)
        primes = [2, 3, 5, 7]
        for _ in range(60):
            # base instance: reduced progression with 1 in the set
            while True:
                r, d = rng.randint(1, 9), rng.randint(1, 6)
                if gcd(d, r) == 1:
                    break
            L = rng.randint(3, 6)
            A = [r + d * i for i in range(L)]
            B = sorted(set(A) | {1})
            for _ in range(rng.randint(1, 3)):
                p = rng.choice(primes)
                if rng.random() < 0.5:
                    A = [p * p * a for a in A]
                    B = [p * b for b in B]
                else:
                    A = [p * a for a in A]
                    B = sorted(set(B) | {p * b for b in B})
            B2, desc, trace = reduce_ap(A, B)
            assert desc.is_reduced
            assert len(B2) <= len(B)
            verify_coverage(ap_terms(desc), B2)
            ok, _ = gcd_bound_audit(desc)
            assert ok
            # idempotence
            B3, desc3, _ = reduce_ap(ap_terms(desc), B2)
            assert B3 == B2 and desc3 == desc
            # measure strictly decreases along the trace
            measures = [trace.initial_measure] + [s.measure for s in trace.steps]
            non_terminal = measures[: len(trace.steps) + 1]
            for a, b in zip(non_terminal, non_terminal[1:]):
                assert b <= a


class TestGcdBound:
    def test_examples(self):
        ok, (i, j, g) = gcd_bound_audit(APDescriptor(1, 3, 2, 3))
        assert ok and g == 1
        ok, (i, j, g) = gcd_bound_audit(APDescriptor(2, 1, 3, 4))
        assert ok and (i, j, g) == (3, 1, 4)  # gcd(8, 20) = 4 <= 8
        ok, (i, j, g) = gcd_bound_audit(APDescriptor(1, 1, 1, 10))
        assert ok and g == 5 and (i, j) == (9, 4)  # gcd(5, 10)

    def test_unreduced_rejected(self):
        with pytest.raises(InputError):
            gcd_bound_audit(APDescriptor(1, 2, 2, 3))

    def test_big_terms_python_path(self):
        # terms above the int64 range go through the pure-Python scan
        desc = APDescriptor(1, 10**19 + 1, 2, 4)
        ok, (i, j, g) = gcd_bound_audit(desc)
        assert ok

    def test_randomized(self):
        rng = random.Random(0x9C2D)
        for _ in range(100):
            D = rng.randint(1, 6)
            L = rng.randint(3, 60)
            while True:
                r = rng.randint(1, 10**6)
                d = rng.randint(1, 10**6)
                if gcd(d, D * r) == 1:
                    break
            ok, (i, j, g) = gcd_bound_audit(APDescriptor(D, r, d, L))
            assert ok
            terms = APDescriptor(D, r, d, L).terms()
            assert gcd(terms[i], terms[j]) == g
