"""The dense cover construction and its witness verifier."""

import pytest

from prodap.construct import (
    ConstructionResult,
    cover_set,
    coverage_check,
    exceeds_ln,
    floor_n_log_n,
    split_factor,
)
from prodap.errors import CapacityError, InputError
from prodap.exactnum import PrimeTable


class TestThresholds:
    def test_floor_nlogn_values(self):
        # floor(n ln n) pinned by certified interval refinement
        assert floor_n_log_n(3) == 3
        assert floor_n_log_n(10) == 23
        assert floor_n_log_n(50) == 195
        assert floor_n_log_n(100) == 460
        assert floor_n_log_n(500) == 3107
        assert floor_n_log_n(1000) == 6907

    def test_exceeds_ln(self):
        # ln 10 = 2.302..., ln 3 = 1.098...
        assert not exceeds_ln(2, 10)
        assert exceeds_ln(3, 10)
        assert not exceeds_ln(1, 3)
        assert exceeds_ln(2, 3)
        assert exceeds_ln(1, 2)  # ln 2 < 1


class TestCoverSet:
    def test_n10(self):
        res = cover_set(10)
        assert res.M == 23
        assert res.elements == tuple(sorted(set(range(1, 11)) | {11, 13, 17, 19, 23}))
        assert res.size == 15

    def test_n3(self):
        res = cover_set(3)
        assert res.M == 3
        assert res.elements == (1, 2, 3)

    def test_n100_size(self):
        res = cover_set(100)
        # 63 primes in [100, 460], checked against two independent counts
        assert res.size == 163
        assert res.size <= 200

    def test_membership(self):
        res = cover_set(10)
        assert 7 in res and 23 in res
        assert 12 not in res and 24 not in res and 0 not in res

    def test_rejects_small_n(self):
        with pytest.raises(InputError):
            cover_set(2)

    def test_capacity_propagates(self):
        with pytest.raises(CapacityError):
            cover_set(50, PrimeTable(capacity=60))

    def test_size_ratio(self):
        worst = 0.0
        for n in range(10, 400, 13):
            res = cover_set(n)
            assert res.size <= 2 * n
            worst = max(worst, res.size / n)
        assert worst <= 2.0


class TestSplitFactor:
    def test_examples(self):
        res = cover_set(10)
        assert split_factor(22, 10, res) == (2, 11)
        assert split_factor(16, 10, res) == (2, 8)
        assert split_factor(1, 10, res) == (1, 1)

    def test_prime_term(self):
        res = cover_set(10)
        assert split_factor(23, 10, res) == (1, 23)

    def test_out_of_range(self):
        res = cover_set(10)
        with pytest.raises(InputError):
            split_factor(24, 10, res)

    def test_products_land_in_set(self):
        res = cover_set(50)
        for x in range(1, res.M + 1):
            pair = split_factor(x, 50, res)
            assert pair is not None
            d1, d2 = pair
            assert d1 * d2 == x and d1 <= d2
            assert d1 in res and d2 in res


class TestCoverage:
    def test_n10_witnesses(self):
        res = coverage_check(10)
        assert set(res.witnesses) == set(range(1, 24))
        assert res.witnesses[21] == (3, 7)
        assert res.witnesses[23] == (1, 23)
        assert res.methods[1] == "unit"

    def test_n100_complete(self):
        res = coverage_check(100)
        assert len(res.witnesses) == 460
        assert all(d1 * d2 == x for x, (d1, d2) in res.witnesses.items())

    def test_small_n_may_use_fallback(self):
        for n in (3, 4, 5, 7, 9):
            res = coverage_check(n)
            assert set(res.witnesses) == set(range(1, res.M + 1))
            assert set(res.methods.values()) <= {"unit", "large-prime", "transfer", "exhaustive"}

    def test_methods_recorded_for_every_witness(self):
        res = coverage_check(30)
        assert set(res.methods) == set(res.witnesses)
        assert "transfer" in res.methods.values()
        assert "large-prime" in res.methods.values()
