"""Preprocessing, generators, the scaling study, and the audit pipeline."""

import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prodap.apcore import APDescriptor
from prodap.errors import InputError, RepresentationError
from prodap.harness import (
    InstanceFile,
    absolutize,
    concavity_demo,
    demo_instance_file,
    gen_smooth,
    instance_from_json,
    instance_to_json,
    integerize,
    pipeline,
    pipeline_report_json,
    run_trial,
    scaling_study,
    study_csv,
)
from prodap.jsonio import dumps_canonical


class TestAbsolutize:
    def test_examples(self):
        assert absolutize([-2, 3])[0] == [2, 3]
        assert absolutize([-2, 2])[0] == [2]
        assert absolutize([-1, -2, -3])[0] == [1, 2, 3]

    def test_shrink_factor_reported(self):
        _, factor = absolutize([1, 2])
        assert factor == 2

    def test_zero_rejected(self):
        with pytest.raises(InputError):
            absolutize([0, 1])


class TestIntegerize:
    def test_examples(self):
        assert integerize([Fraction(1, 2), Fraction(3, 2)]) == ([1, 3], 2)
        assert integerize([1, 2]) == ([1, 2], 1)
        assert integerize([Fraction(2, 3), Fraction(1, 2)]) == ([4, 3], 6)

    def test_nonpositive_rejected(self):
        with pytest.raises(InputError):
            integerize([Fraction(-1, 2)])

    @given(
        st.lists(
            st.fractions(min_value="1/20", max_value=50, max_denominator=20),
            min_size=1,
            max_size=8,
            unique=True,
        )
    )
    def test_scaling_preserves_ratios(self, B):
        ints, scale = integerize(B)
        assert all(Fraction(v) == scale * b for v, b in zip(ints, B))


class TestConcavity:
    def test_examples(self):
        rep = concavity_demo(APDescriptor(1, 1, 1, 4))
        assert rep.concave and rep.margins == (1, 1)
        rep = concavity_demo(APDescriptor(2, 3, 2, 3))
        assert rep.margins == (16,)

    @settings(max_examples=200)
    @given(
        st.integers(1, 50),
        st.integers(1, 10**4),
        st.integers(1, 10**4),
        st.integers(3, 40),
    )
    def test_margin_identity(self, D, r, d, L):
        desc = APDescriptor(D, r, d, L)
        rep = concavity_demo(desc)
        assert rep.concave
        assert all(m == D * D * d * d for m in rep.margins)


class TestGenerators:
    def test_smooth_prefix(self):
        assert gen_smooth(10) == [1, 2, 3, 4, 6, 8, 9, 12, 16, 18]

    def test_trial_reproducible_in_isolation(self):
        records = scaling_study(["random"], [12], 3, 99)
        lone = run_trial("random", 12, 99, 1)
        matching = [r for r in records if r.trial == 1][0]
        assert (lone.set_size, lone.prodset_size, lone.ap_length) == (
            matching.set_size,
            matching.prodset_size,
            matching.ap_length,
        )

    def test_unknown_generator(self):
        with pytest.raises(InputError):
            scaling_study(["fibonacci"], [5], 1, 0)


def strip_elapsed(csv_text: str) -> str:
    return "\n".join(",".join(line.split(",")[:-1]) for line in csv_text.splitlines())


class TestStudy:
    def test_csv_deterministic(self):
        a = study_csv(scaling_study(["cover", "random", "smooth"], [10, 15], 2, 7))
        b = study_csv(scaling_study(["cover", "random", "smooth"], [10, 15], 2, 7))
        assert strip_elapsed(a) == strip_elapsed(b)

    def test_header_and_rows(self):
        text = study_csv(scaling_study(["smooth"], [10], 2, 0))
        lines = text.splitlines()
        assert lines[0] == (
            "generator,n,set_size,prodset_size,ap_length,"
            "ratio_len_over_nlogn,seed,trial,elapsed_ms"
        )
        assert len(lines) == 3

    def test_cover_lengths_meet_floor(self):
        from prodap.construct import floor_n_log_n

        for rec in scaling_study(["cover"], [10, 20, 50], 1, 0):
            assert rec.ap_length >= floor_n_log_n(rec.n)


class TestInstanceIO:
    def test_roundtrip_integer(self):
        inst = InstanceFile("integer", [1, 2, 3], ap=APDescriptor(1, 1, 1, 3))
        again = instance_from_json(instance_to_json(inst))
        assert again.elements == [1, 2, 3]
        assert again.ap == inst.ap

    def test_roundtrip_quadratic(self):
        inst = demo_instance_file("quad", seed=3)
        again = instance_from_json(instance_to_json(inst))
        assert again.elements == inst.elements
        assert again.m == 2

    def test_duplicate_elements_rejected(self):
        with pytest.raises(InputError):
            instance_from_json({"field": "integer", "elements": ["2", "2"]})

    def test_unknown_field(self):
        with pytest.raises(InputError):
            instance_from_json({"field": "octonion", "elements": []})


class TestPipeline:
    def test_cover100_green(self):
        report = pipeline(demo_instance_file("cover100"))
        assert report["ok"] is True
        assert report["falsifications"] == []
        stages = report["stages"]
        assert stages["reduction"]["descriptor"] == {"D": "1", "r": "1", "d": "1", "L": 460}
        assert stages["gcd_bound"]["ok"] is True
        assert stages["cycles"]["all_pass"] is True
        assert stages["irregular"]["forest"] is True
        assert stages["concavity"]["margin"] == "1"

    def test_quad_demo_green(self):
        report = pipeline(demo_instance_file("quad", seed=1))
        assert report["ok"] is True
        assert report["stages"]["four_cycle_r"]["rotations_agree"] is True
        assert report["stages"]["rationalize"]["size"] >= 1

    def test_byte_stability(self):
        a = pipeline_report_json(demo_instance_file("quad", seed=5))
        b = pipeline_report_json(demo_instance_file("quad", seed=5))
        assert a == b

    def test_fabricated_claim_fails_loudly(self):
        inst = InstanceFile("integer", [2, 3, 5], ap=APDescriptor(1, 5, 1, 3))
        with pytest.raises(RepresentationError):
            pipeline(inst)  # 7 is not a product of set elements

    def test_search_when_no_claim(self):
        inst = InstanceFile("integer", [1, 2, 3, 4])
        report = pipeline(inst)
        assert report["ok"] is True
        assert report["stages"]["ap"]["source"] == "search"
        assert report["stages"]["ap"]["descriptor"]["L"] == 4

    def test_rational_instance(self):
        inst = InstanceFile(
            "rational",
            [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)],
            ap=None,
        )
        report = pipeline(inst)
        assert report["ok"] is True
        assert report["stages"]["integerize"]["scale"] == "2"


class TestCanonicalJson:
    def test_sorted_and_compact(self):
        assert dumps_canonical({"b": 1, "a": [2, 3]}) == '{"a":[2,3],"b":1}\n'


class TestWireFormats:
    def test_rational_encoding(self):
        from prodap.jsonio import dec_rat, enc_rat

        assert enc_rat(Fraction(3, 2)) == "3/2"
        assert enc_rat(Fraction(-4, 2)) == "-2"
        assert dec_rat("3/2") == Fraction(3, 2)
        assert dec_rat("-7") == Fraction(-7)
        with pytest.raises(InputError):
            dec_rat("x/y")

    def test_big_integer_strings(self):
        from prodap.jsonio import dec_int, enc_int

        n = 123456789012345678901
        assert enc_int(n) == "123456789012345678901"
        assert dec_int(enc_int(n)) == n

    def test_quad_encoding(self):
        from prodap.exactnum import QuadElem
        from prodap.jsonio import dec_quad, enc_quad

        q = QuadElem(Fraction(3, 2), Fraction(-1), 2)
        assert enc_quad(q) == {"a": "3/2", "b": "-1", "m": "2"}
        assert dec_quad(enc_quad(q)) == q
        assert dec_quad({"a": "3/2", "b": "-1"}, m=2) == q
        with pytest.raises(InputError):
            dec_quad({"a": "1", "b": "0", "m": "3"}, m=2)
        with pytest.raises(InputError):
            dec_quad({"a": "1", "b": "0"})
