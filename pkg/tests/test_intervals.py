"""Adaptive-precision certified comparisons over mpmath intervals."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ptf import intervals
from ptf.errors import InvalidInputError, UndecidedComparisonError


class TestEnclosure:
    def test_fraction_round_trip_is_tight(self):
        q = Fraction(355, 113)
        lo, hi = intervals.bounds(intervals.from_fraction(q))
        assert lo <= q <= hi

    @given(st.fractions(min_value=Fraction(1, 1000), max_value=1000,
                        max_denominator=10**6))
    @settings(max_examples=60, deadline=None)
    def test_log2_fraction_refinement_nests(self, q):
        with intervals.precision(64):
            lo, hi = intervals.bounds(intervals.log2_fraction(q))
        assert lo <= hi
        with intervals.precision(128):
            lo2, hi2 = intervals.bounds(intervals.log2_fraction(q))
        assert lo <= lo2 <= hi2 <= hi  # refinement nests

    def test_log2_fraction_matches_integer_cases(self):
        # exact powers of two bracket tightly around the integer value
        with intervals.precision(64):
            lo, hi = intervals.bounds(intervals.log2_fraction(Fraction(1024)))
        assert lo <= 10 <= hi and hi - lo < Fraction(1, 2**40)

    def test_enclosure_width_shrinks_with_precision(self):
        q = Fraction(10, 3)
        with intervals.precision(32):
            lo1, hi1 = intervals.bounds(intervals.log2_fraction(q))
        with intervals.precision(256):
            lo2, hi2 = intervals.bounds(intervals.log2_fraction(q))
        assert (hi2 - lo2) < (hi1 - lo1)


class TestDecisions:
    def test_decide_leq_true_and_false(self):
        build = lambda: intervals.log2_fraction(Fraction(7))
        assert intervals.decide_leq(build, Fraction(3))[0] is True
        assert intervals.decide_leq(build, Fraction(28, 10))[0] is False

    def test_decide_geq(self):
        build = lambda: intervals.log2_fraction(Fraction(10))
        ok, bits = intervals.decide_geq(build, Fraction(3))
        assert ok and bits >= 8

    def test_decide_sign(self):
        pos = lambda: intervals.log2_fraction(Fraction(3)) - 1
        neg = lambda: intervals.log2_fraction(Fraction(3)) - 2
        assert intervals.decide_sign(pos)[0] == 1
        assert intervals.decide_sign(neg)[0] == -1

    def test_exact_tie_raises_rather_than_guessing(self):
        build = lambda: intervals.log2_fraction(Fraction(8))  # exactly 3
        with pytest.raises(UndecidedComparisonError):
            intervals.decide_sign(lambda: build() - 3, max_bits=512)

    def test_escalation_reports_higher_precision_for_tight_gaps(self):
        # log2(2^40 + 1) - 40 is positive but tiny: needs > 32 bits
        q = Fraction(2**40 + 1)
        _, bits = intervals.decide_geq(
            lambda: intervals.log2_fraction(q), Fraction(40),
            start_bits=16,
        )
        assert bits > 16

    @given(
        st.fractions(min_value=Fraction(1, 100), max_value=100,
                     max_denominator=1000),
        st.fractions(min_value=Fraction(1, 100), max_value=100,
                     max_denominator=1000),
    )
    @settings(max_examples=40, deadline=None)
    def test_log2_difference_sign_agrees_with_exact_comparison(self, p, q):
        # sign(log2 p - log2 q) must equal sign(p - q), decidable exactly
        if p == q:
            return
        verdict, _ = intervals.decide_leq(
            lambda: intervals.log2_fraction(p) - intervals.log2_fraction(q),
            Fraction(0),
        )
        assert verdict == (p < q)


class TestCertifiedBounds:
    def test_requested_width_is_met(self):
        lo, hi, bits = intervals.certified_bounds(
            lambda: intervals.log2_fraction(Fraction(3)),
            Fraction(1, 10**12),
        )
        assert hi - lo <= Fraction(1, 10**12)
        # log2(3) = 1.58496250072115618145373894394...
        assert lo < Fraction("1.58496250072115618145373895")
        assert hi > Fraction("1.58496250072115618145373894")

    def test_width_failure_raises(self):
        with pytest.raises(UndecidedComparisonError):
            intervals.certified_bounds(
                lambda: intervals.log2_fraction(Fraction(3)),
                Fraction(1, 2**5000),
                max_bits=64,
            )


class TestPrecisionCeiling:
    def test_env_override_validation(self, monkeypatch):
        monkeypatch.setenv("PTF_MAX_PRECISION_BITS", "not-a-number")
        with pytest.raises(InvalidInputError):
            intervals.max_precision_bits()
        monkeypatch.setenv("PTF_MAX_PRECISION_BITS", "4")
        with pytest.raises(InvalidInputError):
            intervals.max_precision_bits()
        monkeypatch.setenv("PTF_MAX_PRECISION_BITS", "512")
        assert intervals.max_precision_bits() == 512

    def test_default_ceiling(self, monkeypatch):
        monkeypatch.delenv("PTF_MAX_PRECISION_BITS", raising=False)
        assert intervals.max_precision_bits() == 4096

    def test_precision_context_restores(self):
        before = mpmath.iv.prec
        with intervals.precision(333):
            assert mpmath.iv.prec == 333
        assert mpmath.iv.prec == before
