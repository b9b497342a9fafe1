"""Closed-form bound checks and the certified inequality scans."""

from fractions import Fraction

import pytest

from ptf import bounds
from ptf.errors import InvalidInputError

ALPHA = Fraction(30528, 10000)


class TestBinomSum:
    def test_values(self):
        assert bounds.binom_sum(10, 3) == 1 + 10 + 45 + 120
        assert bounds.binom_sum(4, 4) == 16

    def test_degree_range_enforced(self):
        with pytest.raises(InvalidInputError):
            bounds.binom_sum(3, 4)


class TestBinomialChain:
    """(n/d)^d <= binom(n,d) <= binom(n,<=d) <= (en/d)^d."""

    def test_reference_point(self):
        e = bounds.check_lemma_A1(10, 3)
        assert e.holds and e.params == (10, 3)

    def test_degenerate_diagonal(self):
        assert bounds.check_lemma_A1(7, 7).holds

    def test_full_grid_clean(self):
        rep = bounds.scan_lemma_A1()
        assert rep.pairs_checked == 1830 and rep.holds

    def test_verdicts_stable_across_precisions(self):
        for n, d in ((10, 3), (17, 5), (60, 29)):
            low = bounds.check_lemma_A1(n, d, start_bits=128)
            high = bounds.check_lemma_A1(n, d, start_bits=256)
            assert low.holds == high.holds


class TestShrinkSandwich:
    """(1-2k/n)^d binom(n,<=d) <= binom(n-k,<=d) <= binom(n,<=d)."""

    def test_reference_point(self):
        e = bounds.check_lemma_A2(10, 2, 2)
        # (1 - 2/5)^2 * 56 = 504/25 <= 37 <= 56; smaller gap is 37 - 504/25
        assert e.holds
        assert e.margin_lo == Fraction(37) - Fraction(504, 25)

    def test_k_zero_excluded(self):
        with pytest.raises(InvalidInputError):
            bounds.check_lemma_A2(10, 2, 0)

    def test_degree_beyond_half_excluded(self):
        with pytest.raises(InvalidInputError):
            bounds.check_lemma_A2(10, 6, 1)

    def test_fails_at_smallest_even_degree_with_large_removal(self):
        """The sandwich is genuinely false once k > n/2 with even d: the
        shrink factor is squared back positive while the right side keeps
        shrinking.  Smallest violation: n=4, d=2, k=3 gives 11/4 > 2."""
        e = bounds.check_lemma_A2(4, 2, 3)
        assert not e.holds
        assert e.margin_lo == Fraction(2) - Fraction(11, 4)

    def test_scan_characterizes_every_failure(self):
        rep = bounds.scan_lemma_A2()
        assert rep.pairs_checked == 8400
        assert len(rep.failures) == 679
        assert rep.details["failures_all_have_even_d_and_2k_gt_n"] is True
        assert rep.details["holds_for_k_le_half_n_or_odd_d"] is True

    def test_holds_on_restricted_removals(self):
        # k <= n/2 (the only regime the downstream argument uses)
        for n, d, k in ((40, 20, 20), (30, 4, 15), (12, 3, 5)):
            assert bounds.check_lemma_A2(n, d, k).holds


class TestGeometricSeriesBound:
    """binom(n,<=d) <= binom(n,d) * (n+1-d)/(n+1-2d)."""

    def test_reference_point(self):
        e = bounds.check_lemma_A3(10, 3)
        assert e.holds
        assert e.margin_lo == Fraction(192) - 176

    def test_linear_case_small(self):
        for n in range(2, 12):
            assert bounds.check_lemma_A3(n, 1).holds

    def test_precondition(self):
        with pytest.raises(InvalidInputError):
            bounds.check_lemma_A3(10, 6)  # degree beyond n/2
        # d = n/2 exactly keeps the denominator positive and is allowed
        assert bounds.check_lemma_A3(10, 5).holds
        assert bounds.check_lemma_A3(11, 5).holds

    def test_full_grid_clean(self):
        rep = bounds.scan_lemma_A3()
        assert rep.pairs_checked == 900 and rep.holds


class TestCrossingLocalization:
    """Where log2(ex) - x changes sign, and that the scan constant sits below."""

    def test_root_bracketed_to_requested_width(self):
        rep = bounds.scan_case1_crossing()
        assert rep.holds
        lo = Fraction(rep.details["root_lo"])
        hi = Fraction(rep.details["root_hi"])
        assert hi - lo <= Fraction(1, 10**4)
        # the bracket's left endpoint is the scan constant itself; the
        # strict separation is the certified g(alpha) > 0 endpoint check
        assert ALPHA <= lo and hi < Fraction(306, 100)

    def test_endpoint_checks_certified(self):
        rep = bounds.scan_case1_crossing()
        checks = rep.details["checks"]
        assert checks["g(1) > 0"] and checks["g(alpha) > 0"]
        assert checks["g(3.06) < 0"]
        assert rep.details["alpha_below_root"] is True

    def test_margin_at_scan_constant_is_positive_but_thin(self):
        rep = bounds.scan_case1_crossing()
        margin_lo, margin_hi = map(Fraction, rep.details["margin_at_alpha"])
        assert 0 < margin_lo < margin_hi < Fraction(1, 1000)

    def test_stable_across_precisions(self):
        a = bounds.scan_case1_crossing(start_bits=128)
        b = bounds.scan_case1_crossing(start_bits=256)
        assert a.holds == b.holds
        assert a.details["checks"] == b.details["checks"]


class TestAffineLogGrid:
    """slope*d - 0.5 log2 d - offset >= 0 on the grid, plus monotonicity."""

    def test_full_grid_clean_with_min_at_one(self):
        rep = bounds.scan_case3()
        assert rep.holds
        assert Fraction(rep.details["min_margin_at_d"]) == 1
        assert Fraction(rep.details["min_margin"]) == Fraction(93, 1250)
        assert rep.details["derivative_positive_from_1"] is True

    def test_grid_endpoint_margin_exact(self):
        rep = bounds.scan_case3()
        first = [e for e in rep.entries if e.params == ("1",)]
        assert first and first[0].margin_lo == Fraction(93, 1250)

    def test_companion_inequality_included(self):
        rep = bounds.scan_case3()
        assert rep.details["companion_grid"] == "integer d in [36, 100]"
        assert rep.details["companion_derivative_positive_from_36"] is True


class TestEntropyCountBound:
    """1 + m log2(e(2^n-1)/m) <= n^(d+1)/d! across the full admissible grid."""

    def test_full_grid_clean(self):
        rep = bounds.scan_case4()
        assert rep.pairs_checked == 7118
        assert rep.holds

    def test_small_pair_margin_positive(self):
        entries = {e.params: e for e in bounds.scan_case4().entries}
        e = entries[(8, 1)]
        assert e.holds and e.margin_lo > 0


class TestSmallDimensionPowerBound:
    """2 binom(2^n-1, <=m) <= 2^(n^(d+1)/d!) for 2 <= n <= 7, exact."""

    def test_all_pairs_clean(self):
        rep = bounds.scan_case5()
        assert rep.pairs_checked == 27 and rep.holds

    def test_equality_pair_holds(self):
        entries = {e.params: e for e in bounds.scan_case5().entries}
        # 16 <= 2^4 holds with equality, decided by exact integer comparison
        assert entries[(2, 1)].holds
        assert entries[(2, 1)].precision_bits == 0


class TestScanRunner:
    def test_case_names_resolve(self):
        assert bounds.run_scan("5").pairs_checked == 27
        assert bounds.run_scan("case5").pairs_checked == 27
        assert bounds.run_scan("A3").pairs_checked == 900

    def test_unknown_case_rejected(self):
        with pytest.raises(InvalidInputError):
            bounds.run_scan("case9")


class TestMainTheoremBounds:
    def test_smallest_linear_case(self):
        rep = bounds.main_theorem_bounds(2, 1, count=14)
        assert rep.values["upper_log2"] == 6
        assert rep.all_hold

    def test_smallest_full_degree_case(self):
        rep = bounds.main_theorem_bounds(2, 2, count=16)
        assert rep.values["upper_log2"] == 8
        assert rep.all_hold

    def test_saks_reference_value(self):
        rep = bounds.main_theorem_bounds(5, 2)
        assert rep.values["saks_lower_log2"] == 10

    def test_linear_case_reports_reference_windows(self):
        rep = bounds.main_theorem_bounds(100, 1)
        (win_lo, win_hi), upper = rep.values["zuev_window"]
        assert win_lo <= win_hi <= upper == 100**2
        assert "kks_reference" in rep.values

    def test_lower_bound_shrinks_with_c(self):
        big_c = bounds.main_theorem_bounds(10, 2, C=2)
        small_c = bounds.main_theorem_bounds(10, 2, C=Fraction(1, 2))
        assert big_c.values["lower_log2"][1] <= small_c.values["lower_log2"][0]

    def test_preconditions(self):
        with pytest.raises(InvalidInputError):
            bounds.main_theorem_bounds(1, 1)
        with pytest.raises(InvalidInputError):
            bounds.main_theorem_bounds(10, 2, C=0)
