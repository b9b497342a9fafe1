"""Exact threshold-function counts: region route, oracle route, bounds."""

import math

import pytest

from ptf.errors import InvalidInputError, ResourceLimitError
from ptf.ptf_count import count_ptf, oracle_count_ptf, verify_upper_bounds

KNOWN = {
    (1, 1): 4,
    (2, 1): 14,
    (2, 2): 16,
    (3, 1): 104,
    (3, 2): 254,
    (3, 3): 256,
    (4, 1): 1882,
}


class TestRegionRoute:
    @pytest.mark.parametrize("nd,expected", sorted(KNOWN.items()))
    def test_known_values(self, nd, expected):
        n, d = nd
        assert count_ptf(n, d).count == expected

    def test_full_degree_realizes_every_function(self):
        for n in (1, 2, 3):
            assert count_ptf(n, n).count == 2 ** (2**n)

    def test_counts_are_even(self):
        for (n, d), expected in KNOWN.items():
            assert expected % 2 == 0

    def test_monotone_in_degree(self):
        assert count_ptf(3, 1).count <= count_ptf(3, 2).count <= count_ptf(3, 3).count

    def test_thread_count_does_not_change_result(self):
        assert count_ptf(3, 2, threads=4).count == 254


class TestOracleRoute:
    @pytest.mark.parametrize("nd,expected", [t for t in sorted(KNOWN.items())
                                             if t[0][0] <= 3])
    def test_exhaustive_function_scan_agrees(self, nd, expected):
        n, d = nd
        res = oracle_count_ptf(n, d)
        assert res.count == expected
        assert res.method == "function-oracle"


class TestBounds:
    def test_sharp_bound_tight_at_smallest_cases(self):
        for n, d in ((2, 1), (2, 2)):
            bc = verify_upper_bounds(count_ptf(n, d))
            assert bc.sharp_holds and bc.sharp_slack == 0

    def test_all_bounds_hold_on_known_counts(self):
        for (n, d) in KNOWN:
            bc = verify_upper_bounds(count_ptf(n, d))
            assert bc.sharp_holds and bc.capacity_holds and bc.saks_holds
            m = sum(math.comb(n, i) for i in range(d + 1))
            assert bc.sharp_upper == 2 * sum(
                math.comb(2**n - 1, i) for i in range(m)
            )
            assert bc.capacity_upper_log2 == n * m
            assert bc.saks_lower_log2 == (
                math.comb(n, d + 1) if d < n else 0
            )


class TestValidation:
    def test_degree_above_dimension_clamps_to_full_degree(self):
        # monomials are multilinear, so any d >= n realizes every function
        assert count_ptf(2, 3).count == 16

    def test_rejects_nonpositive_inputs(self):
        with pytest.raises(InvalidInputError):
            count_ptf(0, 1)

    def test_region_enumeration_cap(self):
        with pytest.raises(ResourceLimitError):
            count_ptf(40, 1)

    def test_oracle_cap(self):
        with pytest.raises(ResourceLimitError):
            oracle_count_ptf(6, 1)
