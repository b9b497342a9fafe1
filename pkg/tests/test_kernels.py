"""Backend tiers must agree exactly; fast paths equal reference paths."""

import math
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptf import kernels
from ptf.linalg_exact import rank as exact_rank

BACKENDS = ["numpy", "python"] + (["numba"] if kernels.HAS_NUMBA else [])


@pytest.fixture
def restore_backend():
    prev = os.environ.get("PTF_BACKEND")
    yield
    if prev is None:
        os.environ.pop("PTF_BACKEND", None)
    else:
        os.environ["PTF_BACKEND"] = prev


def _with_backend(b, fn):
    os.environ["PTF_BACKEND"] = b
    try:
        return fn()
    finally:
        os.environ.pop("PTF_BACKEND", None)


class TestBackendSelection:
    def test_invalid_choice_rejected(self, restore_backend):
        os.environ["PTF_BACKEND"] = "gpu"
        with pytest.raises(ValueError):
            kernels.backend()

    def test_explicit_choices_respected(self, restore_backend):
        for b in BACKENDS:
            os.environ["PTF_BACKEND"] = b
            assert kernels.backend() == b


class TestLiftRows:
    @given(st.integers(1, 8), st.data())
    @settings(max_examples=30, deadline=None)
    def test_tiers_agree(self, n, data):
        from ptf.cube_lift import monomial_masks

        d = data.draw(st.integers(1, n))
        bits = np.arange(1 << n, dtype=np.uint64)
        masks = np.array(monomial_masks(n, d), dtype=np.uint64)
        outs = [
            _with_backend(b, lambda: kernels.lift_rows(bits, masks))
            for b in BACKENDS
        ]
        for o in outs[1:]:
            assert np.array_equal(outs[0], o)

    def test_entries_are_parity_signs(self):
        bits = np.array([0b101], dtype=np.uint64)
        masks = np.array([0b000, 0b001, 0b100, 0b101], dtype=np.uint64)
        row = kernels.lift_rows(bits, masks)[0]
        assert list(row) == [1, -1, -1, 1]


class TestBareissRank:
    @given(st.lists(
        st.lists(st.integers(-4, 4), min_size=4, max_size=4),
        min_size=1, max_size=6,
    ))
    @settings(max_examples=60, deadline=None)
    def test_matches_exact_rational_rank(self, rows):
        M = np.array(rows, dtype=np.int64)
        r = kernels.bareiss_rank_i64(M.copy())
        if r >= 0:  # negative means "overflow risk, use exact fallback"
            assert r == exact_rank(rows)

    def test_overflow_guard_reports_not_wrong(self):
        big = (1 << 30) + 7
        M = np.array([[big, big - 1], [big - 2, big - 3]], dtype=np.int64)
        r = kernels.bareiss_rank_i64(M.copy())
        assert r == -1 or r == exact_rank([[big, big - 1], [big - 2, big - 3]])


class TestLoHits:
    @given(st.lists(st.integers(1, 9), min_size=1, max_size=10),
           st.integers(-12, 12))
    @settings(max_examples=40, deadline=None)
    def test_tiers_agree_and_match_enumeration(self, coeffs, target):
        n = len(coeffs)
        brute = sum(
            1
            for bits in range(1 << n)
            if sum(c if not (bits >> i) & 1 else -c
                   for i, c in enumerate(coeffs)) == target
        )
        arr = np.array(coeffs, dtype=np.int64)
        for b in BACKENDS:
            assert _with_backend(b, lambda: kernels.lo_hits(arr, target)) == brute


class TestSignScan:
    def test_counts_agree_across_tiers(self):
        """Sign-vector feasibility scan: identical region counts per tier."""
        from ptf.ptf_count import count_ptf

        values = {
            b: _with_backend(b, lambda: count_ptf(3, 2).count) for b in BACKENDS
        }
        assert set(values.values()) == {254}

    def test_int64_margin_lp_matches_exact_when_valid(self):
        from ptf.arrangements import Arrangement, count_regions

        A = Arrangement(3, [((1, 2, -1), 0), ((2, -1, 1), 0), ((1, 1, 1), 0)])
        counts = {
            b: _with_backend(b, lambda: count_regions(A).region_count)
            for b in BACKENDS
        }
        assert len(set(counts.values())) == 1
