"""Exact rational linear algebra: rank, determinant, spans, feasibility."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptf.errors import DimensionMismatchError, InvalidInputError
from ptf.linalg_exact import (
    SpanSolver,
    det,
    rank,
    solve_in_span,
    strict_feasible,
    strict_feasible_affine,
    to_fraction,
)

small_fraction = st.fractions(
    min_value=-5, max_value=5, max_denominator=4
)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(small_fraction, min_size=c, max_size=c),
                min_size=r,
                max_size=r,
            )
        )
    )


class TestRankDet:
    def test_identity(self):
        I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert rank(I3) == 3
        assert det(I3) == 1

    def test_rational_entries(self):
        M = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 6)]]
        assert det(M) == 0
        assert rank(M) == 1

    def test_det_requires_square(self):
        with pytest.raises(DimensionMismatchError):
            det([[1, 2, 3], [4, 5, 6]])

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_rank_bounded_and_transpose_invariant(self, M):
        r = rank(M)
        assert 0 <= r <= min(len(M), len(M[0]))
        Mt = [list(col) for col in zip(*M)]
        assert rank(Mt) == r

    @given(matrices(max_rows=4, max_cols=4))
    @settings(max_examples=40, deadline=None)
    def test_duplicating_a_row_preserves_rank(self, M):
        assert rank(M + [M[0]]) == rank(M)

    @given(st.lists(st.lists(small_fraction, min_size=3, max_size=3),
                    min_size=3, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_det_zero_iff_rank_deficient(self, M):
        assert (det(M) == 0) == (rank(M) < 3)

    @given(st.lists(st.lists(small_fraction, min_size=3, max_size=3),
                    min_size=3, max_size=3), small_fraction)
    @settings(max_examples=40, deadline=None)
    def test_det_row_scaling(self, M, c):
        scaled = [[c * v for v in M[0]]] + M[1:]
        assert det(scaled) == c * det(M)


class TestSpans:
    def test_solve_recovers_coefficients(self):
        rows = [[1, 0, 1], [0, 1, 1]]
        coeffs = solve_in_span(rows, [2, 3, 5])
        assert coeffs == [Fraction(2), Fraction(3)]

    def test_outside_span_returns_none(self):
        assert solve_in_span([[1, 0, 0]], [0, 1, 0]) is None

    @given(matrices(max_rows=4, max_cols=4), st.data())
    @settings(max_examples=50, deadline=None)
    def test_exact_combinations_are_found(self, M, data):
        weights = data.draw(
            st.lists(small_fraction, min_size=len(M), max_size=len(M))
        )
        target = [
            sum(w * row[j] for w, row in zip(weights, M))
            for j in range(len(M[0]))
        ]
        coeffs = SpanSolver(M).solve(target)
        assert coeffs is not None
        rebuilt = [
            sum(c * row[j] for c, row in zip(coeffs, M))
            for j in range(len(M[0]))
        ]
        assert rebuilt == [to_fraction(v) for v in target]

    def test_empty_rows_rejected(self):
        with pytest.raises(InvalidInputError):
            SpanSolver([])


class TestStrictFeasibility:
    def test_separable_signs(self):
        res = strict_feasible([((1, 0), 1), ((0, 1), 1), ((1, 1), 1)])
        assert res.feasible
        w = res.witness
        assert w is not None and all(
            sum(a * b for a, b in zip(w, normal)) > 0
            for normal in ((1, 0), (0, 1), (1, 1))
        )

    def test_contradictory_signs_yield_certificate(self):
        res = strict_feasible([((1, 0), 1), ((-1, 0), 1)])
        assert not res.feasible
        assert res.certificate is not None

    def test_affine_witness_satisfies_all(self):
        cons = [((1, 0), Fraction(-1, 2), 1), ((0, 1), 0, -1)]
        res = strict_feasible_affine(cons)
        assert res.feasible
        x = res.witness
        for normal, offset, sign in cons:
            val = sum(a * b for a, b in zip(x, normal)) + offset
            assert (val > 0) == (sign > 0)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_witness_or_certificate_is_exact(self, data):
        m = data.draw(st.integers(1, 3))
        p = data.draw(st.integers(1, 5))
        cons = []
        for _ in range(p):
            normal = data.draw(
                st.lists(st.integers(-3, 3), min_size=m, max_size=m).filter(
                    lambda v: any(v)
                )
            )
            cons.append((normal, data.draw(st.sampled_from((1, -1)))))
        res = strict_feasible(cons)
        if res.feasible:
            for normal, sign in cons:
                val = sum(a * b for a, b in zip(res.witness, normal))
                assert val * sign > 0
        else:
            lam = res.certificate
            assert any(v > 0 for v in lam) and all(v >= 0 for v in lam)
            combo = [
                sum(l * s * normal[j] for l, (normal, s) in zip(lam, cons))
                for j in range(m)
            ]
            assert all(v == 0 for v in combo)
