"""Region enumeration, intersection subspaces, and the counting bounds."""

import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from ptf.arrangements import (
    Arrangement,
    count_intersection_subspaces,
    count_regions,
    in_general_position,
    normals_in_general_position,
    parse_arrangement,
    region_upper_bound,
    serialize_arrangement,
)
from ptf.errors import InvalidInputError, ResourceLimitError


def binom_le(p: int, m: int) -> int:
    return sum(math.comb(p, i) for i in range(m + 1))


FIGURE_LEFT = Arrangement(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), -1)])
FIGURE_RIGHT = Arrangement(2, [((1, 0), -1), ((0, 1), -1), ((1, 1), -2)])


class TestFigureInstances:
    def test_three_generic_lines_have_seven_regions(self):
        assert count_regions(FIGURE_LEFT).region_count == 7

    def test_three_concurrent_lines_have_six_regions(self):
        assert count_regions(FIGURE_RIGHT).region_count == 6

    def test_concurrent_lines_have_five_intersection_subspaces(self):
        # the plane, three lines, one shared point
        assert count_intersection_subspaces(FIGURE_RIGHT) == 5

    def test_generic_lines_have_seven_intersection_subspaces(self):
        # the plane, three lines, three pairwise points
        assert count_intersection_subspaces(FIGURE_LEFT) == 7


class TestKnownCounts:
    def test_single_hyperplane(self):
        assert count_regions(Arrangement(2, [((1, 1), 0)])).region_count == 2

    def test_two_parallel_lines(self):
        A = Arrangement(2, [((1, 0), 0), ((1, 0), -1)])
        assert count_regions(A).region_count == 3

    def test_duplicate_hyperplane_adds_nothing(self):
        A = Arrangement(2, [((1, 0), 0), ((2, 0), 0)])
        assert count_regions(A).region_count == 2

    def test_central_coordinate_planes(self):
        A = Arrangement(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)])
        assert count_regions(A).region_count == 8


class TestBounds:
    def test_upper_bound_values(self):
        assert region_upper_bound(3, 2) == 7
        assert region_upper_bound(3, 2, central=True) == 6

    def test_bound_requires_enough_hyperplanes(self):
        with pytest.raises(InvalidInputError):
            region_upper_bound(1, 2)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_count_within_bound_and_central_even(self, data):
        m = data.draw(st.integers(1, 3))
        p = data.draw(st.integers(m, 5))
        central = data.draw(st.booleans())
        hps = []
        for _ in range(p):
            normal = data.draw(
                st.lists(st.integers(-3, 3), min_size=m, max_size=m).filter(
                    lambda v: any(v)
                )
            )
            offset = 0 if central else data.draw(st.integers(-2, 2))
            hps.append((normal, offset))
        A = Arrangement(m, hps)
        n_regions = count_regions(A).region_count
        if A.central:
            assert n_regions % 2 == 0
        assert n_regions <= region_upper_bound(p, m, A.central)

    @given(st.data())
    @settings(max_examples=30, deadline=None)
    def test_general_position_attains_the_bound(self, data):
        m = data.draw(st.integers(1, 3))
        p = data.draw(st.integers(m, 5))
        hps = []
        for _ in range(p):
            normal = data.draw(
                st.lists(st.integers(-4, 4), min_size=m, max_size=m).filter(
                    lambda v: any(v)
                )
            )
            hps.append((normal, data.draw(st.integers(-3, 3))))
        A = Arrangement(m, hps)
        assume(in_general_position(A))
        assert count_regions(A).region_count == region_upper_bound(p, m)

    def test_central_general_position_attains_central_bound(self):
        A = Arrangement(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 0), ((1, -1), 0)])
        assert normals_in_general_position(A)
        assert count_regions(A).region_count == region_upper_bound(
            4, 2, central=True
        )


class TestMonotonicity:
    @given(st.data())
    @settings(max_examples=25, deadline=None)
    def test_adding_a_hyperplane_never_decreases_regions(self, data):
        m = data.draw(st.integers(1, 3))
        p = data.draw(st.integers(m, 4))
        hps = []
        for _ in range(p + 1):
            normal = data.draw(
                st.lists(st.integers(-3, 3), min_size=m, max_size=m).filter(
                    lambda v: any(v)
                )
            )
            hps.append((normal, data.draw(st.integers(-2, 2))))
        smaller = count_regions(Arrangement(m, hps[:-1])).region_count
        larger = count_regions(Arrangement(m, hps)).region_count
        assert larger >= smaller


class TestSubspaces:
    def test_whole_space_always_counted(self):
        A = Arrangement(2, [((1, 0), 0)])
        assert count_intersection_subspaces(A) == 2  # plane + the line

    def test_parallel_lines_never_meet(self):
        A = Arrangement(2, [((1, 0), 0), ((1, 0), -1)])
        assert count_intersection_subspaces(A) == 3


class TestSerialization:
    def test_round_trip(self):
        text = serialize_arrangement(FIGURE_LEFT)
        B = parse_arrangement(text)
        assert B.dimension == 2 and B.p == 3
        assert count_regions(B).region_count == 7

    def test_bad_header_rejected(self):
        with pytest.raises(InvalidInputError):
            parse_arrangement("2 3 projective\n1 0 0\n0 1 0\n1 1 1\n")

    def test_resource_cap(self):
        with pytest.raises(ResourceLimitError):
            count_regions(
                Arrangement(2, [((1, k), 0) for k in range(1, 45)])
            )


class TestThreadIndependence:
    def test_same_count_any_thread_count(self):
        for t in (1, 2, 4):
            assert count_regions(FIGURE_LEFT, threads=t).region_count == 7
