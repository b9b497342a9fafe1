"""Cube points, monomial index sets, and the multilinear lift."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptf.cube_lift import (
    CubePoint,
    MonomialIndex,
    cube_lift_matrix,
    enumerate_cube,
    full_cube_lift_rank,
    lift,
    lift_matrix,
    lift_matrix_csv_string,
    monomial_masks,
    monomial_indices,
)
from ptf.errors import InvalidInputError, ResourceLimitError


def binom_le(n: int, d: int) -> int:
    return sum(math.comb(n, i) for i in range(d + 1))


class TestCubePoint:
    def test_coords_round_trip(self):
        p = CubePoint.from_coords((1, -1, 1, -1))
        assert p.bits == 0b1010
        assert p.coords() == (1, -1, 1, -1)
        assert p.coordinate(1) == -1

    def test_rejects_non_sign_coordinates(self):
        with pytest.raises(InvalidInputError):
            CubePoint.from_coords((1, 0, -1))

    def test_rejects_mask_beyond_dimension(self):
        with pytest.raises(InvalidInputError):
            CubePoint(2, 0b100)


class TestMonomials:
    def test_graded_lex_order_and_count(self):
        masks = monomial_masks(3, 2)
        assert masks == (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110)
        assert len(masks) == binom_le(3, 2)

    def test_labels(self):
        labels = [m.label() for m in monomial_indices(3, 2)]
        assert labels[0] == "{}"
        assert "{1,3}" in labels

    def test_degree_out_of_range(self):
        with pytest.raises(InvalidInputError):
            monomial_masks(3, 4)
        with pytest.raises(InvalidInputError):
            monomial_masks(3, 0)


class TestLift:
    def test_constant_coordinate_is_one(self):
        for p in enumerate_cube(3):
            assert lift(p, 2).coords[0] == 1

    def test_values_are_parity_signs(self):
        p = CubePoint.from_coords((-1, 1, -1))
        v = lift(p, 3)
        for j, mask in enumerate(monomial_masks(3, 3)):
            expected = -1 if bin(p.bits & mask).count("1") % 2 else 1
            assert v.coords[j] == expected

    @given(st.integers(1, 6), st.data())
    def test_character_multiplicativity(self, n, data):
        """The monomial evaluation is a group character: the value at mask
        I XOR J equals the product of the values at I and at J."""
        d = data.draw(st.integers(1, n))
        p = CubePoint(n, data.draw(st.integers(0, 2**n - 1)))
        masks = monomial_masks(n, d)
        v = lift(p, d)
        lookup = {m: int(v.coords[j]) for j, m in enumerate(masks)}
        i_mask = data.draw(st.sampled_from(masks))
        j_mask = data.draw(st.sampled_from(masks))
        combined = i_mask ^ j_mask
        if combined in lookup:
            assert lookup[combined] == lookup[i_mask] * lookup[j_mask]

    def test_matrix_rows_match_single_lifts(self):
        pts = enumerate_cube(3)
        M = lift_matrix(pts, 2)
        assert M.shape == (8, binom_le(3, 2))
        for k, p in enumerate(pts):
            assert np.array_equal(M.rows[k], lift(p, 2).coords)

    def test_full_cube_matrix_ascending_mask_order(self):
        M = cube_lift_matrix(2, 1)
        assert M.shape == (4, 3)
        # row 0 is the all-ones point; its lift is all ones
        assert np.all(M.rows[0] == 1)

    def test_enumeration_cap(self):
        with pytest.raises(ResourceLimitError):
            enumerate_cube(30)


class TestFullCubeRank:
    @pytest.mark.parametrize("n,d", [(2, 1), (3, 2), (4, 3), (6, 2)])
    def test_rank_equals_column_count(self, n, d):
        assert full_cube_lift_rank(n, d) == binom_le(n, d)


class TestCsvExport:
    def test_header_and_entries(self):
        text = lift_matrix_csv_string(cube_lift_matrix(2, 2))
        lines = text.strip().splitlines()
        assert lines[0] == '{},{1},{2},"{1,2}"'
        assert lines[1] == "1,1,1,1"
        assert len(lines) == 5
