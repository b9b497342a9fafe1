"""Boolean cube points, monomial index sets, and the degree-d multilinear lift.

A point of {-1,1}^n is stored as an n-bit mask: bit i set means coordinate
x_{i+1} = -1, bit clear means +1 (so the all-plus point is mask 0).  The
degree-d lift of x is the vector of monomial values prod_{i in I} x_i over all
index sets |I| <= d, ordered by degree and then lexicographically by the
sorted elements of I; the empty set (constant monomial, value +1) comes first.
Since x_i = -1 exactly on set bits, the monomial value is (-1)^popcount(bits & I).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, List, Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError, ResourceLimitError
from . import kernels

MAX_N_CUBEPOINT = 62  # mask width cap
MAX_N_ENUMERATE = 24  # full-cube enumeration cap (2^24 rows)


@dataclass(frozen=True)
class CubePoint:
    """A vertex of {-1,1}^n as (dimension, bit mask)."""

    n: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N_CUBEPOINT:
            raise InvalidInputError(f"dimension n={self.n} outside 1..{MAX_N_CUBEPOINT}")
        if not 0 <= self.bits < (1 << self.n):
            raise InvalidInputError(f"mask {self.bits:#x} has bits beyond position {self.n - 1}")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "CubePoint":
        bits = 0
        for i, c in enumerate(coords):
            if c == -1:
                bits |= 1 << i
            elif c != 1:
                raise InvalidInputError(f"coordinate {c!r} not in {{-1,+1}}")
        return cls(len(coords), bits)

    def coords(self) -> tuple:
        return tuple(-1 if (self.bits >> i) & 1 else 1 for i in range(self.n))

    def coordinate(self, i: int) -> int:
        """Value of x_{i+1} (0-based index i)."""
        if not 0 <= i < self.n:
            raise InvalidInputError(f"coordinate index {i} outside 0..{self.n - 1}")
        return -1 if (self.bits >> i) & 1 else 1


@dataclass(frozen=True)
class MonomialIndex:
    """An index set I subset of {1..n} with |I| <= d, as a bit mask."""

    n: int
    mask: int

    @property
    def degree(self) -> int:
        return self.mask.bit_count()

    def members(self) -> tuple:
        """1-based variable indices, sorted."""
        return tuple(i + 1 for i in range(self.n) if (self.mask >> i) & 1)

    def label(self) -> str:
        """Render as a set literal, e.g. "{}", "{1,3}"."""
        return "{" + ",".join(str(i) for i in self.members()) + "}"


@lru_cache(maxsize=None)
def monomial_masks(n: int, d: int) -> tuple:
    """Bit masks of all index sets |I| <= d in canonical (graded-lex) order."""
    if not 1 <= d <= n:
        raise InvalidInputError(f"degree d={d} outside 1..n={n}")
    masks = []
    for size in range(d + 1):
        for combo in combinations(range(n), size):
            m = 0
            for i in combo:
                m |= 1 << i
            masks.append(m)
    return tuple(masks)


def monomial_indices(n: int, d: int) -> List[MonomialIndex]:
    return [MonomialIndex(n, m) for m in monomial_masks(n, d)]


@dataclass(frozen=True)
class LiftedVector:
    """The degree-d lift x^{<=d}: one +-1 entry per monomial index set."""

    n: int
    d: int
    coords: np.ndarray  # int8, length binom(n, <=d), entries +-1

    def __post_init__(self):
        expected = len(monomial_masks(self.n, self.d))
        if self.coords.shape != (expected,):
            raise DimensionMismatchError(
                f"lift length {self.coords.shape} != binom({self.n},<= {self.d}) = {expected}"
            )

    def __eq__(self, other):
        if not isinstance(other, LiftedVector):
            return NotImplemented
        return (
            self.n == other.n
            and self.d == other.d
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.n, self.d, self.coords.tobytes()))


@dataclass(frozen=True)
class LiftMatrix:
    """Row k = lift of point k; shape (len(points), binom(n,<=d)); entries +-1."""

    n: int
    d: int
    rows: np.ndarray  # int8, shape (count, binom(n,<=d))

    @property
    def shape(self):
        return self.rows.shape

    def column_labels(self) -> List[str]:
        return [MonomialIndex(self.n, m).label() for m in monomial_masks(self.n, self.d)]


def lift(x: CubePoint, d: int) -> LiftedVector:
    """Degree-d lift of a single cube point."""
    if not 1 <= d <= x.n:
        raise InvalidInputError(f"degree d={d} outside 1..n={x.n}")
    masks = monomial_masks(x.n, d)
    coords = np.empty(len(masks), dtype=np.int8)
    for j, m in enumerate(masks):
        coords[j] = -1 if (x.bits & m).bit_count() & 1 else 1
    return LiftedVector(x.n, d, coords)


def enumerate_cube(n: int) -> List[CubePoint]:
    """All 2^n cube points in ascending mask order."""
    if not 1 <= n <= MAX_N_ENUMERATE:
        raise ResourceLimitError(
            f"full cube enumeration supports 1 <= n <= {MAX_N_ENUMERATE}, got n={n}"
        )
    return [CubePoint(n, bits) for bits in range(1 << n)]


def lift_matrix(points: Union[Sequence[CubePoint], Iterable[CubePoint]], d: int) -> LiftMatrix:
    """Stack the lifts of `points` (all sharing one n) into a +-1 matrix."""
    pts = list(points)
    if not pts:
        raise InvalidInputError("empty point list")
    n = pts[0].n
    for p in pts:
        if p.n != n:
            raise DimensionMismatchError(f"mixed dimensions {n} and {p.n}")
    if not 1 <= d <= n:
        raise InvalidInputError(f"degree d={d} outside 1..n={n}")
    bits = np.array([p.bits for p in pts], dtype=np.uint64)
    masks = np.array(monomial_masks(n, d), dtype=np.uint64)
    rows = kernels.lift_rows(bits, masks)
    return LiftMatrix(n, d, rows)


def cube_lift_matrix(n: int, d: int) -> LiftMatrix:
    """Lift matrix of the full cube, rows in ascending mask order."""
    if not 1 <= n <= MAX_N_ENUMERATE:
        raise ResourceLimitError(
            f"full cube lift supports 1 <= n <= {MAX_N_ENUMERATE}, got n={n}"
        )
    bits = np.arange(1 << n, dtype=np.uint64)
    masks = np.array(monomial_masks(n, d), dtype=np.uint64)
    return LiftMatrix(n, d, kernels.lift_rows(bits, masks))


def full_cube_lift_rank(n: int, d: int) -> int:
    """Exact rank of the full-cube lift matrix, via its Gram matrix.

    For real matrices rank(L) == rank(L^T L), and the Gram entries are sums
    of 2^n products of +-1 values, so they stay far inside int64 for any
    enumerable n.  This avoids fraction-free elimination on the raw matrix,
    whose minors overflow machine words long before n reaches 10.
    """
    L = cube_lift_matrix(n, d).rows.astype(np.int64)
    gram = L.T @ L
    rank = kernels.bareiss_rank_i64(gram.copy())
    if rank < 0:
        from . import linalg_exact

        rank = linalg_exact.rank([[int(v) for v in row] for row in gram])
    return int(rank)


def export_lift_matrix_csv(matrix: LiftMatrix, path_or_buf) -> None:
    """Write rows as CSV; header = monomial index sets, e.g. "{}","{1}","{1,3}"."""

    def _write(fh):
        w = csv.writer(fh)
        w.writerow(matrix.column_labels())
        for row in matrix.rows:
            w.writerow(int(v) for v in row)

    if isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__"):
        with open(path_or_buf, "w", newline="") as fh:
            _write(fh)
    else:
        _write(path_or_buf)


def lift_matrix_csv_string(matrix: LiftMatrix) -> str:
    buf = io.StringIO()
    export_lift_matrix_csv(matrix, buf)
    return buf.getvalue()
