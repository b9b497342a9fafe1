"""Exact rational linear algebra: rank, span solving, strict feasibility.

Everything in this module is exact.  Rationals are `fractions.Fraction`
(arbitrary-precision, reduced, positive denominator — exactly the BigRational
contract).  The fast paths run guarded int64 kernels (see `kernels`); every
witness, certificate, and rank used in a decision is re-verified in exact
integer arithmetic, and any overflow or verification failure falls back to
the pure big-integer implementation.  No floating point anywhere.

Strict feasibility (is there `a` with sign(<a, w_i>) = sigma_i for all i,
all inequalities strict?) is decided by an exact margin LP: maximize eps
subject to sigma_i <a, w_i> >= eps and |a_j| <= 1.  Feasible iff the optimal
eps is positive.  See `_simplex_exact` for the algebra and the infeasibility
certificate (nonnegative lambda with sum_i lambda_i sigma_i w_i = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from ._simplex_exact import margin_lp_exact
from .errors import (
    DimensionMismatchError,
    InvalidInputError,
    VerificationError,
)

BigRational = Fraction

RationalLike = Union[int, Fraction, str, np.integer]

FEASIBLE = "feasible-with-witness"
INFEASIBLE = "infeasible"


def to_fraction(x: RationalLike) -> Fraction:
    """Convert to Fraction; floats are rejected to keep the module exact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise InvalidInputError(
        f"expected an exact rational (int/Fraction/str), got {type(x).__name__}"
    )


def _fraction_rows(rows: Iterable[Sequence[RationalLike]]) -> List[List[Fraction]]:
    out = [[to_fraction(v) for v in row] for row in rows]
    if out:
        c = len(out[0])
        for row in out:
            if len(row) != c:
                raise DimensionMismatchError("ragged rows in matrix input")
    return out


def _integerize_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators (positive scaling)."""
    return _integerize_rows_scaled(rows)[0]


def _integerize_rows_scaled(
    rows: Sequence[Sequence[Fraction]],
) -> Tuple[List[List[int]], List[int]]:
    out = []
    scales = []
    for row in rows:
        den = 1
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
        out.append([int(v * den) for v in row])
        scales.append(den)
    return out, scales


class RationalMatrix:
    """Immutable rectangular matrix of Fractions."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Sequence[RationalLike]]) -> None:
        data = _fraction_rows(rows)
        if not data or not data[0]:
            raise InvalidInputError("matrix dimensions must be positive")
        object.__setattr__(self, "rows", tuple(tuple(r) for r in data))

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.rows)))

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        r, c = self.shape
        return f"RationalMatrix({r}x{c})"


MatrixLike = Union[RationalMatrix, Iterable[Sequence[RationalLike]], np.ndarray]


def _as_fraction_rows(M: MatrixLike) -> List[List[Fraction]]:
    if isinstance(M, RationalMatrix):
        return [list(r) for r in M.rows]
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise DimensionMismatchError("expected a 2-D matrix")
        if not np.issubdtype(M.dtype, np.integer):
            raise InvalidInputError("numpy matrices must be integer-typed")
        return [[Fraction(int(v)) for v in row] for row in M]
    return _fraction_rows(M)


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------


def _bareiss_rank_big(rows: List[List[int]]) -> int:
    """Exact rank by fraction-free elimination on Python big integers."""
    m = [row[:] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    prev = 1
    for c in range(ncols):
        if rank == nrows:
            break
        pr = next((i for i in range(rank, nrows) if m[i][c]), -1)
        if pr < 0:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        piv = m[rank][c]
        for i in range(rank + 1, nrows):
            f = m[i][c]
            mi, mr = m[i], m[rank]
            for j in range(ncols):
                mi[j] = (piv * mi[j] - f * mr[j]) // prev
            mi[c] = 0
        prev = piv
        rank += 1
    return rank


def rank(M: MatrixLike) -> int:
    """Exact rank over the rationals (fraction-free elimination)."""
    rows = _as_fraction_rows(M)
    if not rows or not rows[0]:
        return 0
    int_rows = _integerize_rows(rows)
    if kernels.backend() != "python" and _fits_i64(int_rows):
        r = kernels.bareiss_rank_i64(np.array(int_rows, dtype=np.int64))
        if r >= 0:
            return r
    return _bareiss_rank_big(int_rows)


def _fits_i64(rows: List[List[int]]) -> bool:
    return all(abs(v) < kernels.GUARD for row in rows for v in row)


def det(M: MatrixLike) -> Fraction:
    """Exact determinant of a square rational matrix (Bareiss, big integers)."""
    rows = _as_fraction_rows(M)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise DimensionMismatchError("determinant requires a square matrix")
    scale = Fraction(1)
    int_rows = []
    for row in rows:
        den = 1
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
        scale *= den
        int_rows.append([int(v * den) for v in row])
    m = [row[:] for row in int_rows]
    prev = 1
    sign = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), -1)
        if pr < 0:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        piv = m[c][c]
        for i in range(c + 1, n):
            f = m[i][c]
            mi, mc = m[i], m[c]
            for j in range(n):
                mi[j] = (piv * mi[j] - f * mc[j]) // prev
        prev = piv
    return Fraction(sign * m[n - 1][n - 1]) / scale


# ---------------------------------------------------------------------------
# span solving
# ---------------------------------------------------------------------------


class SpanSolver:
    """Factor a row set once, then answer many is-in-span queries exactly.

    Keeps the reduced row-echelon form of the rows together with the exact
    row-operation transform, so each query is one forward substitution.
    """

    def __init__(self, rows: MatrixLike) -> None:
        R = _as_fraction_rows(rows)
        if not R:
            raise InvalidInputError("span of an empty row set is undefined here")
        self._k = len(R)
        self._c = len(R[0])
        E = [
            [Fraction(int(i == j)) for j in range(self._k)]
            for i in range(self._k)
        ]
        piv_cols: List[int] = []
        r = 0
        for c in range(self._c):
            pr = next((i for i in range(r, self._k) if R[i][c] != 0), -1)
            if pr < 0:
                continue
            R[r], R[pr] = R[pr], R[r]
            E[r], E[pr] = E[pr], E[r]
            inv = 1 / R[r][c]
            R[r] = [v * inv for v in R[r]]
            E[r] = [v * inv for v in E[r]]
            for i in range(self._k):
                if i != r and R[i][c] != 0:
                    f = R[i][c]
                    R[i] = [a - f * b for a, b in zip(R[i], R[r])]
                    E[i] = [a - f * b for a, b in zip(E[i], E[r])]
            piv_cols.append(c)
            r += 1
            if r == self._k:
                break
        self._rref = R
        self._transform = E
        self._piv_cols = piv_cols

    @property
    def rank(self) -> int:
        return len(self._piv_cols)

    def solve(self, target: Sequence[RationalLike]) -> Optional[List[Fraction]]:
        """Coefficients a with a . rows = target, or None if not in the span."""
        t = [to_fraction(v) for v in target]
        if len(t) != self._c:
            raise DimensionMismatchError(
                f"target length {len(t)} != row length {self._c}"
            )
        coeffs = [Fraction(0)] * self._k
        for i, c in enumerate(self._piv_cols):
            f = t[c]
            if f == 0:
                continue
            coeffs[i] = f
            t = [a - f * b for a, b in zip(t, self._rref[i])]
        if any(v != 0 for v in t):
            return None
        out = [Fraction(0)] * self._k
        for i, ci in enumerate(coeffs):
            if ci == 0:
                continue
            Ei = self._transform[i]
            for j in range(self._k):
                out[j] += ci * Ei[j]
        return out

    def canonical_span(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Canonical form of the row space: nonzero RREF rows."""
        return tuple(
            tuple(row) for row in self._rref if any(v != 0 for v in row)
        )


def solve_in_span(
    basis_rows: MatrixLike, target: Sequence[RationalLike]
) -> Optional[List[Fraction]]:
    """Exact coefficients expressing target over the rows, or None."""
    return SpanSolver(basis_rows).solve(target)


# ---------------------------------------------------------------------------
# strict feasibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of a strict feasibility question, with exact evidence."""

    status: str
    witness: Optional[Tuple[Fraction, ...]] = None
    certificate: Optional[Tuple[Fraction, ...]] = None
    margin: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def _verify_int_solution(
    W: Sequence[Sequence[int]],
    feasible: bool,
    a_num: Sequence[int],
    den: int,
    lam: Sequence[int],
) -> bool:
    """Exact check of a margin-LP answer against integer rows W."""
    if feasible:
        if den <= 0:
            return False
        for row in W:
            dot = 0
            for wij, aj in zip(row, a_num):
                if wij:
                    dot += wij * aj
            if dot <= 0:
                return False
        return True
    if all(l == 0 for l in lam) or any(l < 0 for l in lam):
        return False
    m = len(W[0]) if W else 0
    for j in range(m):
        s = 0
        for li, row in zip(lam, W):
            if li:
                s += li * row[j]
        if s != 0:
            return False
    return True


def margin_lp_int_rows(
    W: Sequence[Sequence[int]],
    ws: Optional[kernels.MarginLPWorkspace] = None,
    force_exact: bool = False,
) -> Tuple[bool, Optional[List[int]], int, Optional[List[int]]]:
    """Strict feasibility of W a > 0 for integer rows, all-integer answers.

    Returns (feasible, witness_numerators, denominator, certificate).  The
    witness is witness_numerators/denominator; the certificate is an integer
    nonnegative vector with certificate^T W = 0.  Fast int64 path first when
    available, always verified exactly; falls back to the big-integer solver.
    force_exact skips the fast path (worth it for tiny one-shot problems,
    where JIT warm-up would dominate).
    """
    p = len(W)
    if p == 0:
        return True, [], 1, None
    m = len(W[0])
    use_fast = (
        not force_exact
        and kernels.backend() == "numba"
        and all(abs(v) < kernels.GUARD for row in W for v in row)
    )
    if use_fast:
        status, a_num, lam, den = kernels.margin_lp_i64(
            np.array(W, dtype=np.int64), ws
        )
        if status >= 0:
            feasible = status == 1
            a_list = [int(v) for v in a_num]
            lam_list = [int(v) for v in lam]
            if _verify_int_solution(W, feasible, a_list, den, lam_list):
                if feasible:
                    return True, a_list, den, None
                return False, None, den, lam_list
            # fall through to the exact solver on any verification failure

    eps, wit, cert = margin_lp_exact(W)
    if eps > 0:
        assert wit is not None
        den = 1
        for v in wit:
            den = den * v.denominator // math.gcd(den, v.denominator)
        a_list = [int(v * den) for v in wit]
        if not _verify_int_solution(W, True, a_list, den, []):
            raise VerificationError("exact margin LP produced a bad witness")
        return True, a_list, den, None
    assert cert is not None
    den = 1
    for v in cert:
        den = den * v.denominator // math.gcd(den, v.denominator)
    lam_list = [int(v * den) for v in cert]
    if not _verify_int_solution(W, False, [], 1, lam_list):
        raise VerificationError("exact margin LP produced a bad certificate")
    return False, None, 1, lam_list


def _normalize_sign(sign) -> int:
    if sign in ("+", 1, +1):
        return 1
    if sign in ("-", -1):
        return -1
    raise InvalidInputError(f"required sign must be '+' or '-', got {sign!r}")


def strict_feasible(
    constraints: Sequence[Tuple[Sequence[RationalLike], object]],
) -> FeasibilityResult:
    """Decide existence of a with sign(<a, normal_i>) = sign_i, all strict.

    Exact margin LP: maximize eps s.t. sigma_i <a, normal_i> >= eps and
    |a_j| <= 1; feasible iff the optimum is positive.  The reported margin is
    min_i sigma_i <a*, normal_i> at the returned witness.
    """
    if not constraints:
        raise InvalidInputError("need at least one constraint")
    normals = [[to_fraction(v) for v in nrm] for nrm, _ in constraints]
    signs = [_normalize_sign(s) for _, s in constraints]
    m = len(normals[0])
    for nrm in normals:
        if len(nrm) != m:
            raise DimensionMismatchError("constraint normals differ in length")
        if all(v == 0 for v in nrm):
            raise InvalidInputError("zero normal vector")
    signed = [
        [s * v for v in nrm] for s, nrm in zip(signs, normals)
    ]
    W, scales = _integerize_rows_scaled(signed)
    feasible, a_num, den, lam = margin_lp_int_rows(W)
    if feasible:
        assert a_num is not None
        witness = tuple(Fraction(v, den) for v in a_num)
        margin = min(
            s * sum(nv * wv for nv, wv in zip(nrm, witness))
            for s, nrm in zip(signs, normals)
        )
        return FeasibilityResult(FEASIBLE, witness=witness, margin=margin)
    assert lam is not None
    # lam certifies the row-scaled system; fold the scales back in so the
    # certificate combines the caller's own constraints
    return FeasibilityResult(
        INFEASIBLE,
        certificate=tuple(Fraction(l * d) for l, d in zip(lam, scales)),
        margin=Fraction(0),
    )


def strict_feasible_affine(
    constraints: Sequence[Tuple[Sequence[RationalLike], RationalLike, object]],
) -> FeasibilityResult:
    """Strict feasibility of sign(<x, normal_i> + offset_i) = sign_i.

    Homogenizes: append a coordinate t with constraint t > 0 and decide the
    homogeneous system sigma_i (<a, n_i> + c_i t) > 0; a witness maps back as
    x = a / t.  An infeasibility certificate is a nonnegative lambda (over
    the input constraints) with sum lambda_i sigma_i n_i = 0 and
    sum lambda_i sigma_i c_i <= 0, which contradicts the strict system.
    """
    if not constraints:
        raise InvalidInputError("need at least one constraint")
    normals = [[to_fraction(v) for v in nrm] for nrm, _, _ in constraints]
    offsets = [to_fraction(c) for _, c, _ in constraints]
    signs = [_normalize_sign(s) for _, _, s in constraints]
    m = len(normals[0])
    for nrm in normals:
        if len(nrm) != m:
            raise DimensionMismatchError("constraint normals differ in length")
        if all(v == 0 for v in nrm):
            raise InvalidInputError("zero normal vector")
    rows = [
        [s * v for v in nrm] + [s * c]
        for s, nrm, c in zip(signs, normals, offsets)
    ]
    rows.append([Fraction(0)] * m + [Fraction(1)])  # t > 0
    W, scales = _integerize_rows_scaled(rows)
    feasible, a_num, den, lam = margin_lp_int_rows(W)
    if feasible:
        assert a_num is not None
        t = Fraction(a_num[m], den)
        witness = tuple(Fraction(v, den) / t for v in a_num[:m])
        margin = min(
            s * (sum(nv * wv for nv, wv in zip(nrm, witness)) + c)
            for s, nrm, c in zip(signs, normals, offsets)
        )
        if margin <= 0:
            raise VerificationError("affine witness failed strictness check")
        return FeasibilityResult(FEASIBLE, witness=witness, margin=margin)
    assert lam is not None
    cert = tuple(Fraction(l * d) for l, d in zip(lam[:-1], scales[:-1]))
    comb_offset = sum(l * s * c for l, s, c in zip(cert, signs, offsets))
    if (
        any(v < 0 for v in cert)
        or all(v == 0 for v in cert)
        or comb_offset > 0
        or any(
            sum(l * s * nrm[j] for l, s, nrm in zip(cert, signs, normals)) != 0
            for j in range(m)
        )
    ):
        raise VerificationError("affine infeasibility certificate failed")
    return FeasibilityResult(INFEASIBLE, certificate=cert, margin=Fraction(0))
