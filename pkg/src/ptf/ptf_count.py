"""Exact counting of Boolean polynomial threshold functions T(n, d).

Two independent routes:

* ``count_ptf``: f = sgn(p(x)) with deg p <= d is determined by the sign
  vector of the coefficient point against the central hyperplane arrangement
  whose normals are the lifted cube points x^{<=d}.  T(n,d) is the exact
  region count of that arrangement in dimension binom(n, <=d).

* ``oracle_count_ptf``: enumerate all 2^(2^n) Boolean functions and decide
  each one directly — is there a coefficient vector a with
  f(x) * <a, x^{<=d}> > 0 for every cube point x — by the exact margin LP.

The two must agree wherever both run; that equivalence is one of the main
correctness checks of the package.  Every oracle answer (witness or
infeasibility certificate) is re-verified in exact integer arithmetic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import kernels
from .arrangements import Arrangement, count_regions
from .cube_lift import cube_lift_matrix
from .errors import InvalidInputError, ResourceLimitError, VerificationError
from .linalg_exact import margin_lp_int_rows

REGION_ENUMERATION = "region-enumeration"
FUNCTION_ORACLE = "function-oracle"

# feasible envelope for exact region enumeration, by degree
_ENVELOPE_MAX_N = {1: 5, 2: 4, 3: 3}


@dataclass(frozen=True)
class PTFCountResult:
    n: int
    d: int
    count: int
    method: str
    elapsed: float

    def __post_init__(self) -> None:
        if self.count % 2 != 0:
            raise VerificationError(
                "PTF counts are even (negating the polynomial pairs f with -f)"
            )
        if self.count > 2 ** (2**self.n):
            raise VerificationError("count exceeds the number of Boolean functions")


def _check_nd(n: int, d: int) -> None:
    if n < 1 or d < 1:
        raise InvalidInputError(f"need n >= 1 and d >= 1, got n={n}, d={d}")


def count_ptf(n: int, d: int, threads: int = 1) -> PTFCountResult:
    """T(n,d) by exact region enumeration of the lifted-cube arrangement."""
    _check_nd(n, d)
    max_n = _ENVELOPE_MAX_N.get(d)
    if max_n is None or n > max_n:
        raise ResourceLimitError(
            f"count_ptf envelope is (n<=5, d=1), (n<=4, d<=2), (n<=3, d<=3); "
            f"got n={n}, d={d}"
        )
    t0 = time.perf_counter()
    d_eff = min(d, n)  # multilinear monomials cannot exceed degree n
    L = cube_lift_matrix(n, d_eff)
    A = Arrangement(
        L.shape[1], [(row.tolist(), 0) for row in L.rows]
    )
    # tiny instances skip the JIT path: compile time would dwarf the count
    force_exact = L.shape[0] <= 8
    report = count_regions(A, threads=threads, force_exact=force_exact)
    return PTFCountResult(
        n, d, report.region_count, REGION_ENUMERATION,
        time.perf_counter() - t0,
    )


def oracle_count_ptf(n: int, d: int) -> PTFCountResult:
    """T(n,d) by brute-force enumeration of all 2^(2^n) Boolean functions."""
    _check_nd(n, d)
    if n > 4:
        raise ResourceLimitError(
            f"function oracle enumerates 2^(2^n) functions; n={n} > 4"
        )
    t0 = time.perf_counter()
    d_eff = min(d, n)
    L = cube_lift_matrix(n, d_eff).rows.astype(np.int64)
    P, M = L.shape
    G = 1 << P

    if kernels.backend() == "numba":
        count, status, wit_num, wit_den, cert_num, _cert_den = (
            kernels.sign_scan_i64(L)
        )
        count = _verify_scan(L, count, status, wit_num, wit_den, cert_num)
    else:
        Lint = [[int(v) for v in row] for row in L]
        count = 0
        ws = kernels.MarginLPWorkspace(P, M)
        for g in range(G):
            W = [
                [-v for v in Lint[i]] if (g >> i) & 1 else Lint[i]
                for i in range(P)
            ]
            feas, _, _, _ = margin_lp_int_rows(W, ws)
            count += feas

    return PTFCountResult(
        n, d, count, FUNCTION_ORACLE, time.perf_counter() - t0
    )


def _verify_scan(
    L: np.ndarray,
    count: int,
    status: np.ndarray,
    wit_num: np.ndarray,
    wit_den: np.ndarray,
    cert_num: np.ndarray,
) -> int:
    """Exactly verify every scan answer; settle failures on the exact path.

    All arithmetic below stays far inside int64: witness numerators and
    certificate entries are < 2^31 by the kernel guard, lift entries are +-1,
    and row lengths are <= 16, so no product or sum can wrap.
    """
    P, M = L.shape
    G = 1 << P
    g_idx = np.arange(G, dtype=np.uint64)
    signs = 1 - 2 * (
        (g_idx[:, None] >> np.arange(P, dtype=np.uint64)[None, :]) & np.uint64(1)
    ).astype(np.int64)

    feas_mask = status == 1
    infeas_mask = status == 0
    ok = np.zeros(G, dtype=bool)

    # witnesses: sign_i * <L_i, a> > 0 for all i, denominator positive
    B = wit_num @ L.T  # (G, P), exact in int64
    ok[feas_mask] = np.all((signs * B)[feas_mask] > 0, axis=1) & (
        wit_den[feas_mask] > 0
    )
    # certificates: lam >= 0, not all zero, sum_i lam_i sign_i L_i = 0
    C = (cert_num * signs) @ L  # (G, M)
    ok[infeas_mask] = (
        np.all(cert_num[infeas_mask] >= 0, axis=1)
        & np.any(cert_num[infeas_mask] > 0, axis=1)
        & np.all(C[infeas_mask] == 0, axis=1)
    )

    redo = np.flatnonzero(~ok)
    if redo.size:
        Lint = [[int(v) for v in row] for row in L]
        for g in redo.tolist():
            W = [
                [-v for v in Lint[i]] if (g >> i) & 1 else Lint[i]
                for i in range(P)
            ]
            feas, _, _, _ = margin_lp_int_rows(W, force_exact=True)
            was_feas = bool(feas_mask[g])
            if status[g] != -1 and feas != was_feas:
                # the kernel asserted the opposite of the exact answer
                raise VerificationError(
                    f"sign scan verification failed for assignment {g}"
                )
            count += feas - (1 if was_feas else 0)
    return int(count)


@dataclass(frozen=True)
class BoundsCheck:
    """Exact comparison of a computed T(n,d) against the closed-form bounds."""

    n: int
    d: int
    count: int
    sharp_upper: int  # 2 * binom(2^n - 1, <= m-1), m = binom(n, <=d)
    capacity_upper_log2: int  # n * binom(n, <=d), compared as 2^(.)
    saks_lower_log2: int  # binom(n, d+1), compared as 2^(.)
    sharp_holds: bool
    capacity_holds: bool
    saks_holds: bool
    sharp_slack: int
    capacity_slack: int
    saks_slack: int

    @property
    def all_hold(self) -> bool:
        return self.sharp_holds and self.capacity_holds and self.saks_holds


def _binom_le(p: int, m: int) -> int:
    return sum(math.comb(p, i) for i in range(0, m + 1))


def verify_upper_bounds(result: PTFCountResult) -> BoundsCheck:
    """Check count <= 2*binom(2^n-1, <=m-1) and count <= 2^(n*binom(n,<=d)),
    plus the Saks floor 2^binom(n,d+1) <= count, all in exact integers."""
    n, d = result.n, result.d
    d_eff = min(d, n)
    m = _binom_le(n, d_eff)
    sharp = 2 * _binom_le(2**n - 1, m - 1)
    cap_log2 = n * m
    saks_log2 = math.comb(n, d + 1)
    count = result.count
    return BoundsCheck(
        n=n,
        d=d,
        count=count,
        sharp_upper=sharp,
        capacity_upper_log2=cap_log2,
        saks_lower_log2=saks_log2,
        sharp_holds=count <= sharp,
        capacity_holds=count <= 2**cap_log2,
        saks_holds=2**saks_log2 <= count,
        sharp_slack=sharp - count,
        capacity_slack=2**cap_log2 - count,
        saks_slack=count - 2**saks_log2,
    )
