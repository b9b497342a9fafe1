"""Numeric kernels with selectable backends.

Three tiers, selected by the PTF_BACKEND environment variable:

* ``numba``  - the int64 kernels below JIT-compiled (fast path),
* ``numpy``  - vectorized numpy where the operation vectorizes naturally,
               otherwise the same kernel source interpreted,
* ``python`` - pure-Python big-integer implementations (exact, no overflow).

``auto`` (the default) means numba when importable, else numpy.  Every
int64 kernel is overflow-guarded: whenever any tableau/matrix entry reaches
2**31 in absolute value the kernel bails out with a sentinel status and the
caller reruns the computation on the exact big-integer path.  Results that
assert something (feasibility witnesses, infeasibility certificates, ranks
used in decisions) are always re-verified in exact integer arithmetic by the
callers regardless of backend.

The guard bound 2**31 makes single pivot updates safe in int64: entries stay
below 2**31, so the update numerator |piv*a - f*b| <= 2*(2**31-1)**2 < 2**63
never wraps before the exact division shrinks it.
"""

from __future__ import annotations

import os
from typing import Tuple

import numpy as np

try:  # pragma: no cover - exercised indirectly via backend selection
    import numba
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_VALID_BACKENDS = ("auto", "numba", "numpy", "python")
GUARD = 1 << 31  # entries must stay strictly below this for int64 safety


def backend() -> str:
    """Resolve the active backend from PTF_BACKEND (default: auto)."""
    choice = os.environ.get("PTF_BACKEND", "auto").strip().lower() or "auto"
    if choice not in _VALID_BACKENDS:
        raise ValueError(
            f"PTF_BACKEND must be one of {_VALID_BACKENDS}, got {choice!r}"
        )
    if choice == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numba" and not HAS_NUMBA:
        raise RuntimeError("PTF_BACKEND=numba but numba is not importable")
    return choice


# ---------------------------------------------------------------------------
# lift rows: monomial evaluation over the Boolean cube
# ---------------------------------------------------------------------------


def _lift_rows_kernel(bits, masks, out):
    """out[r, c] = parity sign of popcount(bits[r] & masks[c]).

    A cube point is a bitmask (bit set = coordinate -1), a monomial is the
    bitmask of its index set; the monomial value is (-1)^popcount(and).
    """
    for r in range(bits.shape[0]):
        b = bits[r]
        for c in range(masks.shape[0]):
            v = b & masks[c]
            v ^= v >> np.uint64(32)
            v ^= v >> np.uint64(16)
            v ^= v >> np.uint64(8)
            v ^= v >> np.uint64(4)
            v ^= v >> np.uint64(2)
            v ^= v >> np.uint64(1)
            if v & np.uint64(1):
                out[r, c] = -1
            else:
                out[r, c] = 1


if HAS_NUMBA:
    _lift_rows_numba = njit(cache=True, nogil=True)(_lift_rows_kernel)


def lift_rows(bits: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """Evaluate monomial columns on cube-point rows; entries are +-1 (int8)."""
    bits = np.ascontiguousarray(bits, dtype=np.uint64)
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    out = np.empty((bits.shape[0], masks.shape[0]), dtype=np.int8)
    b = backend()
    if b == "numba":
        _lift_rows_numba(bits, masks, out)
    elif b == "numpy":
        parity = np.bitwise_count(bits[:, None] & masks[None, :]).astype(np.int8) & 1
        np.subtract(1, 2 * parity, out=out)
    else:
        ib = [int(x) for x in bits]
        im = [int(x) for x in masks]
        for r, bv in enumerate(ib):
            row = out[r]
            for c, mv in enumerate(im):
                row[c] = -1 if (bv & mv).bit_count() & 1 else 1
    return out


# ---------------------------------------------------------------------------
# rank of an integer matrix: fraction-free (Bareiss) elimination
# ---------------------------------------------------------------------------


def _bareiss_rank_kernel(M):
    """Rank of int64 matrix M (destroyed), or -1 if entries reach the guard.

    Fraction-free elimination: after each step entries are exact minors of
    the input, and each update divides exactly by the previous pivot.
    """
    rows, cols = M.shape
    rank = 0
    prev = np.int64(1)
    for c in range(cols):
        if rank == rows:
            break
        pr = -1
        for i in range(rank, rows):
            if M[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != rank:
            for j in range(cols):
                tmp = M[rank, j]
                M[rank, j] = M[pr, j]
                M[pr, j] = tmp
        piv = M[rank, c]
        for i in range(rank + 1, rows):
            f = M[i, c]
            for j in range(cols):
                M[i, j] = (piv * M[i, j] - f * M[rank, j]) // prev
            M[i, c] = 0
        prev = piv
        rank += 1
        hi = np.int64(0)
        for i in range(rank, rows):
            for j in range(cols):
                v = M[i, j]
                if v < 0:
                    v = -v
                if v > hi:
                    hi = v
        if hi >= GUARD:
            return -1
    return rank


if HAS_NUMBA:
    _bareiss_rank_numba = njit(cache=True, nogil=True)(_bareiss_rank_kernel)


def bareiss_rank_i64(M: np.ndarray) -> int:
    """Rank of an integer matrix via int64 Bareiss; -1 = overflow, retry exact."""
    M = np.array(M, dtype=np.int64, copy=True, order="C")
    if M.size == 0:
        return 0
    if np.abs(M).max() >= GUARD:
        return -1
    if backend() == "numba":
        return int(_bareiss_rank_numba(M))
    return int(_bareiss_rank_kernel(M))


# ---------------------------------------------------------------------------
# signed-sum hit counting (Littlewood-Offord experiments)
# ---------------------------------------------------------------------------


def _lo_hits_kernel(coeffs, target):
    """Count sign vectors s in {-1,1}^n with <s, coeffs> == target.

    Gray-code walk over all 2^n sign vectors, flipping one sign per step.
    """
    n = coeffs.shape[0]
    total = np.int64(0)
    for j in range(n):
        total += coeffs[j]
    signs = np.ones(n, dtype=np.int64)
    hits = np.int64(0)
    if total == target:
        hits += 1
    for k in range(1, 1 << n):
        kk = k
        j = 0
        while kk & 1 == 0:
            kk >>= 1
            j += 1
        if signs[j] == 1:
            total -= 2 * coeffs[j]
            signs[j] = -1
        else:
            total += 2 * coeffs[j]
            signs[j] = 1
        if total == target:
            hits += 1
    return hits


if HAS_NUMBA:
    _lo_hits_numba = njit(cache=True, nogil=True)(_lo_hits_kernel)


def lo_hits(coeffs: np.ndarray, target: int) -> int:
    """Exact count of sign vectors hitting the target sum.

    Caller must ensure 2 * sum|coeffs| and |target| fit comfortably in int64
    for the fast backends; the python backend uses big integers.
    """
    b = backend()
    if b == "python":
        return _lo_hits_python([int(c) for c in coeffs], int(target))
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    if b == "numba":
        return int(_lo_hits_numba(coeffs, np.int64(target)))
    if b == "numpy":
        n = coeffs.shape[0]
        hits = 0
        chunk = 1 << min(n, 16)
        base = np.arange(chunk, dtype=np.uint64)
        for start in range(0, 1 << n, chunk):
            masks = base + np.uint64(start)
            signs = 1 - 2 * (
                (masks[:, None] >> np.arange(n, dtype=np.uint64)[None, :])
                & np.uint64(1)
            ).astype(np.int64)
            hits += int(np.count_nonzero(signs @ coeffs == target))
        return hits
    return int(_lo_hits_kernel(coeffs, np.int64(target)))


def _lo_hits_python(coeffs, target):
    n = len(coeffs)
    total = sum(coeffs)
    signs = [1] * n
    hits = 1 if total == target else 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        if signs[j] == 1:
            total -= 2 * coeffs[j]
            signs[j] = -1
        else:
            total += 2 * coeffs[j]
            signs[j] = 1
        if total == target:
            hits += 1
    return hits


# ---------------------------------------------------------------------------
# margin LP: int64 fraction-free bounded-variable simplex
# ---------------------------------------------------------------------------
# Mirrors _simplex_exact.margin_lp_exact line for line; see that module for
# the algebra.  Status codes: 1 feasible, 0 infeasible, -1 bail out (overflow
# or pivot cap) -> caller reruns on the exact path.

_SX_FEASIBLE = 1
_SX_INFEASIBLE = 0
_SX_BAILOUT = -1


def _margin_lp_kernel(W, T, basis, in_basis, comp, a_num, lam_num, den_out):
    p = W.shape[0]
    m = W.shape[1]
    nvars = 2 * m + 1 + p
    EPS = 2 * m
    S0 = 2 * m + 1
    RHS = nvars

    # build tableau: -W ap + W am + eps + s = 0; objective row = eps
    for i in range(p + 1):
        for j in range(RHS + 1):
            T[i, j] = 0
    for i in range(p):
        for j in range(m):
            T[i, j] = -W[i, j]
            T[i, m + j] = W[i, j]
        T[i, EPS] = 1
        T[i, S0 + i] = 1
    T[p, EPS] = 1
    delta = np.int64(1)
    for k in range(nvars):
        comp[k] = 0
        in_basis[k] = -1
    for i in range(p):
        basis[i] = S0 + i
        in_basis[S0 + i] = i

    pivots = 0
    while True:
        e = -1
        for k in range(nvars):
            if in_basis[k] < 0 and T[p, k] > 0:
                e = k
                break
        if e < 0:
            break

        best_num = np.int64(0)
        best_den = np.int64(0)
        leave = -1
        if e < S0:  # ap, am, eps have upper bound 1
            best_num, best_den, leave = np.int64(1), np.int64(1), e
        for i in range(p):
            a_ie = T[i, e]
            if a_ie > 0:
                num, d = T[i, RHS], a_ie
            elif a_ie < 0 and basis[i] < S0:
                num, d = delta - T[i, RHS], -a_ie
            else:
                continue
            if (
                leave < 0
                or num * best_den < best_num * d
                or (num * best_den == best_num * d and basis[i] < leave)
            ):
                best_num, best_den, leave = num, d, basis[i]
        if leave < 0:
            return _SX_BAILOUT  # unbounded: impossible, treat as bail out

        if leave == e:
            for i in range(p + 1):
                T[i, e] = -T[i, e]
                T[i, RHS] += T[i, e]
            comp[e] = 1 - comp[e]
            continue

        r = in_basis[leave]
        piv = T[r, e]
        leaves_at_upper = piv < 0
        for i in range(p + 1):
            if i == r:
                continue
            f = T[i, e]
            for j in range(RHS + 1):
                T[i, j] = (piv * T[i, j] - f * T[r, j]) // delta
        delta = piv
        if delta < 0:
            delta = -delta
            for i in range(p + 1):
                for j in range(RHS + 1):
                    T[i, j] = -T[i, j]
        basis[r] = e
        in_basis[e] = r
        in_basis[leave] = -1
        if leaves_at_upper:
            for i in range(p + 1):
                T[i, leave] = -T[i, leave]
                T[i, RHS] += T[i, leave]
            comp[leave] = 1 - comp[leave]

        hi = np.int64(0)
        for i in range(p + 1):
            for j in range(RHS + 1):
                v = T[i, j]
                if v < 0:
                    v = -v
                if v > hi:
                    hi = v
        if hi >= GUARD or delta >= GUARD:
            return _SX_BAILOUT
        pivots += 1
        if pivots > 100_000:
            return _SX_BAILOUT

    # eps value: numerator over delta
    row = in_basis[EPS]
    eps_num = T[row, RHS] if row >= 0 else np.int64(0)
    if comp[EPS]:
        eps_num = delta - eps_num
    den_out[0] = delta
    if eps_num > 0:
        for j in range(m):
            rp = in_basis[j]
            vp = T[rp, RHS] if rp >= 0 else np.int64(0)
            if comp[j]:
                vp = delta - vp
            rm = in_basis[m + j]
            vm = T[rm, RHS] if rm >= 0 else np.int64(0)
            if comp[m + j]:
                vm = delta - vm
            a_num[j] = vp - vm
        return _SX_FEASIBLE
    for i in range(p):
        lam_num[i] = -T[p, S0 + i]
    return _SX_INFEASIBLE


if HAS_NUMBA:
    _margin_lp_numba = njit(cache=True, nogil=True)(_margin_lp_kernel)


class MarginLPWorkspace:
    """Preallocated buffers so repeated margin LPs do not churn memory."""

    def __init__(self, p_max: int, m: int) -> None:
        nvars = 2 * m + 1 + p_max
        self.p_max = p_max
        self.m = m
        self.T = np.zeros((p_max + 1, nvars + 1), dtype=np.int64)
        self.basis = np.zeros(p_max, dtype=np.int64)
        self.in_basis = np.zeros(nvars, dtype=np.int64)
        self.comp = np.zeros(nvars, dtype=np.uint8)
        self.a_num = np.zeros(m, dtype=np.int64)
        self.lam_num = np.zeros(p_max, dtype=np.int64)
        self.den = np.zeros(1, dtype=np.int64)


def margin_lp_i64(
    W: np.ndarray, ws: MarginLPWorkspace | None = None, use_numba: bool | None = None
) -> Tuple[int, np.ndarray, np.ndarray, int]:
    """Run the int64 margin LP.

    Returns (status, a_num, lam_num, den): status 1 feasible (witness
    a_num/den), 0 infeasible (certificate lam_num/den), -1 bail out.
    Slices of the workspace are returned; copy before the next call.
    """
    W = np.ascontiguousarray(W, dtype=np.int64)
    p, m = W.shape
    if ws is None or ws.p_max < p or ws.m != m:
        ws = MarginLPWorkspace(p, m)
    if use_numba is None:
        use_numba = backend() == "numba"
    fn = _margin_lp_numba if (use_numba and HAS_NUMBA) else _margin_lp_kernel
    if np.abs(W).max(initial=0) >= GUARD:
        return _SX_BAILOUT, ws.a_num[:m], ws.lam_num[:p], 1
    nvars = 2 * m + 1 + p
    status = fn(
        W,
        ws.T[: p + 1, : nvars + 1],
        ws.basis[:p],
        ws.in_basis[:nvars],
        ws.comp[:nvars],
        ws.a_num[:m],
        ws.lam_num[:p],
        ws.den,
    )
    return int(status), ws.a_num[:m], ws.lam_num[:p], int(ws.den[0])


# ---------------------------------------------------------------------------
# batch scan: margin LP over every sign assignment of a fixed lift matrix
# ---------------------------------------------------------------------------


def _make_sign_scan(margin_fn):
    def scan(L, T, basis, in_basis, comp, a_num, lam_num, den_out,
             W, status_out, wit_num, wit_den, cert_num, cert_den):
        P = L.shape[0]
        M = L.shape[1]
        count = np.int64(0)
        for g in range(status_out.shape[0]):
            for i in range(P):
                if (g >> i) & 1:
                    for j in range(M):
                        W[i, j] = -L[i, j]
                else:
                    for j in range(M):
                        W[i, j] = L[i, j]
            st = margin_fn(W, T, basis, in_basis, comp, a_num, lam_num,
                           den_out)
            status_out[g] = st
            if st == 1:
                count += 1
                for j in range(M):
                    wit_num[g, j] = a_num[j]
                wit_den[g] = den_out[0]
            elif st == 0:
                for i in range(P):
                    cert_num[g, i] = lam_num[i]
                cert_den[g] = den_out[0]
        return count

    return scan


_sign_scan_py = _make_sign_scan(_margin_lp_kernel)
if HAS_NUMBA:
    _sign_scan_numba = njit(cache=True, nogil=True)(
        _make_sign_scan(_margin_lp_numba)
    )


def sign_scan_i64(L: np.ndarray, use_numba: bool | None = None):
    """Margin LP for every one of the 2^P sign assignments of the P rows of L.

    Returns (count, status, wit_num, wit_den, cert_num, cert_den); status[g]
    is 1/0/-1 per margin_lp_i64, and g's bit i flips the sign of row i.
    Bailed-out assignments (-1) must be settled exactly by the caller.
    """
    L = np.ascontiguousarray(L, dtype=np.int64)
    P, M = L.shape
    if P > 24:
        raise ValueError("sign scan limited to 2^24 assignments")
    G = 1 << P
    nvars = 2 * M + 1 + P
    ws = MarginLPWorkspace(P, M)
    W = np.zeros((P, M), dtype=np.int64)
    status = np.zeros(G, dtype=np.int8)
    wit_num = np.zeros((G, M), dtype=np.int64)
    wit_den = np.ones(G, dtype=np.int64)
    cert_num = np.zeros((G, P), dtype=np.int64)
    cert_den = np.ones(G, dtype=np.int64)
    if use_numba is None:
        use_numba = backend() == "numba"
    fn = _sign_scan_numba if (use_numba and HAS_NUMBA) else _sign_scan_py
    count = fn(
        L,
        ws.T[: P + 1, : nvars + 1],
        ws.basis[:P],
        ws.in_basis[:nvars],
        ws.comp[:nvars],
        ws.a_num[:M],
        ws.lam_num[:P],
        ws.den,
        W,
        status,
        wit_num,
        wit_den,
        cert_num,
        cert_den,
    )
    return int(count), status, wit_num, wit_den, cert_num, cert_den
