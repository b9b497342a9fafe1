"""Exact strict linear feasibility via a fraction-free bounded-variable simplex.

Decides whether the strict homogeneous system  W a > 0  (W an integer p x m
matrix, componentwise strict) has a solution, by maximizing a margin:

    maximize eps   subject to   W a >= eps * 1,  a in [-1,1]^m,  eps in [0,1].

The system is strictly feasible iff the optimum eps* is positive: a strict
solution scales into the box, and then eps = min_i <w_i, a> > 0.  Writing
a = ap - am with ap, am in [0,1] puts every lower bound at 0, which is what
makes the infeasibility certificate below come out exactly.

The tableau stays fraction-free: integer entries plus one positive common
denominator `delta` (integer pivoting; every pivot divides exactly by the
previous delta, so entries are minors of the original integer data and never
grow into true rationals).  Entering/leaving choices follow Bland's
lowest-index rule, so the run is deterministic and cannot cycle.  Variables
at their upper bound are represented by complementing the column (x -> u-x),
keeping every nonbasic variable at value 0.

At eps* = 0, strong duality for the box LP forces the reduced cost of every
finite-bound variable to vanish (the optimal value equals the sum of
u_k * max(0, d_k) over bounded variables, all terms nonnegative).  With the
split variables this means lambda_i := -d(slack_i) satisfies

    lambda >= 0,   sum_i lambda_i * w_i = 0,   sum_i lambda_i >= 1,

an exact Gordan-style certificate of strict infeasibility.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

MAX_PIVOTS = 200_000


class SimplexInternalError(AssertionError):
    """The tableau violated an invariant; indicates a bug, not bad input."""


def margin_lp_exact(
    W: Sequence[Sequence[int]],
) -> Tuple[Fraction, Optional[List[Fraction]], Optional[List[Fraction]]]:
    """Solve the margin LP for integer rows W.

    Returns (eps_opt, witness, certificate): witness (length m, entries in
    [-1,1]) whenever eps_opt > 0, certificate (length p, nonnegative, not all
    zero, with certificate^T W = 0) whenever eps_opt == 0.
    """
    p = len(W)
    m = len(W[0]) if p else 0
    if p == 0:
        return Fraction(1), [Fraction(0)] * m, None

    nvars = 2 * m + 1 + p
    EPS = 2 * m
    S0 = 2 * m + 1
    RHS = nvars
    ncols = nvars + 1

    # Equality rows written so the slack basis is +I:
    #   -W ap + W am + eps + s_i = 0
    T: List[List[int]] = []
    for i in range(p):
        row = [0] * ncols
        wi = W[i]
        for j in range(m):
            row[j] = -wi[j]
            row[m + j] = wi[j]
        row[EPS] = 1
        row[S0 + i] = 1
        T.append(row)
    obj = [0] * ncols
    obj[EPS] = 1  # reduced costs of the max problem; initially d = c
    T.append(obj)

    delta = 1
    has_ub = [True] * (2 * m + 1) + [False] * p  # ap, am, eps in [0,1]; slacks unbounded
    comp = [False] * nvars
    basis = list(range(S0, S0 + p))
    in_basis = [-1] * nvars
    for i, b in enumerate(basis):
        in_basis[b] = i

    def complement(k: int) -> None:
        # substitute x_k -> 1 - x_k (u_k = 1): negate the column, shift RHS
        for i in range(p + 1):
            Ti = T[i]
            Ti[k] = -Ti[k]
            Ti[RHS] += Ti[k]
        comp[k] = not comp[k]

    pivots = 0
    while True:
        # entering variable: Bland (lowest index with positive reduced cost)
        e = -1
        objrow = T[p]
        for k in range(nvars):
            if in_basis[k] < 0 and objrow[k] > 0:
                e = k
                break
        if e < 0:
            break  # optimal

        # ratio test: largest step t for the entering variable, Bland ties
        best_num = best_den = 0
        leave = -1
        if has_ub[e]:
            best_num, best_den, leave = 1, 1, e  # t <= u_e = 1
        for i in range(p):
            a_ie = T[i][e]
            if a_ie > 0:
                num, den = T[i][RHS], a_ie
            elif a_ie < 0 and has_ub[basis[i]]:
                num, den = delta - T[i][RHS], -a_ie
            else:
                continue
            if (
                leave < 0
                or num * best_den < best_num * den
                or (num * best_den == best_num * den and basis[i] < leave)
            ):
                best_num, best_den, leave = num, den, basis[i]
        if leave < 0:
            raise SimplexInternalError("unbounded margin LP; eps is capped at 1")

        if leave == e:
            complement(e)  # bound flip, no basis change
            continue

        r = in_basis[leave]
        piv = T[r][e]
        leaves_at_upper = piv < 0
        Tr = T[r]
        for i in range(p + 1):
            if i == r:
                continue
            Ti = T[i]
            f = Ti[e]
            for j in range(ncols):
                q, rem = divmod(piv * Ti[j] - f * Tr[j], delta)
                if rem:
                    raise SimplexInternalError("inexact fraction-free division")
                Ti[j] = q
        delta = piv
        if delta < 0:
            delta = -delta
            for i in range(p + 1):
                T[i] = [-v for v in T[i]]
        basis[r] = e
        in_basis[e] = r
        in_basis[leave] = -1
        if leaves_at_upper:
            complement(leave)

        for i in range(p):
            if T[i][RHS] < 0 or (has_ub[basis[i]] and T[i][RHS] > delta):
                raise SimplexInternalError("basic value escaped its bounds")
        pivots += 1
        if pivots > MAX_PIVOTS:
            raise SimplexInternalError("pivot limit exceeded; Bland should terminate")

    def value(k: int) -> Fraction:
        row = in_basis[k]
        v = Fraction(T[row][RHS], delta) if row >= 0 else Fraction(0)
        return 1 - v if comp[k] else v

    eps = value(EPS)
    if eps > 0:
        witness = [value(j) - value(m + j) for j in range(m)]
        return eps, witness, None
    certificate = [Fraction(-T[p][S0 + i], delta) for i in range(p)]
    return eps, None, certificate
