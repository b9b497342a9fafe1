"""Randomized and exhaustive checks on lifted cube points: linear
independence of random lifts, span resilience (no foreign lifted point in
the span), sign-sum collision probabilities, and the good-subset fraction.

Exactness: every verdict that feeds a count or a certificate is decided in
exact integer/rational arithmetic.  Randomness only chooses *which* instances
to test; int64 fast paths are fraction-free and overflow-guarded, falling
back to big integers.  Monte Carlo runs are bit-reproducible from the master
seed: trial i draws from a generator seeded by (master_seed, spawn_key=(i,)),
so the worker count never changes the outcome.

Conventions worth knowing:

* The asymptotic failure probabilities of the independence/resilience
  theorems (2^-t shapes) kick in far beyond desk-scale n; here t is a
  reporting annotation (`theorem41_parameter_check`), never a tested claim.
* A span never contains the negation of a lifted point with coefficient
  chains of the allowed form: every lift has first coordinate +1, so the
  "-x" exclusion branch is vacuous and only the points themselves are
  excluded from the resilience scan.
* Rank and span tests run over the rationals.  A mod-2 shortcut valid for
  {0,1} vectors does not transfer to +-1 entries (they all collapse to 1
  mod 2); an optional GF(2) mode on the {0,1}-cube lift is provided for
  comparison with that classical setting.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .bounds import binom_sum
from .cube_lift import CubePoint, monomial_masks
from .errors import InvalidInputError, ResourceLimitError, VerificationError
from .linalg_exact import (
    BigRational,
    SpanSolver,
    _bareiss_rank_big,
    to_fraction,
)

MC_MAX_N = 24
EXACT_LO_MAX_N = 20
RESILIENCE_MAX_N = 16
EXHAUSTIVE_SUBSET_CAP = 10**6
EXHAUSTIVE_TUPLE_CAP = 10**6

_WILSON_Z = 1.96  # two-sided 95%


def littlewood_offord_P(n: int) -> BigRational:
    """P(n) = binom(n, floor(n/2)) / 2^n, the sharp sign-sum collision bound."""
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    return Fraction(math.comb(n, n // 2), 2**n)


def _wilson_interval(successes: int, trials: int) -> Tuple[float, float]:
    z = _WILSON_Z
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class ExperimentConfig:
    """Inputs of one randomized experiment; per-trial seeds are derived
    from master_seed by trial index, so results never depend on scheduling."""

    n: int
    d: int
    m: int
    trials: int
    master_seed: int

    def __post_init__(self):
        if not (1 <= self.n <= MC_MAX_N):
            raise InvalidInputError(f"need 1 <= n <= {MC_MAX_N}, got n={self.n}")
        if not (1 <= self.d <= self.n):
            raise InvalidInputError(f"need 1 <= d <= n, got d={self.d}")
        if self.m < 1:
            raise InvalidInputError(f"need m >= 1, got m={self.m}")
        if self.trials < 1:
            raise InvalidInputError(f"need trials >= 1, got {self.trials}")
        if not (0 <= self.master_seed < 2**64):
            raise InvalidInputError("master_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class MCReport:
    successes: int
    trials: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int
    elapsed: float
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if not (0 <= self.successes <= self.trials):
            raise VerificationError("successes outside [0, trials]")
        if not (0.0 <= self.ci_low <= self.ci_high <= 1.0):
            raise VerificationError("confidence interval outside [0, 1]")

    @property
    def ci(self) -> Tuple[float, float]:
        return (self.ci_low, self.ci_high)


@dataclass(frozen=True)
class ResilienceVerdict:
    """`good` when the span of the lifted points contains no other lifted
    cube point; otherwise `bad` with the offending point and the exact
    coefficients writing its lift over the input lifts."""

    status: str
    witness: Optional[CubePoint] = None
    coefficients: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self):
        if self.status not in ("good", "bad"):
            raise InvalidInputError(f"status must be good|bad, got {self.status!r}")
        if (self.status == "bad") != (self.witness is not None):
            raise InvalidInputError("bad verdicts carry a witness; good ones do not")

    @property
    def good(self) -> bool:
        return self.status == "good"


def _per_trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(trial,))
    return np.random.Generator(np.random.PCG64(ss))


# ---------------------------------------------------------------------------
# sign-sum collision probabilities
# ---------------------------------------------------------------------------


def _integerize_coeffs(
    coefficients: Sequence, target
) -> Tuple[List[int], int]:
    a = [to_fraction(c) for c in coefficients]
    if not a:
        raise InvalidInputError("need at least one coefficient")
    if any(c == 0 for c in a):
        raise InvalidInputError("coefficients must be nonzero")
    u = to_fraction(target)
    scale = math.lcm(u.denominator, *(c.denominator for c in a))
    return [int(c * scale) for c in a], int(u * scale)


def lo_probability_exact(coefficients: Sequence, target) -> BigRational:
    """Exact Pr[sum a_k xi_k = u] over independent uniform +-1 signs."""
    a, u = _integerize_coeffs(coefficients, target)
    n = len(a)
    if n > EXACT_LO_MAX_N:
        raise ResourceLimitError(
            f"exact enumeration supports n <= {EXACT_LO_MAX_N}, got {n}"
        )
    budget = 2 * (sum(abs(c) for c in a) + abs(u))
    if budget < 2**62 and kernels.backend() != "python":
        hits = kernels.lo_hits(np.array(a, dtype=np.int64), u)
    else:
        hits = kernels._lo_hits_python(a, u)
    return Fraction(hits, 2**n)


def lo_distribution(coefficients: Sequence) -> dict:
    """Exact distribution of sum a_k xi_k over uniform +-1 signs, as a
    map value -> probability (Fractions both ways)."""
    a = [to_fraction(c) for c in coefficients]
    if not a:
        raise InvalidInputError("need at least one coefficient")
    if any(c == 0 for c in a):
        raise InvalidInputError("coefficients must be nonzero")
    n = len(a)
    if n > EXACT_LO_MAX_N:
        raise ResourceLimitError(
            f"exact enumeration supports n <= {EXACT_LO_MAX_N}, got {n}"
        )
    counts = {Fraction(0): 1}
    for c in a:
        nxt: dict = {}
        for s, k in counts.items():
            for v in (s + c, s - c):
                nxt[v] = nxt.get(v, 0) + k
        counts = nxt
    total = 2**n
    return {v: Fraction(k, total) for v, k in counts.items()}


def lo_empirical(
    coefficients: Sequence, target, trials: int, seed: int
) -> MCReport:
    """Estimate Pr[sum a_k xi_k = u]; exact probability included for
    n <= 20 (full enumeration)."""
    a, u = _integerize_coeffs(coefficients, target)
    if trials < 1:
        raise InvalidInputError(f"need trials >= 1, got {trials}")
    n = len(a)
    t0 = time.perf_counter()
    exact = (
        lo_probability_exact(coefficients, target) if n <= EXACT_LO_MAX_N else None
    )
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    arr = np.array(a, dtype=np.int64)
    successes = 0
    chunk = 1 << 14
    done = 0
    while done < trials:
        take = min(chunk, trials - done)
        signs = 1 - 2 * rng.integers(0, 2, size=(take, n), dtype=np.int64)
        successes += int(np.count_nonzero(signs @ arr == u))
        done += take
    lo_ci, hi_ci = _wilson_interval(successes, trials)
    return MCReport(
        successes=successes,
        trials=trials,
        estimate=successes / trials,
        ci_low=lo_ci,
        ci_high=hi_ci,
        seed=seed,
        elapsed=time.perf_counter() - t0,
        exact=exact,
    )


# ---------------------------------------------------------------------------
# linear independence of random lifted points
# ---------------------------------------------------------------------------


def _rank_pm1(rows: np.ndarray) -> int:
    """Exact rank of a +-1 integer matrix (int64 fast path, bigint fallback)."""
    if kernels.backend() != "python":
        r = kernels.bareiss_rank_i64(rows.astype(np.int64))
        if r >= 0:
            return r
    return _bareiss_rank_big([[int(v) for v in row] for row in rows])


def _gf2_rank(rows: Sequence[int]) -> int:
    basis = {}
    rank = 0
    for v in rows:
        while v:
            h = v.bit_length() - 1
            if h in basis:
                v ^= basis[h]
            else:
                basis[h] = v
                rank += 1
                break
    return rank


def _gf2_lift_rows(masks: Sequence[int], mono: Sequence[int]) -> List[int]:
    """{0,1}-cube lift over GF(2): monomial bit set iff its index set lies
    inside the point's support."""
    out = []
    for mask in masks:
        row = 0
        for j, mv in enumerate(mono):
            if mask & mv == mv:
                row |= 1 << j
        out.append(row)
    return out


def mc_independence(
    config: ExperimentConfig, threads: int = 1, mode: str = "rational"
) -> MCReport:
    """Fraction of trials in which m independent uniform cube points have
    linearly independent degree-d lifts (exact rank test per trial).

    mode="rational" (default) lifts {-1,1}^n points and ranks over Q;
    mode="gf2" lifts {0,1}^n points and ranks over GF(2) for comparison.
    """
    if mode not in ("rational", "gf2"):
        raise InvalidInputError(f"mode must be rational|gf2, got {mode!r}")
    dim = binom_sum(config.n, config.d)
    if config.m > dim:
        raise InvalidInputError(
            f"m={config.m} > binom(n,<=d)={dim}: lifts are always dependent"
        )
    if threads < 1:
        raise InvalidInputError(f"need threads >= 1, got {threads}")
    mono = monomial_masks(config.n, config.d)
    mono_arr = np.array(mono, dtype=np.uint64)
    t0 = time.perf_counter()

    def one_trial(trial: int) -> bool:
        rng = _per_trial_rng(config.master_seed, trial)
        masks = rng.integers(0, 1 << config.n, size=config.m, dtype=np.uint64)
        if mode == "gf2":
            rows = _gf2_lift_rows([int(v) for v in masks], mono)
            return _gf2_rank(rows) == config.m
        rows = kernels.lift_rows(masks, mono_arr)
        return _rank_pm1(rows) == config.m

    indices = range(config.trials)
    if threads == 1:
        outcomes = [one_trial(i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one_trial, indices))
    successes = sum(outcomes)
    lo_ci, hi_ci = _wilson_interval(successes, config.trials)
    return MCReport(
        successes=successes,
        trials=config.trials,
        estimate=successes / config.trials,
        ci_low=lo_ci,
        ci_high=hi_ci,
        seed=config.master_seed,
        elapsed=time.perf_counter() - t0,
    )


def independence_probability_exhaustive(n: int, d: int, m: int) -> BigRational:
    """Exact Pr[m i.i.d. uniform cube points have independent lifts], by
    enumerating all (2^n)^m ordered samples."""
    if not (1 <= d <= n):
        raise InvalidInputError(f"need 1 <= d <= n, got n={n}, d={d}")
    dim = binom_sum(n, d)
    if m > dim:
        raise InvalidInputError(f"m={m} > binom(n,<=d)={dim}: probability is 0")
    total = (1 << n) ** m
    if total > EXHAUSTIVE_TUPLE_CAP:
        raise ResourceLimitError(
            f"(2^n)^m = {total} exceeds the exhaustive cap {EXHAUSTIVE_TUPLE_CAP}"
        )
    mono_arr = np.array(monomial_masks(n, d), dtype=np.uint64)
    all_lifts = kernels.lift_rows(
        np.arange(1 << n, dtype=np.uint64), mono_arr
    ).astype(np.int64)
    hits = 0
    idx = [0] * m
    for flat in range(total):
        v, rem = [], flat
        for _ in range(m):
            v.append(rem & ((1 << n) - 1))
            rem >>= n
        if _rank_pm1(all_lifts[v]) == m:
            hits += 1
    return Fraction(hits, total)


# ---------------------------------------------------------------------------
# resilience: does the span contain a foreign lifted cube point?
# ---------------------------------------------------------------------------


PointLike = Union[CubePoint, Sequence[int]]


def _normalize_points(points: Sequence[PointLike]) -> List[CubePoint]:
    if not points:
        raise InvalidInputError("need at least one point")
    pts = [
        p if isinstance(p, CubePoint) else CubePoint.from_coords(tuple(p))
        for p in points
    ]
    n = pts[0].n
    if any(p.n != n for p in pts):
        raise InvalidInputError("all points must share one dimension")
    if len({p.bits for p in pts}) != len(pts):
        raise InvalidInputError("points must be distinct")
    return pts


def resilience_check(points: Sequence[PointLike], d: int) -> ResilienceVerdict:
    """Scan every cube point u outside the input set (ascending mask order)
    and decide exactly whether its lift lies in the span of the input lifts.

    A rank pre-filter in guarded int64 arithmetic skips candidates whose
    lift provably increases the rank; candidates that survive get an exact
    rational solve, and any bad witness is re-verified by substitution.
    """
    pts = _normalize_points(points)
    n = pts[0].n
    if n > RESILIENCE_MAX_N:
        raise ResourceLimitError(
            f"resilience scan supports n <= {RESILIENCE_MAX_N}, got {n}"
        )
    if not (1 <= d <= n):
        raise InvalidInputError(f"need 1 <= d <= n, got d={d}")
    mono_arr = np.array(monomial_masks(n, d), dtype=np.uint64)
    point_masks = np.array([p.bits for p in pts], dtype=np.uint64)
    rows = kernels.lift_rows(point_masks, mono_arr).astype(np.int64)
    int_rows = [[int(v) for v in row] for row in rows]
    solver = SpanSolver(int_rows)
    base_rank = solver.rank
    skip = {p.bits for p in pts}
    fast = kernels.backend() != "python"
    for ubits in range(1 << n):
        if ubits in skip:
            continue
        target = kernels.lift_rows(
            np.array([ubits], dtype=np.uint64), mono_arr
        ).astype(np.int64)[0]
        if fast:
            r = kernels.bareiss_rank_i64(np.vstack([rows, target]))
            if r == base_rank + 1:
                continue  # exact: the lift is independent of the span
        coeffs = solver.solve([int(v) for v in target])
        if coeffs is None:
            continue
        recomposed = [
            sum(c * row[j] for c, row in zip(coeffs, int_rows))
            for j in range(len(target))
        ]
        if any(a != b for a, b in zip(recomposed, [int(v) for v in target])):
            raise VerificationError("span solve failed substitution re-check")
        return ResilienceVerdict(
            status="bad",
            witness=CubePoint(n, ubits),
            coefficients=tuple(coeffs),
        )
    return ResilienceVerdict(status="good")


def subset_verdicts(n: int, d: int, m: int):
    """Yield (point tuple, verdict) for every m-subset of the n-cube,
    ascending in mask order.  Exhaustive-mode resource caps apply."""
    if not (1 <= d <= n):
        raise InvalidInputError(f"need 1 <= d <= n, got n={n}, d={d}")
    if n > RESILIENCE_MAX_N:
        raise ResourceLimitError(f"need n <= {RESILIENCE_MAX_N}, got {n}")
    if m < 1 or m > (1 << n):
        raise InvalidInputError(f"need 1 <= m <= 2^n, got m={m}")
    if math.comb(1 << n, m) > EXHAUSTIVE_SUBSET_CAP:
        raise ResourceLimitError(
            f"binom(2^n, m) exceeds the exhaustive cap {EXHAUSTIVE_SUBSET_CAP}"
        )
    for meta in combinations(range(1 << n), m):
        pts = tuple(CubePoint(n, b) for b in meta)
        yield pts, resilience_check(pts, d)


def good_subset_fraction(
    n: int,
    d: int,
    m: int,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> BigRational:
    """Fraction of m-subsets of the cube whose lifted span contains no
    foreign lifted point: exact when binom(2^n, m) fits the exhaustive cap,
    otherwise estimated over `trials` seeded subset draws."""
    if not (1 <= d <= n):
        raise InvalidInputError(f"need 1 <= d <= n, got n={n}, d={d}")
    if m < 1 or m > (1 << n):
        raise InvalidInputError(f"need 1 <= m <= 2^n, got m={m}")
    total = math.comb(1 << n, m)
    if total <= EXHAUSTIVE_SUBSET_CAP and trials is None:
        good = sum(1 for _, v in subset_verdicts(n, d, m) if v.good)
        return Fraction(good, total)
    if trials is None or seed is None:
        raise ResourceLimitError(
            f"binom(2^n, m) = {total} exceeds the exhaustive cap; "
            "pass trials= and seed= for a sampled estimate"
        )
    if trials < 1:
        raise InvalidInputError(f"need trials >= 1, got {trials}")
    good = 0
    for t in range(trials):
        rng = _per_trial_rng(seed, t)
        masks = rng.choice(1 << n, size=m, replace=False)
        pts = tuple(CubePoint(n, int(b)) for b in sorted(masks))
        if resilience_check(pts, d).good:
            good += 1
    return Fraction(good, trials)


# ---------------------------------------------------------------------------
# regime annotation for the asymptotic independence guarantee
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegimeCheck:
    """Whether (n, d, m, t) sits inside the asymptotic theorem's hypothesis
    m < binom(n - log2(binom(n,<=d)) - t, <=d); reporting only — the 2^-t
    failure bound is an asymptotic claim, not a desk-scale test."""

    n: int
    d: int
    m: int
    t: int
    inner_floor: int
    m_bound: int
    applies: bool
    vacuous: bool
    predicted_failure: Optional[Fraction]


def theorem41_parameter_check(n: int, d: int, m: int, t: int) -> RegimeCheck:
    """Evaluate the hypothesis exactly; the log2 runs through certified
    intervals and the inner argument is floored conservatively downward."""
    from . import intervals as ivh

    if n < 1 or d < 1 or m < 1:
        raise InvalidInputError("need n, d, m >= 1")
    B = sum(math.comb(n, i) for i in range(0, min(d, n) + 1))
    with ivh.precision(128):
        _, log2_hi = ivh.bounds(ivh.log2_fraction(Fraction(B)))
    inner_floor = math.floor(Fraction(n) - log2_hi - t)
    m_bound = (
        0
        if inner_floor < 0
        else sum(math.comb(inner_floor, i) for i in range(0, min(d, inner_floor) + 1))
    )
    applies = m < m_bound
    return RegimeCheck(
        n=n,
        d=d,
        m=m,
        t=t,
        inner_floor=inner_floor,
        m_bound=m_bound,
        applies=applies,
        vacuous=m_bound <= 1,
        predicted_failure=Fraction(1, 2**t) if applies and t >= 0 else None,
    )
