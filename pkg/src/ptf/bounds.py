"""Closed-form bounds and the numeric inequality scans behind the counting
results: binomial-sum lemmas, the five-case grid checks, and the headline
bound expressions.

Everything rational is compared exactly in big integers/Fractions.  The only
non-rational ingredients are log2 and powers of e; those run through the
certified interval arithmetic in `intervals`, with precision doubling until
each comparison is decided.  2^(a/b) comparisons against integers are done
exactly by raising both sides to the b-th power — no intervals needed.

The inequality constants (3.0528, 2.9598, 2.8854, 0.1528) are decimal
literals in the source material; they are held here as exact Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import intervals as ivh
from .errors import InvalidInputError
from .linalg_exact import to_fraction

ALPHA = Fraction(30528, 10000)  # critical ratio n/d
CASE3_SLOPE = Fraction(29598, 10000)
CASE2_SLOPE = Fraction(1528, 10000)
CASE_OFFSET = Fraction(28854, 10000)  # rounding-up of 2*log2(e)

CASE2_MIN_D = 36
CASE3_GRID_MAX = 64
CASE4_N_RANGE = (8, 258)
CASE4_D_MAX = 35
CASE5_N_RANGE = (2, 7)


def binom_sum(n: int, d: int) -> int:
    """Exact binom(n,0) + ... + binom(n,d).  Requires 0 <= d <= n."""
    if not (0 <= d <= n):
        raise InvalidInputError(f"binom_sum needs 0 <= d <= n, got n={n}, d={d}")
    return sum(math.comb(n, i) for i in range(0, d + 1))


def _binom_le(p: int, m: int) -> int:
    """binom(p, <=m) with m allowed to exceed p (upper terms vanish)."""
    return sum(math.comb(p, i) for i in range(0, min(m, p) + 1))


@dataclass(frozen=True)
class ScanEntry:
    """One checked inequality instance: parameters, verdict, margin bound."""

    params: Tuple
    holds: bool
    precision_bits: int
    margin_lo: Optional[Fraction] = None  # certified lower bound of the slack


@dataclass(frozen=True)
class ScanReport:
    case: str
    grid: str
    pairs_checked: int
    failures: Tuple[ScanEntry, ...]
    precision_bits: int
    details: Dict = field(default_factory=dict)
    entries: Tuple[ScanEntry, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class BoundReport:
    """Bound expressions for one (n, d): exact integers/rationals, or
    certified (lo, hi) Fraction pairs for values involving log2/e."""

    name: str
    inputs: Dict
    values: Dict
    comparisons: Tuple[Tuple[str, bool], ...] = ()

    @property
    def all_hold(self) -> bool:
        return all(ok for _, ok in self.comparisons)


# ---------------------------------------------------------------------------
# appendix lemmas on binomial sums
# ---------------------------------------------------------------------------


def check_lemma_A1(n: int, d: int,
                   start_bits: int = ivh.DEFAULT_START_PRECISION) -> ScanEntry:
    """(n/d)^d <= binom(n,d) <= binom(n,<=d) <= (en/d)^d, for 1 <= d <= n."""
    if not (1 <= d <= n):
        raise InvalidInputError(f"need 1 <= d <= n, got n={n}, d={d}")
    lower = Fraction(n, d) ** d
    mid = math.comb(n, d)
    mid_sum = binom_sum(n, d)
    ok_exact = lower <= mid <= mid_sum
    # binom(n,<=d) <= (en/d)^d: e is the only non-rational ingredient
    ok_e, bits = ivh.decide_geq(
        lambda: (ivh.iv.e * ivh.iv.mpf(n) / ivh.iv.mpf(d)) ** d,
        Fraction(mid_sum),
        start_bits=start_bits,
    )
    return ScanEntry(params=(n, d), holds=ok_exact and ok_e, precision_bits=bits)


def check_lemma_A2(n: int, d: int, k: int) -> ScanEntry:
    """(1-2k/n)^d binom(n,<=d) <= binom(n-k,<=d) <= binom(n,<=d), exact."""
    if not (1 <= d <= Fraction(n, 2)):
        raise InvalidInputError(f"need 1 <= d <= n/2, got n={n}, d={d}")
    if not (1 <= k <= n - d + 1):
        raise InvalidInputError(f"need 1 <= k <= n-d+1, got k={k}")
    full = binom_sum(n, d)
    dropped = binom_sum(n - k, d) if n - k >= d else _binom_le(n - k, d)
    lhs = (1 - Fraction(2 * k, n)) ** d * full
    holds = lhs <= dropped <= full
    margin = min(Fraction(dropped) - lhs, Fraction(full - dropped))
    return ScanEntry(params=(n, d, k), holds=holds, precision_bits=0,
                     margin_lo=margin)


def check_lemma_A3(n: int, d: int) -> ScanEntry:
    """binom(n,<=d) <= binom(n,d) * (n+1-d)/(n+1-2d), exact rationals."""
    if not (1 <= d <= Fraction(n, 2)) or n + 1 - 2 * d <= 0:
        raise InvalidInputError(f"need 1 <= d <= n/2, got n={n}, d={d}")
    lhs = binom_sum(n, d)
    rhs = math.comb(n, d) * Fraction(n + 1 - d, n + 1 - 2 * d)
    return ScanEntry(params=(n, d), holds=lhs <= rhs, precision_bits=0,
                     margin_lo=rhs - lhs)


def scan_lemma_A1(n_max: int = 60,
                  start_bits: int = ivh.DEFAULT_START_PRECISION) -> ScanReport:
    entries = []
    bits = 0
    for n in range(1, n_max + 1):
        for d in range(1, n + 1):
            e = check_lemma_A1(n, d, start_bits=start_bits)
            entries.append(e)
            bits = max(bits, e.precision_bits)
    failures = tuple(e for e in entries if not e.holds)
    return ScanReport(
        case="A1", grid=f"1 <= d <= n <= {n_max}", pairs_checked=len(entries),
        failures=failures, precision_bits=bits, entries=tuple(entries),
    )


def scan_lemma_A2(n_max: int = 40) -> ScanReport:
    """Scan the drop-k sandwich over its full stated hypothesis.

    The sandwich is FALSE on part of that range: for even d with k > n/2
    the factor (1-2k/n)^d is positive while binom(n-k,<=d) collapses, e.g.
    (n,d,k) = (4,2,3) gives 11/4 > 2.  Every failure found has even d and
    2k > n; restricted to k <= n/2 (or odd d) the sandwich holds, and that
    restricted form is all the downstream lower-bound argument consumes
    (there k ~ n/log2(n)).  The scan reports the literal statement's
    failures rather than hiding them; see `details` for the split.
    """
    entries = []
    for n in range(2, n_max + 1):
        for d in range(1, n // 2 + 1):
            for k in range(1, n - d + 2):
                entries.append(check_lemma_A2(n, d, k))
    failures = tuple(e for e in entries if not e.holds)
    outside = tuple(
        e for e in failures if e.params[1] % 2 == 0 and 2 * e.params[2] > e.params[0]
    )
    return ScanReport(
        case="A2", grid=f"1 <= d <= n/2, n <= {n_max}, 1 <= k <= n-d+1",
        pairs_checked=len(entries), failures=failures, precision_bits=0,
        details={
            "failures_all_have_even_d_and_2k_gt_n": len(outside) == len(failures),
            "holds_for_k_le_half_n_or_odd_d": not any(
                not e.holds
                and (2 * e.params[2] <= e.params[0] or e.params[1] % 2 == 1)
                for e in entries
            ),
        },
        entries=tuple(entries),
    )


def scan_lemma_A3(n_max: int = 60) -> ScanReport:
    entries = []
    for n in range(2, n_max + 1):
        for d in range(1, n // 2 + 1):
            entries.append(check_lemma_A3(n, d))
    failures = tuple(e for e in entries if not e.holds)
    return ScanReport(
        case="A3", grid=f"1 <= d <= n/2, n <= {n_max}",
        pairs_checked=len(entries), failures=failures, precision_bits=0,
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# the margin function of Case 1: g(x) = log2(e x) - x
# ---------------------------------------------------------------------------


def _g_builder(x: Fraction):
    def build():
        return (
            ivh.log2(ivh.iv.e)
            + ivh.log2_fraction(x)
            - ivh.from_fraction(x)
        )

    return build


def scan_case1_crossing(width: Fraction = Fraction(1, 10_000),
                        start_bits: int = ivh.DEFAULT_START_PRECISION) -> ScanReport:
    """Localize the positive root of log2(e x) = x to the given width, and
    certify that log2(e x) >= x on [1, ALPHA].

    g(x) = log2(e x) - x is strictly concave, so its minimum over [1, ALPHA]
    sits at an endpoint: certifying g(1) > 0 and g(ALPHA) > 0 proves the
    whole interval.  The crossing is bisected with certified signs; g cannot
    vanish at a rational point (that would make e algebraic), so every
    bisection step is decidable.
    """
    evals = 0
    bits = 0

    def sign_at(x: Fraction) -> int:
        nonlocal evals, bits
        s, b = ivh.decide_sign(_g_builder(x), start_bits=start_bits)
        evals += 1
        bits = max(bits, b)
        return s

    checks = {}
    checks["g(1) > 0"] = sign_at(Fraction(1)) > 0
    checks["g(alpha) > 0"] = sign_at(ALPHA) > 0
    hi0 = Fraction(306, 100)
    checks["g(3.06) < 0"] = sign_at(hi0) < 0

    lo, hi = ALPHA, hi0
    while hi - lo > width:
        mid = (lo + hi) / 2
        if sign_at(mid) > 0:
            lo = mid
        else:
            hi = mid
    margin_lo, margin_hi, mbits = ivh.certified_bounds(
        _g_builder(ALPHA), Fraction(1, 10**9), start_bits=start_bits
    )
    bits = max(bits, mbits)

    failures = tuple(
        ScanEntry(params=(name,), holds=False, precision_bits=bits)
        for name, ok in checks.items()
        if not ok
    )
    return ScanReport(
        case="case1",
        grid=f"bisection on [{ALPHA}, {hi0}] to width {width}",
        pairs_checked=evals,
        failures=failures,
        precision_bits=bits,
        details={
            "root_lo": str(lo),
            "root_hi": str(hi),
            "alpha": str(ALPHA),
            "alpha_below_root": checks["g(alpha) > 0"] and checks["g(3.06) < 0"],
            "margin_at_alpha": (str(margin_lo), str(margin_hi)),
            "checks": checks,
        },
    )


# ---------------------------------------------------------------------------
# Case 3 (and the Case 2 companion): slope*d - 0.5*log2(d) - offset >= 0
# ---------------------------------------------------------------------------


def _affine_log_builder(slope: Fraction, offset: Fraction, d: Fraction):
    def build():
        return (
            ivh.from_fraction(slope * d - offset)
            - ivh.log2_fraction(d) / ivh.iv.mpf(2)
        )

    return build


def _check_affine_log(slope: Fraction, offset: Fraction, d: Fraction,
                      start_bits: int = ivh.DEFAULT_START_PRECISION) -> ScanEntry:
    if d == 1:
        # log2(1) = 0: the value is exactly rational; compare directly
        val = slope - offset
        return ScanEntry(params=(str(d),), holds=val >= 0, precision_bits=0,
                         margin_lo=val)
    lo, hi, bits = ivh.certified_bounds(
        _affine_log_builder(slope, offset, d), Fraction(1, 10**9),
        start_bits=start_bits,
    )
    return ScanEntry(params=(str(d),), holds=lo >= 0, precision_bits=bits,
                     margin_lo=lo)


def _derivative_positive(slope: Fraction, at: Fraction) -> bool:
    """Certified slope - 1/(2 d ln 2) > 0 at d = `at` (the derivative is
    increasing in d, so positivity there gives positivity beyond)."""
    ok, _ = ivh.decide_geq(
        lambda: ivh.from_fraction(slope)
        - 1 / (2 * ivh.from_fraction(at) * ivh.iv.log(ivh.iv.mpf(2))),
        Fraction(0),
    )
    return ok


def scan_case3(step: Fraction = Fraction(1, 100),
               start_bits: int = ivh.DEFAULT_START_PRECISION) -> ScanReport:
    """2.9598 d - 0.5 log2 d - 2.8854 >= 0 on the grid d = 1, 1.01, ..., 64,
    plus a certified derivative argument extending the claim to all real
    d >= 1.  Also runs the companion check 0.1528 d - 0.5 log2 d - 2.8854
    >= 0 for d >= 36 (certified at 36 + increasing derivative)."""
    entries: List[ScanEntry] = []
    bits = 0
    d = Fraction(1)
    dmax = Fraction(CASE3_GRID_MAX)
    min_margin: Optional[Tuple[Fraction, Fraction]] = None
    while d <= dmax:
        e = _check_affine_log(CASE3_SLOPE, CASE_OFFSET, d, start_bits=start_bits)
        entries.append(e)
        bits = max(bits, e.precision_bits)
        if e.margin_lo is not None and (
            min_margin is None or e.margin_lo < min_margin[0]
        ):
            min_margin = (e.margin_lo, d)
        d += step

    deriv_ok = _derivative_positive(CASE3_SLOPE, Fraction(1))
    if not deriv_ok:
        entries.append(
            ScanEntry(params=("derivative at 1",), holds=False,
                      precision_bits=bits)
        )

    companion: List[ScanEntry] = []
    for dc in range(CASE2_MIN_D, 101):
        companion.append(
            _check_affine_log(CASE2_SLOPE, CASE_OFFSET, Fraction(dc),
                              start_bits=start_bits)
        )
    comp_deriv_ok = _derivative_positive(CASE2_SLOPE, Fraction(CASE2_MIN_D))
    entries.extend(companion)
    if not comp_deriv_ok:
        entries.append(
            ScanEntry(params=("companion derivative at 36",), holds=False,
                      precision_bits=bits)
        )

    failures = tuple(e for e in entries if not e.holds)
    details = {
        "derivative_positive_from_1": deriv_ok,
        "companion_derivative_positive_from_36": comp_deriv_ok,
        "companion_grid": f"integer d in [{CASE2_MIN_D}, 100]",
    }
    if min_margin is not None:
        details["min_margin"] = str(min_margin[0])
        details["min_margin_at_d"] = str(min_margin[1])
    return ScanReport(
        case="case3",
        grid=f"d = 1, 1+{step}, ..., {CASE3_GRID_MAX}",
        pairs_checked=len(entries),
        failures=failures,
        precision_bits=max([bits] + [e.precision_bits for e in entries]),
        details=details,
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# Case 4: t(n,d) = 1 + m log2(e (2^n - 1)/m) <= n^(d+1)/d!
# ---------------------------------------------------------------------------


def _case4_entry(n: int, d: int,
                 start_bits: int = ivh.DEFAULT_START_PRECISION) -> ScanEntry:
    m = binom_sum(n, d)
    ratio = Fraction(2**n - 1, m)
    rhs = Fraction(n ** (d + 1), math.factorial(d))

    def build_t():
        return 1 + ivh.iv.mpf(m) * (
            ivh.log2(ivh.iv.e) + ivh.log2_fraction(ratio)
        )

    ok, bits = ivh.decide_leq(build_t, rhs, start_bits=start_bits)
    with ivh.precision(bits):
        t_lo, t_hi = ivh.bounds(build_t())
    return ScanEntry(params=(n, d), holds=ok, precision_bits=bits,
                     margin_lo=rhs - t_hi)


def case4_pairs() -> List[Tuple[int, int]]:
    lo, hi = CASE4_N_RANGE
    pairs = []
    for n in range(lo, hi + 1):
        for d in range(1, CASE4_D_MAX + 1):
            if n * ALPHA.denominator > ALPHA.numerator * d:  # n > alpha d
                pairs.append((n, d))
    return pairs


def scan_case4(start_bits: int = ivh.DEFAULT_START_PRECISION) -> ScanReport:
    entries = []
    bits = 0
    for n, d in case4_pairs():
        e = _case4_entry(n, d, start_bits=start_bits)
        entries.append(e)
        bits = max(bits, e.precision_bits)
    failures = tuple(e for e in entries if not e.holds)
    lo, hi = CASE4_N_RANGE
    return ScanReport(
        case="case4",
        grid=f"{lo} <= n <= {hi}, 1 <= d <= {CASE4_D_MAX}, n > {ALPHA} d",
        pairs_checked=len(entries),
        failures=failures,
        precision_bits=bits,
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# Case 5: 2 binom(2^n - 1, <= m) <= 2^(n^(d+1)/d!), exact
# ---------------------------------------------------------------------------


def _case5_entry(n: int, d: int) -> ScanEntry:
    m = binom_sum(n, d)
    lhs = 2 * _binom_le(2**n - 1, m)
    q = Fraction(n ** (d + 1), math.factorial(d))
    # lhs <= 2^(a/b)  <=>  lhs^b <= 2^a, exactly in big integers
    holds = lhs ** q.denominator <= 2**q.numerator
    return ScanEntry(params=(n, d), holds=holds, precision_bits=0)


def scan_case5() -> ScanReport:
    lo, hi = CASE5_N_RANGE
    entries = []
    for n in range(lo, hi + 1):
        for d in range(1, n + 1):
            entries.append(_case5_entry(n, d))
    failures = tuple(e for e in entries if not e.holds)
    return ScanReport(
        case="case5",
        grid=f"{lo} <= n <= {hi}, 1 <= d <= n",
        pairs_checked=len(entries),
        failures=failures,
        precision_bits=0,
        entries=tuple(entries),
    )


_SCANS = {
    "1": scan_case1_crossing,
    "3": scan_case3,
    "4": scan_case4,
    "5": scan_case5,
    "A1": scan_lemma_A1,
    "A2": scan_lemma_A2,
    "A3": scan_lemma_A3,
}


def run_scan(case: str) -> ScanReport:
    key = str(case).strip()
    if key.lower().startswith("case"):
        key = key[4:]
    if key not in _SCANS:
        raise InvalidInputError(
            f"unknown scan case {case!r}; choose from 1, 3, 4, 5, A1, A2, A3"
        )
    return _SCANS[key]()


# ---------------------------------------------------------------------------
# headline bound expressions
# ---------------------------------------------------------------------------


def main_theorem_bounds(n: int, d: int, C=1, count: Optional[int] = None) -> BoundReport:
    """All bound expressions for one (n, d).

    upper_log2 = n*binom(n,<=d) exact; lower_log2 = (1 - C/log2 n)^d * upper
    as a certified interval (C > 0 is caller-chosen); factorial_upper =
    n^(d+1)/d! exact; saks_lower_log2 = binom(n,d+1) exact.  For d = 1 the
    reference n^2-scale expressions are included (certified intervals, no
    sharpness claim).  When `count` is given, the exact sandwich checks run:
    2^saks <= count <= 2^upper and count <= 2^factorial_upper.
    """
    if n <= 1:
        raise InvalidInputError("need n > 1")
    if not (1 <= d <= n):
        raise InvalidInputError(f"need 1 <= d <= n, got d={d}")
    C = to_fraction(C)
    if C <= 0:
        raise InvalidInputError("the lower-bound constant C must be positive")

    B = binom_sum(n, d)
    upper_log2 = n * B
    saks_log2 = math.comb(n, d + 1)
    factorial_upper = Fraction(n ** (d + 1), math.factorial(d))

    def build_lower():
        log2n = ivh.log2(ivh.iv.mpf(n))
        return (1 - ivh.from_fraction(C) / log2n) ** d * ivh.iv.mpf(upper_log2)

    lo, hi, bits = ivh.certified_bounds(build_lower, Fraction(1, 10**6))

    values: Dict = {
        "upper_log2": upper_log2,
        "lower_log2": (lo, hi),
        "factorial_upper_log2": factorial_upper,
        "saks_lower_log2": saks_log2,
    }
    if d == 1:
        def build_zuev_lo():
            return (1 - 10 / ivh.log2(ivh.iv.mpf(n))) * ivh.iv.mpf(n * n)

        def build_kks():
            return ivh.iv.mpf(n * n) - ivh.iv.mpf(n) * ivh.log2(ivh.iv.mpf(n))

        zlo, zhi, zb = ivh.certified_bounds(build_zuev_lo, Fraction(1, 10**6))
        klo, khi, kb = ivh.certified_bounds(build_kks, Fraction(1, 10**6))
        bits = max(bits, zb, kb)
        values["zuev_window"] = ((zlo, zhi), n * n)
        values["kks_reference"] = (klo, khi)

    comparisons: List[Tuple[str, bool]] = []
    if count is not None:
        comparisons.append(
            ("saks_lower: 2^binom(n,d+1) <= count", 2**saks_log2 <= count)
        )
        comparisons.append(
            ("upper: count <= 2^(n binom(n,<=d))", count <= 2**upper_log2)
        )
        fu = factorial_upper
        comparisons.append(
            (
                "factorial_upper: count <= 2^(n^(d+1)/d!)",
                count ** fu.denominator <= 2**fu.numerator,
            )
        )

    return BoundReport(
        name="main-theorem-bounds",
        inputs={"n": n, "d": d, "C": str(C), "precision_bits": bits},
        values=values,
        comparisons=tuple(comparisons),
    )
