"""Set capacity under degree-d polynomial separators: the exact number of
sign patterns sgn(p(x)), x in a finite point set S, realizable by degree-d
polynomials with no zero on S, and its log2 scale ("capacity").

The reduction: map each point through the degree-d monomial lift (all
monomials of total degree <= d, with repetition), and count the regions of
the central hyperplane arrangement whose normals are the lifted points —
each region is one realizable strict sign pattern.

m denotes binom(n+d, d), the number of monomials of degree <= d in n
variables with repetition.  (The source statement's monomial count carries
an undefined symbol; this is the count that matches the actual lift, and
the bound chain asserted below is proved against it exactly.)

On +-1 point sets every square coordinate is identically 1, so monomials
with repetition collapse onto the multilinear ones; the lift is deduplicated
to the binom(n,<=d)-dimensional multilinear lift before enumeration, which
also makes the full-cube capacity agree exactly with the threshold-function
count computed elsewhere.

All bound-chain assertions are exact integer comparisons (log2 is monotone,
so `capacity <= 1 + log2 B` is checked as `count <= 2B`, and so on); the
reported log values are certified intervals on top of those exact facts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from . import intervals as ivh
from .arrangements import Arrangement, count_regions
from .cube_lift import monomial_masks
from .errors import InvalidInputError, ResourceLimitError, VerificationError
from .linalg_exact import to_fraction

MAX_POINTS = 20
MAX_LIFT_DIM = 12


@dataclass(frozen=True)
class PointSet:
    """Finite set of distinct rational points in R^n."""

    dimension: int
    points: Tuple[Tuple[Fraction, ...], ...]

    def __init__(self, points: Sequence[Sequence]) -> None:
        rows = [tuple(to_fraction(v) for v in row) for row in points]
        if not rows:
            raise InvalidInputError("a point set must be nonempty")
        n = len(rows[0])
        if n < 1:
            raise InvalidInputError("points need at least one coordinate")
        if any(len(r) != n for r in rows):
            raise InvalidInputError("all points must share one dimension")
        if len(set(rows)) != len(rows):
            raise InvalidInputError("points must be distinct")
        object.__setattr__(self, "dimension", n)
        object.__setattr__(self, "points", tuple(rows))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_sign_vectors(self) -> bool:
        """True when every coordinate is +-1 (multilinear dedup applies)."""
        one = Fraction(1)
        return all(v == one or v == -one for row in self.points for v in row)


@dataclass(frozen=True)
class CapacityReport:
    """Exact realizable-pattern count with its log2 scale and bound chain.

    `capacity` is a certified (lo, hi) Fraction pair enclosing log2(count);
    `comparisons` are exact integer verdicts; `bounds` holds certified
    intervals of the bound expressions for reporting.
    """

    count: int
    set_size: int
    degree: int
    monomials: int
    lift_dimension: int
    capacity: Tuple[Fraction, Fraction]
    bounds: Dict = field(default_factory=dict)
    comparisons: Tuple[Tuple[str, bool], ...] = ()

    def __post_init__(self):
        if self.count % 2 != 0:
            raise VerificationError(f"pattern count {self.count} is odd")
        if not (2 <= self.count <= 2**self.set_size):
            raise VerificationError(
                f"pattern count {self.count} outside [2, 2^{self.set_size}]"
            )

    @property
    def all_hold(self) -> bool:
        return all(ok for _, ok in self.comparisons)


def monomial_exponents(n: int, d: int) -> List[Tuple[int, ...]]:
    """All monomials of total degree <= d in n variables, with repetition,
    as sorted variable-index tuples in graded-lex order."""
    if n < 1 or d < 1:
        raise InvalidInputError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    out: List[Tuple[int, ...]] = []
    for k in range(d + 1):
        out.extend(combinations_with_replacement(range(n), k))
    return out


def general_lift(x: Sequence, d: int) -> Tuple[Fraction, ...]:
    """Evaluate every monomial of total degree <= d (with repetition) at x,
    in graded-lex order; the result has binom(n+d, d) coordinates."""
    vec = tuple(to_fraction(v) for v in x)
    if not vec:
        raise InvalidInputError("empty point")
    values = []
    for mono in monomial_exponents(len(vec), max(d, 1)):
        prod = Fraction(1)
        for i in mono:
            prod *= vec[i]
        values.append(prod)
    return tuple(values)


def _certified_log2_int(value: int, width: Fraction) -> Tuple[Fraction, Fraction]:
    lo, hi, _ = ivh.certified_bounds(
        lambda: ivh.log2_fraction(Fraction(value)), width
    )
    return lo, hi


def capacity_set(S: PointSet, d: int, threads: int = 1) -> CapacityReport:
    """Count the sign patterns of degree-d polynomials on S exactly, and
    verify the capacity bound chain.

    The chain (m = binom(n+d,d), s = |S|) is asserted exactly:
      count <= 2*binom(s-1, <=m-1)          (capacity <= 1 + log2 binom(...))
      2*binom(s-1, <=m-1) <= s^m            (... <= m*log2 s)
      2*s <= count for s >= 2               (1 + log2 s <= capacity)
    The monomial-count cap m <= (2en/d)^d is evaluated and reported, never
    assumed (it genuinely fails for some small n, d).
    """
    if not isinstance(S, PointSet):
        S = PointSet(S)
    if d < 1:
        raise InvalidInputError(f"need degree d >= 1, got {d}")
    s = len(S)
    n = S.dimension
    if s > MAX_POINTS:
        raise ResourceLimitError(f"|S| capped at {MAX_POINTS}, got {s}")
    m = math.comb(n + d, d)

    if S.is_sign_vectors:
        d_eff = min(d, n)
        masks = monomial_masks(n, d_eff)
        lift_dim = len(masks)
        if lift_dim > MAX_LIFT_DIM:
            raise ResourceLimitError(
                f"lift dimension {lift_dim} exceeds the cap {MAX_LIFT_DIM}"
            )
        rows = []
        for pt in S.points:
            bits = 0
            for i, v in enumerate(pt):
                if v == -1:
                    bits |= 1 << i
            rows.append(
                tuple(
                    -1 if (bits & mk).bit_count() & 1 else 1 for mk in masks
                )
            )
    else:
        lift_dim = m
        if lift_dim > MAX_LIFT_DIM:
            raise ResourceLimitError(
                f"lift dimension binom(n+d,d)={lift_dim} exceeds the cap "
                f"{MAX_LIFT_DIM}"
            )
        rows = [general_lift(pt, d) for pt in S.points]

    A = Arrangement(lift_dim, [(row, 0) for row in rows])
    count = count_regions(A, threads=threads).region_count

    B = sum(math.comb(s - 1, i) for i in range(0, min(m - 1, s - 1) + 1))
    comparisons: List[Tuple[str, bool]] = [
        ("capacity <= 1 + log2 binom(s-1, <=m-1)", count <= 2 * B),
        ("1 + log2 binom(s-1, <=m-1) <= m log2 s", 2 * B <= s**m if s >= 2 else True),
    ]
    if s >= 2:
        comparisons.append(("1 + log2 s <= capacity", 2 * s <= count))

    width = Fraction(1, 10**9)
    cap_lo, cap_hi = _certified_log2_int(count, width)
    bounds: Dict = {
        "pattern_upper_log2": _certified_log2_int(2 * B, width),
        "monomial_upper_log2": None,
    }

    def build_m_log2_s():
        return ivh.iv.mpf(m) * ivh.log2_fraction(Fraction(s))

    if s >= 2:
        lo, hi, _ = ivh.certified_bounds(build_m_log2_s, width)
        bounds["monomial_upper_log2"] = (lo, hi)

    # reported, not assumed: m <= (2en/d)^d
    cap_ok, _ = ivh.decide_geq(
        lambda: (2 * ivh.iv.e * ivh.iv.mpf(n) / ivh.iv.mpf(d)) ** d,
        Fraction(m),
    )
    bounds["monomial_count_cap_holds"] = cap_ok

    return CapacityReport(
        count=count,
        set_size=s,
        degree=d,
        monomials=m,
        lift_dimension=lift_dim,
        capacity=(cap_lo, cap_hi),
        bounds=bounds,
        comparisons=tuple(comparisons),
    )


def parse_points_csv(text: str) -> PointSet:
    """One rational point per line, comma-separated coordinates."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([Fraction(tok.strip()) for tok in line.split(",")])
    if not rows:
        raise InvalidInputError("no points found")
    return PointSet(rows)
