"""Hyperplane arrangements: exact region counts and intersection subspaces.

A region is a connected component of the complement — equivalently a full
sign vector sigma in {+,-}^p realizable by a point strictly off every
hyperplane.  Regions are enumerated depth-first over sign prefixes: an
infeasible prefix prunes its whole subtree, and each feasible node keeps an
exact interior witness so that the child on the witness's side of the next
hyperplane is known feasible without solving anything.  Realizability of the
other child is one strict-feasibility LP (exact, certified both ways).

Central arrangements (all offsets zero) have antipodally paired regions:
x -> -x flips every sign.  Enumeration fixes the first sign + and doubles.

Intersection subspaces are collected by breadth-first closure: start from
the whole space (empty subfamily) and intersect with one hyperplane at a
time; every nonempty subfamily intersection is reached this way because all
its prefixes contain it.  Subspaces are deduplicated by the canonical
reduced row-echelon form of their defining equations, which identifies two
consistent systems exactly when their solution sets coincide.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import kernels
from .errors import InvalidInputError, ResourceLimitError
from .linalg_exact import (
    SpanSolver,
    margin_lp_int_rows,
    to_fraction,
    _integerize_rows,
)

MAX_P_REGIONS = 40
MAX_M_REGIONS = 12
MAX_P_SUBSPACES = 25

SIGN_VECTOR_ENUMERATION = "sign-vector-enumeration"
FORMULA_BOUND = "formula-bound"


@dataclass(frozen=True)
class Arrangement:
    """A finite list of affine hyperplanes <normal, x> + offset = 0 in R^m."""

    dimension: int
    hyperplanes: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]

    def __init__(
        self,
        dimension: int,
        hyperplanes: Iterable[Tuple[Sequence, object]],
    ) -> None:
        hp = []
        for normal, offset in hyperplanes:
            nrm = tuple(to_fraction(v) for v in normal)
            if len(nrm) != dimension:
                raise InvalidInputError(
                    f"normal of length {len(nrm)} in dimension {dimension}"
                )
            if all(v == 0 for v in nrm):
                raise InvalidInputError("zero normal vector")
            hp.append((nrm, to_fraction(offset)))
        if not hp:
            raise InvalidInputError("an arrangement needs at least one hyperplane")
        if dimension < 1:
            raise InvalidInputError("dimension must be positive")
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "hyperplanes", tuple(hp))

    @property
    def p(self) -> int:
        return len(self.hyperplanes)

    @property
    def central(self) -> bool:
        return all(c == 0 for _, c in self.hyperplanes)


@dataclass(frozen=True)
class RegionCountReport:
    region_count: int
    method: str
    intersection_subspace_count: Optional[int] = None


# ---------------------------------------------------------------------------
# region enumeration
# ---------------------------------------------------------------------------


def _dfs_count(
    rows: List[List[int]],
    tail: List[List[int]],
    start_signs: List[int],
    witness: Tuple[List[int], int],
    ws: kernels.MarginLPWorkspace,
    force_exact: bool = False,
) -> int:
    """Count feasible full sign vectors extending start_signs.

    rows: integer constraint rows (homogeneous); tail: rows appended to every
    LP (the positivity row for homogenized affine arrangements); witness: an
    exact interior point (numerators, denominator) for the start prefix.
    """
    p = len(rows)
    signed: List[List[int]] = [
        [s * v for v in rows[i]] for i, s in enumerate(start_signs)
    ]
    count = 0

    def rec(k: int, wit: Tuple[List[int], int]) -> None:
        nonlocal count
        if k == p:
            count += 1
            return
        nums, _den = wit
        dot = sum(r * w for r, w in zip(rows[k], nums))
        for s in (1, -1):
            if dot * s > 0:
                signed.append([s * v for v in rows[k]])
                rec(k + 1, wit)
                signed.pop()
            else:
                signed.append([s * v for v in rows[k]])
                feas, a_num, den, _ = margin_lp_int_rows(
                    signed + tail, ws, force_exact=force_exact
                )
                if feas:
                    rec(k + 1, (a_num, den))
                signed.pop()

    rec(len(start_signs), witness)
    return count


def _prefix_witness(
    rows: List[List[int]],
    tail: List[List[int]],
    signs: Sequence[int],
    ws: kernels.MarginLPWorkspace,
    force_exact: bool = False,
) -> Optional[Tuple[List[int], int]]:
    signed = [[s * v for v in rows[i]] for i, s in enumerate(signs)]
    feas, a_num, den, _ = margin_lp_int_rows(
        signed + tail, ws, force_exact=force_exact
    )
    return (a_num, den) if feas else None


def count_regions(
    A: Arrangement, threads: int = 1, force_exact: bool = False
) -> RegionCountReport:
    """Exact number of open regions of the arrangement's complement."""
    if A.p > MAX_P_REGIONS or A.dimension > MAX_M_REGIONS:
        raise ResourceLimitError(
            f"region enumeration capped at p<={MAX_P_REGIONS}, "
            f"m<={MAX_M_REGIONS}; got p={A.p}, m={A.dimension}"
        )
    central = A.central
    if central:
        rows = _integerize_rows([list(nrm) for nrm, _ in A.hyperplanes])
        tail: List[List[int]] = []
    else:
        # homogenize: x = a/t with t > 0 appended to every feasibility query
        rows = _integerize_rows(
            [list(nrm) + [c] for nrm, c in A.hyperplanes]
        )
        tail = [[0] * A.dimension + [1]]

    count = _count_signed(rows, tail, central, threads, force_exact)
    return RegionCountReport(count, SIGN_VECTOR_ENUMERATION)


def _count_signed(
    rows: List[List[int]],
    tail: List[List[int]],
    central: bool,
    threads: int,
    force_exact: bool = False,
) -> int:
    p = len(rows)
    ws = kernels.MarginLPWorkspace(p + len(tail), len(rows[0]))

    # fix the first sign for central arrangements; regions pair antipodally
    first_signs: List[List[int]] = [[1]] if central else [[1], [-1]]
    factor = 2 if central else 1

    # split into fixed-prefix jobs (lexicographic), aggregate in order
    depth = 1
    if threads > 1 and p >= 3:
        depth = min(3, p - 1)
    jobs: List[List[int]] = []
    for base in first_signs:
        stack = [base]
        while stack:
            pre = stack.pop(0)
            if len(pre) == depth:
                jobs.append(pre)
            else:
                stack.append(pre + [1])
                stack.append(pre + [-1])
    jobs.sort(key=lambda pre: [0 if s > 0 else 1 for s in pre])

    def run_job(pre: List[int]) -> int:
        wsl = kernels.MarginLPWorkspace(p + len(tail), len(rows[0]))
        wit = _prefix_witness(rows, tail, pre, wsl, force_exact)
        if wit is None:
            return 0
        return _dfs_count(rows, tail, pre, wit, wsl, force_exact)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run_job, jobs))
        total = sum(results)
    else:
        total = 0
        for pre in jobs:
            wit = _prefix_witness(rows, tail, pre, ws, force_exact)
            if wit is not None:
                total += _dfs_count(rows, tail, pre, wit, ws, force_exact)
    return factor * total


# ---------------------------------------------------------------------------
# intersection subspaces
# ---------------------------------------------------------------------------


def count_intersection_subspaces(A: Arrangement) -> int:
    """Distinct nonempty intersections of subfamilies, whole space included."""
    if A.p > MAX_P_SUBSPACES:
        raise ResourceLimitError(
            f"subspace enumeration capped at p<={MAX_P_SUBSPACES}; got {A.p}"
        )
    # hyperplane i as the augmented equation row (normal | -offset)
    aug = [list(nrm) + [-c] for nrm, c in A.hyperplanes]
    m = A.dimension

    def canon(rows: List[List[Fraction]]):
        solver = SpanSolver(rows)
        form = solver.canonical_span()
        for row in form:
            if all(v == 0 for v in row[:m]) and row[m] != 0:
                return None  # inconsistent: empty intersection
        return form

    whole = ()
    seen: Dict[tuple, List[List[Fraction]]] = {whole: []}
    frontier = [whole]
    while frontier:
        nxt = []
        for key in frontier:
            base = seen[key]
            for h in aug:
                rows = base + [[to_fraction(v) for v in h]]
                form = canon(rows)
                if form is None or form in seen:
                    continue
                seen[form] = [list(r) for r in form]
                nxt.append(form)
        frontier = nxt
    return len(seen)


# ---------------------------------------------------------------------------
# bound formulas
# ---------------------------------------------------------------------------


def _binom_le(p: int, m: int) -> int:
    return sum(math.comb(p, i) for i in range(0, m + 1))


def region_upper_bound(p: int, m: int, central: bool = False) -> int:
    """Region-count upper bound: binom(p, <=m), or 2*binom(p-1, <=m-1) central."""
    if not (p >= m >= 1):
        raise InvalidInputError(f"bound requires p >= m >= 1, got p={p}, m={m}")
    if central:
        return 2 * _binom_le(p - 1, m - 1)
    return _binom_le(p, m)


def region_bound_report(p: int, m: int, central: bool = False) -> RegionCountReport:
    return RegionCountReport(region_upper_bound(p, m, central), FORMULA_BOUND)


# ---------------------------------------------------------------------------
# general-position tests (exact rank checks on subsets)
# ---------------------------------------------------------------------------


def normals_in_general_position(A: Arrangement) -> bool:
    """Every min(p, m)-subset of normals is linearly independent."""
    from itertools import combinations

    from .linalg_exact import rank as exact_rank

    m = A.dimension
    k = min(A.p, m)
    for subset in combinations(range(A.p), k):
        rows = [list(A.hyperplanes[i][0]) for i in subset]
        if exact_rank(rows) < k:
            return False
    return True


def in_general_position(A: Arrangement) -> bool:
    """Affine general position: every k <= m subfamily meets in an
    (m-k)-flat, and no m+1 hyperplanes share a point."""
    from itertools import combinations

    from .linalg_exact import rank as exact_rank

    m = A.dimension
    for k in range(2, min(A.p, m + 1) + 1):
        for subset in combinations(range(A.p), k):
            nrows = [list(A.hyperplanes[i][0]) for i in subset]
            arows = [
                list(A.hyperplanes[i][0]) + [-A.hyperplanes[i][1]]
                for i in subset
            ]
            rn, ra = exact_rank(nrows), exact_rank(arows)
            if k <= m:
                # must intersect (consistent) with full rank k
                if rn != k or ra != k:
                    return False
            else:
                # m+1 hyperplanes must have empty common intersection
                if rn == ra:
                    return False
    return True


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def parse_arrangement(text: str) -> Arrangement:
    """Parse the text format: 'm p central|affine', then p rows of m normal
    coordinates plus one offset, all rationals."""
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise InvalidInputError("empty arrangement text")
    head = lines[0].split()
    if len(head) != 3 or head[2] not in ("central", "affine"):
        raise InvalidInputError(
            "header must be 'm p central|affine', got " + lines[0]
        )
    m, p = int(head[0]), int(head[1])
    if len(lines) != 1 + p:
        raise InvalidInputError(f"expected {p} hyperplane lines, got {len(lines) - 1}")
    hps = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != m + 1:
            raise InvalidInputError(
                f"hyperplane line needs {m} normal coords + offset: {ln!r}"
            )
        normal = [Fraction(t) for t in toks[:m]]
        offset = Fraction(toks[m])
        hps.append((normal, offset))
    A = Arrangement(m, hps)
    if head[2] == "central" and not A.central:
        raise InvalidInputError("header says central but offsets are not all 0")
    return A


def serialize_arrangement(A: Arrangement) -> str:
    tag = "central" if A.central else "affine"
    lines = [f"{A.dimension} {A.p} {tag}"]
    for nrm, c in A.hyperplanes:
        lines.append(" ".join(str(v) for v in list(nrm) + [c]))
    return "\n".join(lines) + "\n"
