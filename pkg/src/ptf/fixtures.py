"""Frozen regression fixtures and their re-verification.

The package ships a JSON file of known-good values: threshold-function
counts, exact probabilities, seeded Monte Carlo outcomes, capacity counts,
and small arrangement region counts.  ``verify_fixtures`` recomputes every
entry with the current code and reports any drift.  One count (n=5, d=1)
sits beyond the reach of the independent exhaustive oracle; it is
recomputed by region enumeration and cross-checked against the closed-form
bounds only, and its status says so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .arrangements import Arrangement, count_intersection_subspaces, count_regions
from .capacity import PointSet, capacity_set
from .errors import InvalidInputError
from .ptf_count import count_ptf, oracle_count_ptf, verify_upper_bounds
from .random_tensors import (
    ExperimentConfig,
    good_subset_fraction,
    independence_probability_exhaustive,
    lo_empirical,
    lo_probability_exact,
    mc_independence,
)

ORACLE_MAX_N = 3  # cheap cross-check ceiling inside verify (seconds, not minutes)

OK = "ok"
MISMATCH = "mismatch"
CONSISTENCY = "consistency-verified"


@dataclass(frozen=True)
class FixtureCheck:
    name: str
    status: str  # "ok" | "mismatch" | "consistency-verified"
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.status != MISMATCH


@dataclass(frozen=True)
class FixtureReport:
    checks: Tuple[FixtureCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def mismatches(self) -> List[FixtureCheck]:
        return [c for c in self.checks if not c.ok]

    def diff_lines(self) -> List[str]:
        return [
            f"{c.name}: expected {c.expected}, got {c.actual}"
            for c in self.mismatches
        ]


def fixtures_path() -> Path:
    """Location of the JSON file shipped with the package."""
    return Path(resources.files("ptf") / "data" / "fixtures.json")


def load_fixtures(path: Optional[str] = None) -> dict:
    p = Path(path) if path is not None else fixtures_path()
    if not p.exists():
        raise FileNotFoundError(f"fixture file not found: {p}")
    with open(p, "r") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "version" not in data:
        raise InvalidInputError(f"malformed fixture file: {p}")
    return data


def _check(name: str, expected, actual, status_ok: str = OK) -> FixtureCheck:
    status = status_ok if expected == actual else MISMATCH
    return FixtureCheck(name, status, str(expected), str(actual))


def _verify_counts(entries: Sequence[dict], threads: int) -> List[FixtureCheck]:
    checks: List[FixtureCheck] = []
    for e in entries:
        n, d, expected = e["n"], e["d"], e["count"]
        name = f"count[n={n},d={d}]"
        result = count_ptf(n, d, threads=threads)
        if e.get("consistency_only"):
            bc = verify_upper_bounds(result)
            ok = (
                result.count == expected
                and result.count % 2 == 0
                and bc.sharp_holds
                and bc.capacity_holds
                and bc.saks_holds
            )
            if ok:
                checks.append(
                    FixtureCheck(name, CONSISTENCY, str(expected), str(result.count))
                )
            else:
                detail = (
                    f"{result.count} (sharp={bc.sharp_holds} "
                    f"capacity={bc.capacity_holds} saks={bc.saks_holds})"
                )
                checks.append(FixtureCheck(name, MISMATCH, str(expected), detail))
            continue
        checks.append(_check(name, expected, result.count))
        if n <= ORACLE_MAX_N and "function-oracle" in e.get("methods", ()):
            checks.append(
                _check(f"oracle[n={n},d={d}]", expected, oracle_count_ptf(n, d).count)
            )
    return checks


def _verify_rationals(entries: Sequence[dict]) -> List[FixtureCheck]:
    checks: List[FixtureCheck] = []
    for e in entries:
        fn, args = e["name"], e["args"]
        expected = Fraction(e["value"])
        if fn == "lo_probability_exact":
            actual = lo_probability_exact(args["coefficients"], args["target"])
            label = f"lo_exact[a={tuple(args['coefficients'])},u={args['target']}]"
        elif fn == "independence_probability_exhaustive":
            actual = independence_probability_exhaustive(args["n"], args["d"], args["m"])
            label = f"exhaustive[n={args['n']},d={args['d']},m={args['m']}]"
        elif fn == "good_subset_fraction":
            actual = good_subset_fraction(args["n"], args["d"], args["m"])
            label = f"good_fraction[n={args['n']},d={args['d']},m={args['m']}]"
        else:
            raise InvalidInputError(f"unknown rational fixture: {fn}")
        checks.append(_check(label, expected, actual))
    return checks


def _verify_monte_carlo(entries: Sequence[dict]) -> List[FixtureCheck]:
    checks: List[FixtureCheck] = []
    for e in entries:
        fn, args = e["name"], e["args"]
        if fn == "mc_independence":
            cfg = ExperimentConfig(
                n=args["n"], d=args["d"], m=args["m"],
                trials=args["trials"], master_seed=args["master_seed"],
            )
            actual = mc_independence(cfg).successes
            label = (
                f"mc[n={cfg.n},d={cfg.d},m={cfg.m},"
                f"trials={cfg.trials},seed={cfg.master_seed}]"
            )
            checks.append(_check(label, e["successes"], actual))
        elif fn == "lo_empirical":
            rep = lo_empirical(
                args["coefficients"], args["target"], args["trials"], args["seed"]
            )
            label = (
                f"lo_mc[a={tuple(args['coefficients'])},u={args['target']},"
                f"trials={args['trials']},seed={args['seed']}]"
            )
            checks.append(_check(label, e["successes"], rep.successes))
        elif fn == "good_subset_fraction_sampled":
            actual = good_subset_fraction(
                args["n"], args["d"], args["m"],
                trials=args["trials"], seed=args["seed"],
            )
            label = (
                f"good_sampled[n={args['n']},d={args['d']},m={args['m']},"
                f"trials={args['trials']},seed={args['seed']}]"
            )
            checks.append(_check(label, Fraction(e["value"]), actual))
        else:
            raise InvalidInputError(f"unknown monte-carlo fixture: {fn}")
    return checks


def _verify_capacity(entries: Sequence[dict], threads: int) -> List[FixtureCheck]:
    checks: List[FixtureCheck] = []
    for e in entries:
        ps = PointSet([tuple(p) for p in e["points"]])
        rep = capacity_set(ps, e["d"], threads=threads)
        label = f"capacity[s={len(ps.points)},d={e['d']}]"
        checks.append(_check(label, e["count"], rep.count))
    return checks


def _verify_arrangements(entries: Sequence[dict], threads: int) -> List[FixtureCheck]:
    checks: List[FixtureCheck] = []
    for e in entries:
        A = Arrangement(e["dimension"], [(nrm, off) for nrm, off in e["hyperplanes"]])
        regions = count_regions(A, threads=threads).region_count
        subspaces = count_intersection_subspaces(A)
        checks.append(_check(f"regions[{e['name']}]", e["regions"], regions))
        checks.append(
            _check(
                f"subspaces[{e['name']}]", e["intersection_subspaces"], subspaces
            )
        )
    return checks


def verify_fixtures(path: Optional[str] = None, threads: int = 1) -> FixtureReport:
    """Recompute every fixture and compare against the frozen values.

    Entries marked ``consistency_only`` cannot be confirmed by the
    independent oracle; they are recomputed by the primary route and checked
    against the closed-form bounds, then reported as "consistency-verified".
    """
    data = load_fixtures(path)
    checks: List[FixtureCheck] = []
    checks += _verify_counts(data.get("counts", ()), threads)
    checks += _verify_rationals(data.get("rationals", ()))
    checks += _verify_monte_carlo(data.get("monte_carlo", ()))
    checks += _verify_capacity(data.get("capacity", ()), threads)
    checks += _verify_arrangements(data.get("arrangements", ()), threads)
    return FixtureReport(tuple(checks))
