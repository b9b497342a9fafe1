"""Batch command-line front end for the whole package.

Every subcommand prints one machine-readable payload to standard output
(JSON by default, CSV via ``--format csv``) and a run manifest to standard
error (or to ``--manifest FILE``).  The manifest records the command line,
library version, seeds, precision settings, wall time, and a checksum of
the payload bytes, so identical manifests imply identical outputs.

Exit codes: 0 success, 1 verification failure (a scan with failing pairs, a
violated bound, a fixture mismatch), 2 usage error, 3 resource limit.

Payloads never include wall-clock times or thread counts, so a rerun with
the same seed and a different ``--threads`` value is byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__, bounds, intervals
from .arrangements import (
    count_intersection_subspaces,
    count_regions,
    parse_arrangement,
    region_upper_bound,
)
from .capacity import PointSet, capacity_set, parse_points_csv
from .errors import (
    InvalidInputError,
    ResourceLimitError,
    VerificationError,
)
from .fixtures import load_fixtures, verify_fixtures
from .linalg_exact import to_fraction
from .ptf_count import count_ptf, oracle_count_ptf, verify_upper_bounds
from .random_tensors import (
    EXACT_LO_MAX_N,
    ExperimentConfig,
    good_subset_fraction,
    independence_probability_exhaustive,
    littlewood_offord_P,
    lo_empirical,
    lo_probability_exact,
    mc_independence,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

DEFAULT_SEED = 20260822  # fixed default for every randomized subcommand
_INT64_MAX = 2**63 - 1


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def jsonable(obj):
    """Map package values onto JSON types without losing precision.

    Integers beyond 64-bit range and all rationals become decimal strings;
    tuples become lists; dataclasses become objects.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, (float, str)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > _INT64_MAX else obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def _render_json(payload: dict) -> str:
    return json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"


def _csv_cell(value) -> str:
    v = jsonable(value)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float, str)):
        return str(v)
    return json.dumps(v, sort_keys=True)


def _render_csv(payload: dict) -> str:
    """CSV encoding of the same values as the JSON payload.

    A payload with a list of per-item rows under "entries" becomes a table
    (one row per item); anything else becomes a two-line header/value sheet
    with nested keys flattened by dots.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    entries = payload.get("entries")
    if isinstance(entries, (list, tuple)) and entries:
        head = list(entries[0].keys()) if isinstance(entries[0], dict) else None
        if head is not None:
            w.writerow(head)
            for e in entries:
                w.writerow(_csv_cell(e.get(k)) for k in head)
            return buf.getvalue()
    flat: Dict[str, object] = {}

    def _flatten(prefix: str, obj) -> None:
        if isinstance(obj, dict):
            for k, v in obj.items():
                _flatten(f"{prefix}.{k}" if prefix else str(k), v)
        else:
            flat[prefix] = obj

    _flatten("", payload)
    keys = sorted(flat)
    w.writerow(keys)
    w.writerow(_csv_cell(flat[k]) for k in keys)
    return buf.getvalue()


@dataclasses.dataclass(frozen=True)
class RunManifest:
    command_line: Tuple[str, ...]
    version: str
    seeds: Tuple[int, ...]
    precision: Dict[str, int]
    wall_time_s: float
    output_sha256: str


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (payload, ok, seeds)
# ---------------------------------------------------------------------------


def _bounds_check_payload(bc) -> dict:
    return {
        "sharp_upper": bc.sharp_upper,
        "capacity_upper_log2": bc.capacity_upper_log2,
        "saks_lower_log2": bc.saks_lower_log2,
        "sharp_holds": bc.sharp_holds,
        "capacity_holds": bc.capacity_holds,
        "saks_holds": bc.saks_holds,
        "sharp_slack": bc.sharp_slack,
    }


def _cmd_count(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    if args.oracle:
        res = oracle_count_ptf(args.n, args.d)
    else:
        res = count_ptf(args.n, args.d, threads=args.threads)
    bc = verify_upper_bounds(res)
    ok = bc.sharp_holds and bc.capacity_holds and bc.saks_holds
    payload = {
        "n": res.n,
        "d": res.d,
        "count": res.count,
        "method": res.method,
        "bounds": _bounds_check_payload(bc),
    }
    return payload, ok, ()


def _cmd_bounds(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    count = args.count if args.count is not None else None
    rep = bounds.main_theorem_bounds(
        args.n, args.d, C=to_fraction(args.C), count=count
    )
    payload = {
        "name": rep.name,
        "inputs": rep.inputs,
        "values": rep.values,
        "comparisons": {label: ok for label, ok in rep.comparisons},
    }
    return payload, rep.all_hold, ()


def _scan_entry_payload(case: str, e) -> dict:
    return {
        "case": case,
        "params": list(e.params),
        "holds": e.holds,
        "precision_bits": e.precision_bits,
        "margin_lo": e.margin_lo,
    }


def _cmd_scan(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    rep = bounds.run_scan(args.case)
    payload = {
        "case": rep.case,
        "grid": rep.grid,
        "pairs_checked": rep.pairs_checked,
        "failure_count": len(rep.failures),
        "failures": [list(e.params) for e in rep.failures],
        "precision_bits": rep.precision_bits,
        "details": rep.details,
        "entries": [_scan_entry_payload(rep.case, e) for e in rep.entries],
    }
    return payload, rep.holds, ()


def _cmd_regions(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        path = Path(args.file)
        if not path.exists():
            raise InvalidInputError(f"arrangement file not found: {path}")
        text = path.read_text()
    A = parse_arrangement(text)
    rep = count_regions(A, threads=args.threads)
    p, m = A.p, A.dimension
    bound = region_upper_bound(p, m, A.central) if p >= m else None
    ok = bound is None or rep.region_count <= bound
    payload = {
        "dimension": m,
        "hyperplanes": p,
        "central": A.central,
        "region_count": rep.region_count,
        "method": rep.method,
        "region_upper_bound": bound,
        "bound_holds": ok,
    }
    if args.subspaces:
        payload["intersection_subspaces"] = count_intersection_subspaces(A)
    return payload, ok, ()


def _parse_coeffs(raw: str) -> List[Fraction]:
    try:
        return [to_fraction(part.strip()) for part in raw.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad coefficient list {raw!r}: {exc}") from exc


def _lo_payload(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    """Shared by `ptf lo` and `ptf mc --kind lo`."""
    coeffs = _parse_coeffs(args.coeffs)
    target = to_fraction(args.target)
    n = len(coeffs)
    if getattr(args, "n", None) is not None and args.n != n:
        raise InvalidInputError(
            f"--n {args.n} disagrees with {n} coefficients"
        )
    payload: dict = {
        "coefficients": coeffs,
        "target": target,
        "n": n,
        "bound_P_n": littlewood_offord_P(n),
        "bound_P_n_plus_1": littlewood_offord_P(n + 1),
    }
    ok = True
    seeds: Tuple[int, ...] = ()
    want_exact = args.exact or args.trials is None
    if want_exact:
        if n > EXACT_LO_MAX_N:
            raise ResourceLimitError(
                f"exact enumeration supports n <= {EXACT_LO_MAX_N}, got {n}"
            )
        exact = lo_probability_exact(coeffs, target)
        payload["exact"] = exact
        payload["bound_holds"] = exact <= littlewood_offord_P(n)
        if target != 0:
            payload["bound_holds"] = (
                payload["bound_holds"] and exact <= littlewood_offord_P(n + 1)
            )
        ok = payload["bound_holds"]
    if args.trials is not None:
        seed = args.seed if args.seed is not None else DEFAULT_SEED
        rep = lo_empirical(coeffs, target, args.trials, seed)
        payload["monte_carlo"] = {
            "successes": rep.successes,
            "trials": rep.trials,
            "estimate": rep.estimate,
            "ci_low": rep.ci_low,
            "ci_high": rep.ci_high,
            "seed": rep.seed,
            "exact": rep.exact,
        }
        seeds = (seed,)
    return payload, ok, seeds


def _cmd_lo(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    return _lo_payload(args)


def _cmd_mc(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    if args.kind == "lo":
        if args.coeffs is None or args.target is None:
            raise InvalidInputError("--kind lo requires --coeffs and --target")
        return _lo_payload(args)
    if args.kind == "subsets":
        if args.n is None or args.d is None or args.m is None:
            raise InvalidInputError("--kind subsets requires --n, --d, --m")
        if args.trials is None:
            frac = good_subset_fraction(args.n, args.d, args.m)
            payload = {
                "kind": "subsets",
                "n": args.n,
                "d": args.d,
                "m": args.m,
                "fraction": frac,
                "method": "exhaustive-enumeration",
            }
            return payload, True, ()
        seed = args.seed if args.seed is not None else DEFAULT_SEED
        frac = good_subset_fraction(
            args.n, args.d, args.m, trials=args.trials, seed=seed
        )
        payload = {
            "kind": "subsets",
            "n": args.n,
            "d": args.d,
            "m": args.m,
            "fraction": frac,
            "trials": args.trials,
            "seed": seed,
            "method": "seeded-monte-carlo",
        }
        return payload, True, (seed,)
    # kind == independence
    if args.n is None or args.d is None or args.m is None:
        raise InvalidInputError("--kind independence requires --n, --d, --m")
    if args.trials is None:
        raise InvalidInputError("--kind independence requires --trials")
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    cfg = ExperimentConfig(
        n=args.n, d=args.d, m=args.m, trials=args.trials, master_seed=seed
    )
    rep = mc_independence(cfg, threads=args.threads, mode=args.mode)
    payload = {
        "kind": "independence",
        "n": cfg.n,
        "d": cfg.d,
        "m": cfg.m,
        "trials": rep.trials,
        "seed": rep.seed,
        "mode": args.mode,
        "successes": rep.successes,
        "estimate": rep.estimate,
        "ci_low": rep.ci_low,
        "ci_high": rep.ci_high,
    }
    ok = True
    if args.exact:
        exact = independence_probability_exhaustive(cfg.n, cfg.d, cfg.m)
        payload["exact"] = exact
        payload["ci_covers_exact"] = rep.ci_low <= float(exact) <= rep.ci_high
        ok = payload["ci_covers_exact"]
    return payload, ok, (seed,)


def _square_points() -> PointSet:
    return PointSet([(1, 1), (1, -1), (-1, 1), (-1, -1)])


def _cube_points(n: int) -> PointSet:
    if not 1 <= n <= 4:
        raise InvalidInputError("--cube supports 1 <= n <= 4 (point cap 20)")
    pts = []
    for bits in range(1 << n):
        pts.append(tuple(-1 if (bits >> i) & 1 else 1 for i in range(n)))
    return PointSet(pts)


def _cmd_capacity(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    sources = [args.points is not None, args.square, args.cube is not None]
    if sum(sources) != 1:
        raise InvalidInputError(
            "exactly one of --points FILE, --square, --cube N is required"
        )
    if args.square:
        ps = _square_points()
    elif args.cube is not None:
        ps = _cube_points(args.cube)
    else:
        path = Path(args.points)
        if not path.exists():
            raise InvalidInputError(f"point file not found: {path}")
        ps = parse_points_csv(path.read_text())
    rep = capacity_set(ps, args.d, threads=args.threads)
    payload = {
        "set_size": rep.set_size,
        "degree": rep.degree,
        "monomials": rep.monomials,
        "lift_dimension": rep.lift_dimension,
        "count": rep.count,
        "capacity": list(rep.capacity),
        "bounds": rep.bounds,
        "comparisons": {label: ok for label, ok in rep.comparisons},
    }
    return payload, rep.all_hold, ()


def _cmd_fixtures(args) -> Tuple[dict, bool, Tuple[int, ...]]:
    if not args.verify:
        data = load_fixtures(args.path)
        return data, True, ()
    rep = verify_fixtures(path=args.path, threads=args.threads)
    payload = {
        "ok": rep.ok,
        "checks": [
            {
                "name": c.name,
                "status": c.status,
                "expected": c.expected,
                "actual": c.actual,
            }
            for c in rep.checks
        ],
        "diffs": rep.diff_lines(),
    }
    return payload, rep.ok, ()


_HANDLERS = {
    "count": _cmd_count,
    "bounds": _cmd_bounds,
    "scan": _cmd_scan,
    "regions": _cmd_regions,
    "mc": _cmd_mc,
    "capacity": _cmd_capacity,
    "lo": _cmd_lo,
    "fixtures": _cmd_fixtures,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptf",
        description=(
            "Exact counting, certified bounds, and reproducible experiments "
            "for Boolean polynomial threshold functions."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "csv"), default="json",
        help="payload encoding for standard output (default json)",
    )
    common.add_argument(
        "--manifest", metavar="FILE", default=None,
        help="write the run manifest to FILE instead of standard error",
    )
    common.add_argument(
        "--threads", type=int, default=1,
        help="worker threads where supported; results are independent of it",
    )
    sub = parser.add_subparsers(dest="cmd", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser(
        "count", parents=[common],
        help="exact number of degree-d polynomial threshold functions",
    )
    p.add_argument("--n", type=int, required=True, help="cube dimension")
    p.add_argument("--d", type=int, required=True, help="polynomial degree")
    p.add_argument(
        "--oracle", action="store_true",
        help="use the exhaustive function oracle instead of region counting",
    )

    p = sub.add_parser(
        "bounds", parents=[common],
        help="closed-form count bounds with certified log2 values",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument(
        "--C", default="1",
        help="constant in the lower-bound shrink factor (rational, default 1)",
    )
    p.add_argument(
        "--count", type=int, default=None,
        help="optional exact count to sandwich-check against the bounds",
    )

    p = sub.add_parser(
        "scan", parents=[common],
        help="re-verify one numeric inequality family (1, 3, 4, 5, A1, A2, A3)",
    )
    p.add_argument(
        "--case", required=True,
        choices=("1", "3", "4", "5", "A1", "A2", "A3"),
        help="which inequality family to scan",
    )

    p = sub.add_parser(
        "regions", parents=[common],
        help="exact region count of a hyperplane arrangement from a file",
    )
    p.add_argument(
        "--file", required=True,
        help="arrangement text file ('-' for standard input): "
        "header 'm p central|affine', then p rows of m normal coordinates "
        "plus an offset",
    )
    p.add_argument(
        "--subspaces", action="store_true",
        help="also count distinct intersection subspaces",
    )

    p = sub.add_parser(
        "mc", parents=[common],
        help="seeded randomized experiments (independence, lo, subsets)",
    )
    p.add_argument(
        "--kind", choices=("independence", "lo", "subsets"),
        default="independence",
    )
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument(
        "--seed", type=int, default=None,
        help=f"master seed (default {DEFAULT_SEED})",
    )
    p.add_argument(
        "--mode", choices=("rational", "gf2"), default="rational",
        help="independence test field (exact rationals or GF(2) screen)",
    )
    p.add_argument("--coeffs", default=None, help="comma-separated rationals")
    p.add_argument("--target", default=None, help="target value (rational)")
    p.add_argument(
        "--exact", action="store_true",
        help="also compute the exact value where enumeration is feasible",
    )

    p = sub.add_parser(
        "lo", parents=[common],
        help="signed-sum hit probability: exact value and sharp bound",
    )
    p.add_argument("--coeffs", required=True, help="comma-separated rationals")
    p.add_argument("--target", required=True, help="target value (rational)")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument(
        "--seed", type=int, default=None,
        help=f"Monte Carlo seed (default {DEFAULT_SEED})",
    )
    p.add_argument("--exact", action="store_true", default=False)

    p = sub.add_parser(
        "capacity", parents=[common],
        help="exact dichotomy count of a finite point set under degree-d lifts",
    )
    p.add_argument("--points", default=None, help="CSV file, one point per line")
    p.add_argument(
        "--square", action="store_true",
        help="use the four sign vectors of the Boolean square",
    )
    p.add_argument(
        "--cube", type=int, default=None, metavar="N",
        help="use all 2^N sign vectors (N <= 4)",
    )
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser(
        "fixtures", parents=[common],
        help="print or re-verify the frozen regression fixtures",
    )
    p.add_argument(
        "--verify", action="store_true",
        help="recompute every fixture and compare",
    )
    p.add_argument(
        "--path", default=None,
        help="alternative fixtures JSON file (default: packaged file)",
    )

    return parser


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _emit_manifest(manifest: RunManifest, path: Optional[str]) -> None:
    text = json.dumps(jsonable(manifest), indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stderr.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)

    start = time.perf_counter()
    try:
        payload, ok, seeds = _HANDLERS[args.cmd](args)
    except (InvalidInputError, FileNotFoundError) as exc:
        print(f"ptf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"ptf: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationError as exc:
        print(f"ptf: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    wall = time.perf_counter() - start

    text = _render_json(payload) if args.format == "json" else _render_csv(payload)
    sys.stdout.write(text)
    manifest = RunManifest(
        command_line=tuple(["ptf"] + argv),
        version=__version__,
        seeds=tuple(seeds),
        precision={"max_precision_bits": intervals.max_precision_bits()},
        wall_time_s=round(wall, 6),
        output_sha256=hashlib.sha256(text.encode()).hexdigest(),
    )
    _emit_manifest(manifest, args.manifest)
    return EXIT_OK if ok else EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
