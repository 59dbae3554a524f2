"""Command-line front end.

Exit codes: 0 certified / success, 1 inconclusive, 2 usage or input error.

Sweep rows get their own seed, ``row_seed(master, n, d, r)``: the first
8 bytes of ``sha256("sosident:<master>:<n>:<d>:<r>")`` read big-endian and
shifted right by one bit. Trial t of a row draws from the generator seeded
with ``[row_seed, t]``, so every row can be re-run on its own.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .binary import distinct_orbits, gram_invariant, linear_factors, orbit_decompositions
from .catalect import catalecticant
from .contact import (HessianMode, IdentifiabilityVerdict, generic_identifiability,
                      specific_identifiability)
from .errors import SosIdentError
from .gf import Modulus, default_modulus
from .polyring import HomogeneousPoly
from .secant import (DimensionVerdict, SecantParams, ambient_dim, expected_dim, generic_rank,
                     secant_dim_sample)

SWEEP_COLUMNS = ["n", "d", "r", "p", "seed", "expected_dim", "ambient_dim",
                 "terracini_rank", "hessian_rank", "target_rank", "verdict"]

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def row_seed(master: int, n: int, d: int, r: int) -> int:
    digest = hashlib.sha256(f"sosident:{master}:{n}:{d}:{r}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def parse_range(text: str) -> list[int]:
    """``"4,6,8"``, ``"2:6"`` (inclusive) or ``"4:12:2"`` (with step)."""
    values: list[int] = []
    text = text.strip()
    if not text:
        return values
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = [int(b) for b in part.split(":")]
            if len(bits) == 2:
                lo, hi, step = bits[0], bits[1], 1
            elif len(bits) == 3:
                lo, hi, step = bits
            else:
                raise UsageError(f"bad range {part!r}")
            if step <= 0:
                raise UsageError(f"range step must be positive in {part!r}")
            values.extend(range(lo, hi + 1, step))
        else:
            values.append(int(part))
    return values


def _modulus(args) -> Modulus:
    return Modulus(args.modulus) if args.modulus is not None else default_modulus()


def _emit(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _load_json_arg(value: str):
    """Inline JSON, or a path to a JSON file."""
    stripped = value.lstrip()
    if stripped.startswith(("[", "{")):
        return json.loads(value)
    return json.loads(Path(value).read_text(encoding="utf-8"))


# -- subcommands -----------------------------------------------------------


def cmd_identifiable(args) -> int:
    m = _modulus(args)
    if args.forms is not None:
        raw = _load_json_arg(args.forms)
        if not isinstance(raw, list) or not raw:
            raise UsageError("--forms must be a non-empty JSON list of polynomials")
        forms = [HomogeneousPoly.from_json(obj) for obj in raw]
        cert = specific_identifiability(forms, args.hessian, args.seed)
    else:
        _require(args, "n", "d", "r")
        params = SecantParams(args.n, args.d, args.r)
        rg = generic_rank(args.d, args.n)
        if args.r >= rg:
            _warn(f"r={args.r} is not below the expected generic rank {rg}")
        cert = generic_identifiability(params, m, args.seed, args.trials, args.hessian,
                                       force=args.force)
    _emit(cert.to_dict(), args.json)
    return EXIT_OK if cert.verdict is IdentifiabilityVerdict.CERTIFIED else EXIT_INCONCLUSIVE


def cmd_dimension(args) -> int:
    _require(args, "n", "d", "r")
    m = _modulus(args)
    params = SecantParams(args.n, args.d, args.r)
    rg = generic_rank(args.d, args.n)
    if args.r > rg:
        _warn(f"r={args.r} exceeds the expected generic rank {rg}; "
              "only the ambient-filling check is meaningful")
    report = secant_dim_sample(params, m, args.seed, args.trials)
    if report.observed_rank < min(report.expected_dim, report.ambient_dim):
        _warn(f"observed rank {report.observed_rank} below expected "
              f"{min(report.expected_dim, report.ambient_dim)}")
    _emit(report.to_dict(), args.json)
    return EXIT_OK if report.verdict is DimensionVerdict.NON_DEFECTIVE_CERTIFIED else EXIT_INCONCLUSIVE


def _sweep_row(task) -> dict:
    check, n, d, r, p, seed, trials, hessian = task
    row = {"n": n, "d": d, "r": r, "p": p, "seed": seed, "expected_dim": "",
           "ambient_dim": "", "terracini_rank": "", "hessian_rank": "", "target_rank": "",
           "verdict": ""}
    try:
        params = SecantParams(n, d, r)
        row["expected_dim"] = expected_dim(params)
        row["ambient_dim"] = ambient_dim(n, d)
        if check == "identifiable":
            cert = generic_identifiability(params, Modulus(p), seed, trials, hessian)
            row.update(terracini_rank=cert.terracini_rank, hessian_rank=cert.hessian_rank,
                       target_rank=cert.target_rank, verdict=cert.verdict.value)
        else:
            rep = secant_dim_sample(params, Modulus(p), seed, trials)
            row.update(terracini_rank=rep.observed_rank, verdict=rep.verdict.value)
    except (SosIdentError, ValueError) as exc:
        row["verdict"] = f"Error: {type(exc).__name__}: {exc}"
    return row


def sweep_tasks(check: str, ns, ds, rs, p: int, master_seed: int, trials: int,
                hessian: str) -> list[tuple]:
    tasks = []
    for n in sorted(set(ns)):
        for d in sorted(set(ds)):
            if rs is not None:
                r_values = sorted(set(rs))
            elif d % 2 or d < 2 or n < 1:
                r_values = [1]          # yields a per-row error
            else:
                rg = generic_rank(d, n)
                r_values = range(1, rg) if check == "identifiable" else range(1, rg + 1)
            for r in r_values:
                tasks.append((check, n, d, r, p, row_seed(master_seed, n, d, r), trials, hessian))
    return tasks


def run_sweep(tasks, workers: int = 1):
    """Yield rows in task order; rows are computed concurrently when workers > 1."""
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield _sweep_row(t)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_sweep_row, tasks)


def cmd_sweep(args) -> int:
    m = _modulus(args)
    ns = parse_range(args.n_range) if args.n_range is not None else ([args.n] if args.n is not None else [])
    ds = parse_range(args.d_range) if args.d_range is not None else ([args.d] if args.d is not None else [])
    if args.r_range is not None:
        rs = parse_range(args.r_range)
    else:
        rs = [args.r] if args.r is not None else None
    tasks = sweep_tasks(args.check, ns, ds, rs, m.p, args.seed, args.trials, args.hessian)
    rows = []
    csv_file = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else None
    try:
        writer = None
        if csv_file is not None:
            writer = csv.DictWriter(csv_file, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
            writer.writeheader()
            csv_file.flush()
        for row in run_sweep(tasks, args.workers):
            rows.append(row)
            if writer is not None:
                writer.writerow(row)
                csv_file.flush()
    finally:
        if csv_file is not None:
            csv_file.close()
    if args.json or not args.csv:
        _emit(rows, args.json)
    return EXIT_OK


def cmd_binary_orbits(args) -> int:
    _require(args, "factors")
    m = _modulus(args)
    raw = _load_json_arg(args.factors)
    if not isinstance(raw, list) or not all(isinstance(x, list) for x in raw):
        raise UsageError("--factors must be a JSON list of [a, b] pairs")
    factors = linear_factors(raw, m)
    decs = orbit_decompositions(factors)
    product = factors[0]
    for l in factors[1:]:
        product = product * l
    rows = []
    for k, dec in enumerate(decs):
        rows.append({
            "index": k,
            "summands": [str(g) for g in dec.summands],
            "gram_hash": gram_invariant(dec).digest(),
        })
    all_distinct = all(
        distinct_orbits(decs[i], decs[j]).value == "CertifiedDistinct"
        for i in range(len(decs)) for j in range(i + 1, len(decs)))
    _emit({"p": m.p, "d": len(factors), "form": str(product), "count": len(decs),
           "all_distinct": all_distinct, "decompositions": rows}, args.json)
    return EXIT_OK if all_distinct else EXIT_INCONCLUSIVE


def cmd_catalecticant(args) -> int:
    m = _modulus(args)
    if args.poly is not None:
        text = Path(args.poly).read_text(encoding="utf-8")
        f = HomogeneousPoly.from_json(text)
    elif args.random:
        _require(args, "n", "d")
        f = HomogeneousPoly.random(args.n, args.d, m, np.random.default_rng([args.seed]))
    else:
        raise UsageError("catalecticant needs --poly FILE or --random")
    i = args.i if args.i is not None else f.degree // 2
    cat = catalecticant(f, i)
    if args.dump:
        sys.stdout.write(cat.matrix.dump())
        return EXIT_OK
    _emit({"n": f.n, "d": f.degree, "p": f.p, "i": i, "rows": cat.matrix.rows,
           "cols": cat.matrix.cols, "rank": cat.rank}, args.json)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of variables minus one")
    common.add_argument("--d", type=int, help="degree of the form (even)")
    common.add_argument("--r", type=int, help="number of squares")
    common.add_argument("--modulus", type=int, default=None,
                        help="prime modulus (default: $SOSIDENT_MODULUS or 101)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=3)
    common.add_argument("--hessian", choices=[m.value for m in HessianMode], default="combo")
    common.add_argument("--json", metavar="PATH", help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="sosident",
        description="Certify identifiability and dimensions for sums of squares over Z/p.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identifiable", parents=[common],
                       help="generic (or, with --forms, specific) O(r)-identifiability")
    p.add_argument("--forms", metavar="JSON", help="list of polynomials (file or inline JSON)")
    p.add_argument("--force", action="store_true",
                   help="run even when r squares overfill the ambient space")
    p.set_defaults(func=cmd_identifiable)

    p = sub.add_parser("dimension", parents=[common], help="sampled secant dimension")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("sweep", parents=[common], help="run a grid of (n, d, r) cases")
    p.add_argument("--check", choices=["identifiable", "dimension"], default="identifiable")
    p.add_argument("--n-range", help="e.g. 2:6 or 2,3,5")
    p.add_argument("--d-range", help="e.g. 4:12:2 or 4,6,8")
    p.add_argument("--r-range", help="default: every r below (identifiable) or up to "
                                     "(dimension) the expected generic rank")
    p.add_argument("--csv", metavar="PATH", help="write CSV rows here, flushed per row")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("binary-orbits", parents=[common],
                       help="two-square decompositions of a product of binary linear forms")
    p.add_argument("--factors", metavar="JSON", help="[[a, b], ...] meaning a*x + b*y")
    p.set_defaults(func=cmd_binary_orbits)

    p = sub.add_parser("catalecticant", parents=[common], help="catalecticant rank of a form")
    p.add_argument("--poly", metavar="FILE", help="polynomial JSON file")
    p.add_argument("--random", action="store_true", help="use a random form of degree --d")
    p.add_argument("--i", type=int, help="catalecticant index (default d/2)")
    p.add_argument("--dump", action="store_true", help="print the matrix instead of a report")
    p.set_defaults(func=cmd_catalecticant)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SosIdentError, UsageError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
