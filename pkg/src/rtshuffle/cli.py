"""Command-line surface: reproducible experiments emitted as CSV or JSON.

Every output file starts with a header (comment lines in CSV, a meta
object in JSON) carrying the package version, the echoed configuration,
and the arithmetic mode; identical configurations produce byte-identical
files.  Reals are rendered with 17 significant digits, partitions as
comma-joined parts.

Exit codes: 0 success, 1 verification failure, 2 argument error,
3 infeasible size.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .characters import mn_character
from .errors import SizeLimitError
from .partitions import enumerate_partitions
from .permstats import SimConfig, empirical_fixed_point_hist, small_cycle_log_margin
from .profiles import limit_profile, poisson_pmf
from .verify import CHECK_NAMES, FAULT_CHARACTER_CACHE, run_verification
from .walk import (
    MODE_EXACT,
    MODE_FLOAT,
    WalkParams,
    mixing_time_steps,
    profile_curve,
    remainder_bound,
)

__version__ = "0.1.0"

CLASSTABLE_M_MAX = 8


def _fmt_real(x) -> str:
    return f"{float(x):.17g}"


def _fmt_partition(parts) -> str:
    return ",".join(str(p) for p in parts)


def _meta(args: argparse.Namespace, **extra) -> dict:
    skip = {"func", "out", "format"}
    echo = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip and value is not None
    }
    meta = {"version": __version__, "command": args.command}
    meta.update({k: v for k, v in echo.items() if k != "command"})
    meta.update(extra)
    return meta


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(args, meta: dict, fieldnames: list[str], rows: list[dict], trailer: dict | None = None):
    stream, should_close = _open_out(args.out)
    try:
        if args.format == "json":
            doc = {"meta": meta, "rows": rows}
            if trailer:
                doc.update(trailer)
            json.dump(doc, stream, indent=2, default=str)
            stream.write("\n")
        else:
            for key, value in meta.items():
                stream.write(f"# {key}={value}\n")
            writer = csv.DictWriter(stream, fieldnames=fieldnames)
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
            if trailer:
                for key, value in trailer.items():
                    stream.write(f"# {key}={value}\n")
    finally:
        if should_close:
            stream.close()


def _c_grid(c_min: float, c_max: float, c_step: float) -> list[float]:
    if c_step <= 0:
        raise ValueError(f"c-step must be positive, got {c_step}")
    if c_max < c_min:
        raise ValueError(f"empty window grid: c-min={c_min} > c-max={c_max}")
    count = int((c_max - c_min) / c_step + 1e-9) + 1
    return [c_min + i * c_step for i in range(count)]


def _cmd_profile(args) -> int:
    grid = _c_grid(args.c_min, args.c_max, args.c_step)
    points = profile_curve(args.n, grid, args.trunc, args.mode)
    rows = [
        {
            "n": p.n,
            "c": _fmt_real(p.c),
            "t": p.t,
            "tv_main": _fmt_real(p.tv_main),
            "error_bound": _fmt_real(p.error_bound),
            "tv_limit": _fmt_real(p.tv_limit),
            "mode": p.mode,
        }
        for p in points
    ]
    _emit(args, _meta(args, mode=args.mode), list(rows[0].keys()), rows)
    return 0


def _cmd_limit(args) -> int:
    grid = _c_grid(args.c_min, args.c_max, args.c_step)
    rows = [{"c": _fmt_real(c), "tv_limit": _fmt_real(limit_profile(c))} for c in grid]
    _emit(args, _meta(args), ["c", "tv_limit"], rows)
    return 0


def _cmd_simulate(args) -> int:
    t = args.t if args.t is not None else mixing_time_steps(args.n, args.c)
    cfg = SimConfig(n=args.n, t=t, sample_count=args.samples, seed=args.seed)
    hist = empirical_fixed_point_hist(cfg, ref_rate=args.ref_rate)
    rows = [
        {
            "m": m,
            "count": count,
            "empirical_p": _fmt_real(count / cfg.sample_count),
            "reference_p": _fmt_real(poisson_pmf(args.ref_rate, m)),
        }
        for m, count in hist.counts.items()
    ]
    _emit(
        args,
        _meta(args, t=t),
        ["m", "count", "empirical_p", "reference_p"],
        rows,
        trailer={"tv": _fmt_real(hist.tv)},
    )
    return 0


def _cmd_bounds(args) -> int:
    t = args.t if args.t is not None else mixing_time_steps(args.n, args.c)
    params = WalkParams(n=args.n, t=t)
    rows = []
    for m in _int_list(args.m_grid):
        rows.append(
            {
                "quantity": "remainder",
                "n": args.n,
                "t": t,
                "M": m,
                "j": "",
                "value": _fmt_real(remainder_bound(params, m)),
            }
        )
    for j in _int_list(args.j_grid):
        rows.append(
            {
                "quantity": "small-cycle-margin",
                "n": args.n,
                "t": "",
                "M": "",
                "j": j,
                "value": _fmt_real(small_cycle_log_margin(args.n, j)),
            }
        )
    if not rows:
        raise ValueError("nothing to compute: both --m-grid and --j-grid are empty")
    _emit(args, _meta(args, t=t), ["quantity", "n", "t", "M", "j", "value"], rows)
    return 0


def _cmd_classtable(args) -> int:
    if args.m > CLASSTABLE_M_MAX:
        raise SizeLimitError(f"classtable supports m <= {CLASSTABLE_M_MAX}, got {args.m}")
    classes = enumerate_partitions(args.m)
    header = ["partition"] + [_fmt_partition(mu) for mu in classes]
    rows = []
    for lam in classes:
        row = {"partition": _fmt_partition(lam)}
        for mu in classes:
            row[_fmt_partition(mu)] = mn_character(lam, mu)
        rows.append(row)
    _emit(args, _meta(args), header, rows)
    return 0


def _cmd_verify(args) -> int:
    report = run_verification(
        only=args.only,
        n=args.n,
        j=args.j,
        inject_fault=args.inject_fault,
    )
    report["version"] = __version__
    stream, should_close = _open_out(args.out)
    try:
        if args.format == "json":
            json.dump(report, stream, indent=2, default=str)
            stream.write("\n")
        else:
            for check in report["checks"]:
                status = "PASS" if check["passed"] else "FAIL"
                stream.write(f"{status} {check['name']} ({check['cases']} cases)\n")
                for failure in check["failures"]:
                    stream.write(f"    {failure['params']}: {failure['detail']}\n")
            stream.write(("PASS" if report["passed"] else "FAIL") + " overall\n")
    finally:
        if should_close:
            stream.close()
    return 0 if report["passed"] else 1


def _int_list(raw: str) -> list[int]:
    if not raw:
        return []
    try:
        return [int(chunk) for chunk in raw.split(",")]
    except ValueError as exc:
        raise ValueError(f"expected comma-separated integers, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtshuffle",
        description="Mixing analysis of the random-transposition shuffle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    profile = sub.add_parser("profile", help="certified distance curve over a c grid")
    profile.add_argument("--n", type=int, required=True)
    profile.add_argument("--c-min", type=float, required=True)
    profile.add_argument("--c-max", type=float, required=True)
    profile.add_argument("--c-step", type=float, required=True)
    profile.add_argument("--trunc", type=int, required=True, metavar="M")
    profile.add_argument("--mode", choices=(MODE_EXACT, MODE_FLOAT), default=MODE_EXACT)
    profile.set_defaults(func=_cmd_profile)

    limit = sub.add_parser("limit", help="limiting profile over a c grid")
    limit.add_argument("--c-min", type=float, required=True)
    limit.add_argument("--c-max", type=float, required=True)
    limit.add_argument("--c-step", type=float, required=True)
    limit.set_defaults(func=_cmd_limit)

    simulate = sub.add_parser("simulate", help="Monte Carlo fixed-point histogram")
    simulate.add_argument("--n", type=int, required=True)
    when = simulate.add_mutually_exclusive_group(required=True)
    when.add_argument("--t", type=int)
    when.add_argument("--c", type=float)
    simulate.add_argument("--samples", type=int, default=10000)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--ref-rate", type=float, default=1.0)
    simulate.set_defaults(func=_cmd_simulate)

    bounds = sub.add_parser("bounds", help="remainder and rarity-margin diagnostics")
    bounds.add_argument("--n", type=int, required=True)
    when = bounds.add_mutually_exclusive_group(required=True)
    when.add_argument("--t", type=int)
    when.add_argument("--c", type=float)
    bounds.add_argument("--m-grid", default="2,4,6,8")
    bounds.add_argument("--j-grid", default="")
    bounds.set_defaults(func=_cmd_bounds)

    classtable = sub.add_parser("classtable", help="full character table as CSV")
    classtable.add_argument("--m", type=int, required=True)
    classtable.set_defaults(func=_cmd_classtable)

    verify = sub.add_parser("verify", help="run the exact identity checks")
    verify.add_argument("--only", choices=CHECK_NAMES)
    verify.add_argument("--n", type=int)
    verify.add_argument("--j", type=int)
    verify.add_argument("--inject-fault", choices=(FAULT_CHARACTER_CACHE,))
    verify.set_defaults(func=_cmd_verify)

    for p in (profile, limit, simulate, bounds, classtable, verify):
        p.add_argument("--out", default="-", help="output path, - for stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
