"""Command-line front end.

Exit codes: 0 success, 1 acceptance (or cross-check) failure, 2 usage error.
Reports go to stdout (or ``--output``), progress to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

SUCCESS, FAILURE, USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    threads: int = 1
    output_format: str = "csv"
    output_path: str | None = None


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _fraction_str(x) -> str:
    return f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else repr(x)


def _add_common(p: argparse.ArgumentParser, fmt: str = "csv") -> None:
    p.add_argument("--format", dest="output_format", choices=("csv", "json"), default=fmt)
    p.add_argument("--output", dest="output_path", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadmoments", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="smallest prime factor table")
    p.add_argument("--limit", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("kronecker", help="Kronecker symbol (A/N)")
    p.add_argument("a", type=int, metavar="A")
    p.add_argument("n", type=int, metavar="N")

    p = sub.add_parser("charsum", help="sum_{n<=Y} (D/n)")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    _add_common(p)

    for name in ("moment", "moment8d"):
        p = sub.add_parser(name, help="exact 2k-th moment of character sums")
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--x", type=int, required=True)
        p.add_argument("--y", type=int, required=True)
        if name == "moment":
            p.add_argument("--method", choices=("direct", "decomposed", "both"), default="direct")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        _add_common(p)

    p = sub.add_parser("flatsum", help="sum of (d/n) over fundamental |d| <= z")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--density", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("mainterm", help="T_k(Y)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_common(p)

    p = sub.add_parser("mainterm-scan", help="T_k(Y) over a geometric grid of Y")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--y-min", type=int, required=True)
    p.add_argument("--y-max", type=int, required=True)
    p.add_argument("--ratio", type=float, default=2.0)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_common(p)

    p = sub.add_parser("euler-check", help="compare the Dirichlet series of f with its Euler product")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", required=True, help='comma separated shifts, e.g. "1.5,1.7"')
    p.add_argument("--coeff-limit", type=int, required=True)
    p.add_argument("--prime-limit", type=int, required=True)
    _add_common(p, "json")

    p = sub.add_parser("fit", help="fit T_k/Y^k against powers of log Y from a mainterm-scan CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--degree", type=int, required=True)
    _add_common(p, "json")

    p = sub.add_parser("constants", help="degree bookkeeping for k")
    p.add_argument("--k", type=int, required=True)
    _add_common(p, "json")

    p = sub.add_parser("accept", help="run the acceptance battery")
    p.add_argument("--suite", choices=("primary",), default="primary")
    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> RunConfig:
    def need(cond: bool, flag: str, msg: str) -> None:
        if not cond:
            parser.error(f"argument {flag}: {msg}")

    cmd = args.command
    params = {k: v for k, v in vars(args).items() if k not in ("command", "output_format", "output_path", "threads")}
    threads = getattr(args, "threads", 1)
    need(threads >= 1, "--threads", "must be >= 1")

    if cmd == "sieve":
        need(args.limit >= 2, "--limit", "must be >= 2")
    elif cmd == "kronecker":
        need(args.n >= 1, "N", "must be >= 1")
    elif cmd == "charsum":
        need(args.disc != 0 and args.disc % 4 in (0, 1) and not (args.disc > 0 and math.isqrt(args.disc) ** 2 == args.disc),
             "--disc", "must be a non-square integer = 0 or 1 mod 4")
        need(args.y >= 1, "--y", "must be >= 1")
    elif cmd in ("moment", "moment8d"):
        need(args.k >= 1, "--k", "must be >= 1")
        need(args.x >= (3 if cmd == "moment" else 1), "--x", f"must be >= {3 if cmd == 'moment' else 1}")
        need(args.y >= 1, "--y", "must be >= 1")
    elif cmd == "flatsum":
        need(args.n >= 1, "--n", "must be >= 1")
        need(args.z >= 1, "--z", "must be >= 1")
        need(args.density is None or args.density > 0, "--density", "must be positive")
    elif cmd == "mainterm":
        need(args.k >= 1, "--k", "must be >= 1")
        need(args.y >= 1, "--y", "must be >= 1")
        if args.exact:
            from .squaremult import EXACT_LIMITS, EXACT_MAX_SCANS

            need(args.y <= EXACT_LIMITS.get(args.k, args.y) and args.y ** (2 * args.k) <= EXACT_MAX_SCANS,
                 "--y", "too large for exact enumeration")
    elif cmd == "mainterm-scan":
        need(args.k >= 1, "--k", "must be >= 1")
        need(args.y_min >= 2, "--y-min", "must be >= 2")
        need(args.y_max >= args.y_min, "--y-max", "must be >= --y-min")
        need(args.ratio > 1, "--ratio", "must be > 1")
    elif cmd == "euler-check":
        try:
            s = tuple(float(x) for x in args.s.split(","))
        except ValueError:
            parser.error("argument --s: expected comma separated numbers")
        need(args.k in (1, 2), "--k", "must be 1 or 2")
        need(len(s) == 2 * args.k, "--s", f"needs {2 * args.k} values")
        need(min(s) >= 1.25, "--s", "every shift must be >= 1.25")
        need(args.coeff_limit >= 4, "--coeff-limit", "must be >= 4")
        need(args.prime_limit >= 2, "--prime-limit", "must be >= 2")
        params["s"] = s
    elif cmd == "fit":
        need(os.path.isfile(args.input), "--input", f"no such file: {args.input}")
        need(args.degree >= 0, "--degree", "must be >= 0")
    elif cmd == "constants":
        need(args.k >= 1, "--k", "must be >= 1")

    out = getattr(args, "output_path", None)
    if out is not None:
        d = os.path.dirname(os.path.abspath(out))
        need(os.path.isdir(d) and os.access(d, os.W_OK), "--output", f"cannot write to {out}")
    return RunConfig(cmd, params, threads, getattr(args, "output_format", "csv"), out)


def _table(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return "\n".join(_dumps(dict(zip(header, r))) for r in rows)
    lines = [",".join(header)]
    lines += [",".join(str(c) for c in r) for r in rows]
    return "\n".join(lines)


def geometric_grid(y_min: int, y_max: int, ratio: float) -> list[int]:
    out = []
    y = float(y_min)
    while round(y) <= y_max:
        if not out or round(y) != out[-1]:
            out.append(int(round(y)))
        y *= ratio
    return out


def read_scan_csv(path: str) -> tuple[int, list[tuple[float, float]]]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path} holds no rows")
    ks = {int(r["k"]) for r in rows}
    if len(ks) != 1:
        raise ValueError(f"{path} mixes several k values")
    return ks.pop(), [(float(r["Y"]), float(Fraction(r["T_k"]))) for r in rows]


def execute(cfg: RunConfig) -> tuple[int, str]:
    from . import charsum, euler, fit, numthy, squaremult

    p, fmt = cfg.params, cfg.output_format
    cmd = cfg.command
    if cmd == "sieve":
        sv = numthy.build_spf_sieve(p["limit"])
        if fmt == "json":
            return SUCCESS, _dumps({"limit": sv.limit, "spf": sv.spf[2:].tolist()})
        return SUCCESS, _table(["n", "spf"], [[n, int(sv.spf[n])] for n in range(2, sv.limit + 1)], fmt)
    if cmd == "kronecker":
        return SUCCESS, str(numthy.kronecker(p["a"], p["n"]))
    if cmd == "charsum":
        v = charsum.char_sum(p["disc"], p["y"])
        return SUCCESS, _table(["D", "Y", "value"], [[p["disc"], p["y"], v]], fmt)
    if cmd in ("moment", "moment8d"):
        params = charsum.MomentParams(p["k"], p["x"], p["y"])
        if cmd == "moment8d":
            recs = [charsum.moment_8d(params, cfg.threads)]
        else:
            methods = ["direct", "decomposed"] if p["method"] == "both" else [p["method"]]
            fns = {"direct": charsum.moment_direct, "decomposed": charsum.moment_decomposed}
            recs = [fns[m](params, cfg.threads) for m in methods]
        header = charsum.MomentRecord.CSV_HEADER.split(",")
        rows = [[r.params.k, r.params.X, r.params.Y, r.method.value, r.value, f"{r.wall_seconds:.6f}"] for r in recs]
        code = SUCCESS if len({r.value for r in recs}) == 1 else FAILURE
        return code, _table(header, rows, fmt)
    if cmd == "flatsum":
        density = p["density"] if p["density"] is not None else charsum.FLAT_DENSITY
        r = charsum.flat_char_sum(p["n"], p["z"], density)
        return SUCCESS, _table(
            ["n", "z", "exact_sum", "main_term", "bound_ratio"],
            [[r.n, r.z, r.exact_sum, r.main_term, r.bound_ratio]],
            fmt,
        )
    if cmd == "mainterm":
        t0 = time.perf_counter()
        if p["exact"]:
            res = squaremult.main_term_sum_exact(p["k"], p["y"])
        else:
            sv = numthy.build_spf_sieve(max(p["y"], 2))
            res = squaremult.main_term_sum(p["k"], p["y"], sv, cfg.threads)
        value = _fraction_str(res.value)
        return SUCCESS, _table(["k", "Y", "T_k", "seconds"], [[res.k, res.Y, value, f"{time.perf_counter() - t0:.6f}"]], fmt)
    if cmd == "mainterm-scan":
        grid = geometric_grid(p["y_min"], p["y_max"], p["ratio"])
        sv = numthy.build_spf_sieve(max(grid[-1], 2))
        rows = []
        for Y in grid:
            res = squaremult.main_term_sum(p["k"], Y, sv, cfg.threads)
            rows.append([p["k"], Y, repr(res.value), f"{res.seconds:.6f}"])
            print(f"Y={Y} done", file=sys.stderr)
        return SUCCESS, _table(["k", "Y", "T_k", "seconds"], rows, fmt)
    if cmd == "euler-check":
        rep = euler.verify_convolution(p["k"], p["s"], p["coeff_limit"], p["prime_limit"])
        out = {"lhs": rep.lhs, "rhs": rep.rhs, "residual": rep.residual, "truncation_budget": rep.truncation_budget}
        return SUCCESS, _dumps(out)
    if cmd == "fit":
        k, samples = read_scan_csv(p["input"])
        pts = [(y, v / y**k) for y, v in samples]
        out = {"k": k, "fit": fit.polyfit_log(pts, p["degree"]).as_dict()}
        if len(samples) >= fit.MIN_SAMPLES:
            out["degree_report"] = fit.degree_report(k, samples).as_dict()
        return SUCCESS, _dumps(out)
    if cmd == "constants":
        return SUCCESS, _dumps(fit.exponent_constants(p["k"]).as_dict())
    if cmd == "accept":
        from .acceptance import run_all

        results = run_all(echo=lambda line: print(line, flush=True))
        failed = [r.number for r in results if not r.passed]
        summary = f"{len(results) - len(failed)}/{len(results)} criteria passed"
        if failed:
            summary += f"; failed: {failed}"
        return (FAILURE if failed else SUCCESS), summary
    raise AssertionError(cmd)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _validate(parser, args)
    code, text = execute(cfg)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    try:
        sys.exit(run())
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(USAGE)


if __name__ == "__main__":
    main()
