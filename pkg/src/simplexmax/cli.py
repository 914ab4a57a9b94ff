"""Command-line entry point: ``simplexmax <subcommand> ...``.

Exit codes: 0 success, 1 a verification case failed, 2 invalid usage or
input, 3 enumeration budget exceeded.  Structured output is JSON on stdout
(or the file named by ``--output``) and embeds the resolved configuration.
Wall-clock timings never enter primary outputs; they go to stderr or to the
file named by ``--timing``.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BudgetExceeded, EmptyAverage, InvalidInput, SimplexMaxError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- parsing helpers


def parse_gram(text: str) -> list[list[int]]:
    """``"a b; b c"`` -> integer matrix; names the offending token on error."""
    rows = [r.split() for r in text.split(";")]
    out = []
    for row in rows:
        vals = []
        for tok in row:
            if not re.fullmatch(r"[+-]?\d+", tok):
                raise InvalidInput(f"malformed Gram entry {tok!r} in {text!r}; entries must be integers")
            vals.append(int(tok))
        out.append(vals)
    if not out or any(len(r) != len(out) for r in out):
        raise InvalidInput(f"Gram matrix {text!r} must be square with rows separated by ';'")
    return out


def read_simplex(path: str) -> list[list[int]]:
    """Vertex file: one non-origin vertex per line, integer coordinates."""
    try:
        lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    except OSError as exc:
        raise InvalidInput(f"cannot read simplex file {path}: {exc.strerror}") from None
    try:
        return [[int(a) for a in ln] for ln in lines]
    except ValueError:
        raise InvalidInput(f"{path}: vertex coordinates must be integers") from None


def _float_list(text: str, what: str) -> list[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(math.inf if tok.lower() in ("inf", "infinity") else float(Fraction(tok)))
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"malformed {what} entry {tok!r}") from None
    return out


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"malformed {what} {text!r}") from None


def _emit(doc: dict, output: str | None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _timing(args, elapsed_s: float, extra: dict | None = None):
    doc = {"elapsed_ms": round(elapsed_s * 1000, 3)} | (extra or {})
    if args.timing:
        Path(args.timing).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif not args.quiet:
        print(json.dumps(doc, sort_keys=True), file=sys.stderr)


def _common(args) -> dict:
    from .enumeration import default_budget

    budget = args.budget if args.budget is not None else default_budget()
    return {"threads": args.threads, "seed": args.seed, "budget": budget, "version": __version__}


# ---------------------------------------------------------------- subcommands


def cmd_count(args) -> int:
    from .enumeration import count_simplex_copies, sphere_count
    from .geometry import Simplex, gram_of_simplex

    if (args.gram is None) == (args.simplex is None):
        raise UsageError("give exactly one of --gram or --simplex")
    if args.gram is not None:
        t = parse_gram(args.gram)
        source = {"gram": t}
    else:
        verts = read_simplex(args.simplex)
        s = Simplex(np.array(verts))
        if s.dim != args.dim:
            raise InvalidInput(f"simplex vertices live in Z^{s.dim}, but --dim is {args.dim}")
        t = [[int(round(a)) for a in row] for row in gram_of_simplex(s).tolist()]
        source = {"simplex": verts, "gram": t}
    if args.dim < 1 or args.lambda_sq < 0:
        raise InvalidInput("--dim must be positive and --lambda-sq nonnegative")
    start = time.perf_counter()
    if len(t) == 1 and t[0][0] == 1:
        n = sphere_count(args.dim, args.lambda_sq, args.budget)
    else:
        n = count_simplex_copies(t, args.lambda_sq, args.dim, args.budget, args.threads)
    elapsed = time.perf_counter() - start
    cfg = {"subcommand": "count", "dim": args.dim, "lambda_sq": args.lambda_sq} | source | _common(args)
    _emit({"count": str(n), "config": cfg}, args.output)
    _timing(args, elapsed)
    return EXIT_OK


def _load_function(spec: str):
    from .operators import read_grid_function

    if spec.startswith("const:"):
        try:
            return float(spec[6:])
        except ValueError:
            raise InvalidInput(f"malformed constant {spec!r}") from None
    try:
        return read_grid_function(spec)
    except OSError as exc:
        raise InvalidInput(f"cannot read grid function {spec}: {exc.strerror}") from None


def _parse_box(text: str, d: int):
    parts = text.split(":")
    if len(parts) != 2:
        raise InvalidInput(f"box {text!r} must look like 'lo1,..,lod:hi1,..,hid'")
    try:
        lo = [int(a) for a in parts[0].split(",")]
        hi = [int(a) for a in parts[1].split(",")]
    except ValueError:
        raise InvalidInput(f"box {text!r} has non-integer corners") from None
    if len(lo) != d or len(hi) != d or any(a > b for a, b in zip(lo, hi)):
        raise InvalidInput(f"box {text!r} does not describe a nonempty box in Z^{d}")
    return np.array(lo), np.array(hi)


def cmd_maximal(args) -> int:
    from .enumeration import count_simplex_copies
    from .operators import GridFunction, LambdaSet, lp_norm, maximal, write_grid_function

    if not args.output:
        raise UsageError("maximal needs --output for the grid function file")
    t = parse_gram(args.gram)
    fs = [_load_function(s) for s in args.input]
    if len(fs) != len(t):
        raise InvalidInput(f"{len(fs)} inputs given for a Gram matrix of order {len(t)}")
    dims = {f.dim for f in fs if isinstance(f, GridFunction)}
    if args.dim is not None:
        dims.add(args.dim)
    if len(dims) != 1:
        raise InvalidInput(f"incompatible dimensions {sorted(dims)}" if dims else "--dim is required when every input is a constant")
    d = dims.pop()
    if args.lambda_sq:
        try:
            wanted = [int(a) for a in args.lambda_sq.split(",")]
        except ValueError:
            raise InvalidInput(f"malformed --lambda-sq {args.lambda_sq!r}; expected comma-separated integers") from None
        lams = LambdaSet(tuple(v for v in wanted if v > 0 and count_simplex_copies(t, v, d, args.budget) > 0))
    else:
        lo, hi = args.lambda_sq_range
        lams = LambdaSet.from_range(t, d, lo, hi)
    if len(lams) == 0:
        raise InvalidInput("empty lambda set")
    box = _parse_box(args.box, d) if args.box else None
    if box is None and not any(isinstance(f, GridFunction) for f in fs):
        raise InvalidInput("--box is required when every input is a constant")
    start = time.perf_counter()
    out = maximal(fs, t, lams, box, threads=args.threads)
    elapsed = time.perf_counter() - start
    write_grid_function(out, args.output)
    norms = {}
    for r in _float_list(args.norms, "norm exponent") if args.norms else []:
        norms["inf" if math.isinf(r) else repr(r)] = lp_norm(out, r)
    cfg = {
        "subcommand": "maximal",
        "inputs": args.input,
        "gram": t,
        "dim": d,
        "lambda_set": list(lams.values),
        "box": [out.corner.tolist(), out.upper.tolist()],
        "output": args.output,
    } | _common(args)
    _emit({"output": args.output, "norms": norms, "sup": out.sup_norm(), "config": cfg}, args.summary)
    _timing(args, elapsed)
    return EXIT_OK


def cmd_region(args) -> int:
    from .regions import RegionSpec, export_region, theorem_predicate

    if args.theorem:
        if args.d is None or args.p is None or args.r is None:
            raise UsageError("--theorem needs --d, --p and --r")
        p = [s.strip() for s in args.p.split(",")]
        p = [math.inf if s.lower() in ("inf", "infinity") else _fraction(s, "exponent") for s in p]
        r = math.inf if args.r.lower() in ("inf", "infinity") else _fraction(args.r, "exponent")
        res = theorem_predicate(args.theorem, args.d, args.k, p, r, args.m)
        cfg = {"subcommand": "region", "theorem": args.theorem, "d": args.d, "k": args.k, "m": args.m, "p": args.p, "r": args.r}
        _emit({"status": res.status, "failures": res.failures, "config": cfg | _common(args)}, args.output)
        return EXIT_OK
    if args.kind is None:
        raise UsageError("--kind is required unless --theorem is given")
    if args.scale is not None and args.d is not None:
        raise UsageError("give at most one of --scale and --d")
    if args.d is not None:
        if args.d < 3:
            raise InvalidInput("--d must be at least 3")
        scale = Fraction(args.d - 1, args.d) if args.kind == "tilde" else Fraction(args.d - 2, args.d)
    else:
        scale = _fraction(args.scale, "scale") if args.scale is not None else Fraction(1)
    spec = RegionSpec(args.kind, args.k, args.m, scale)
    cfg = {"subcommand": "region", "kind": args.kind, "k": args.k, "m": args.m, "scale": str(scale)} | _common(args)
    if args.point is not None:
        x = _float_list(args.point, "point")
        if len(x) != args.k:
            raise InvalidInput(f"point has {len(x)} coordinates, expected k={args.k}")
        _emit({"membership": spec.classify(x).value, "point": x, "config": cfg}, args.output)
        return EXIT_OK
    if args.export is None:
        raise UsageError("give --point or --export")
    text = export_region(spec, args.export)
    if args.export == "json":
        doc = json.loads(text) | {"config": cfg}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = "# " + json.dumps(cfg, sort_keys=True) + "\n" + text
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .campaigns import load_config, run_campaigns, smoke_config_path

    if (args.config is None) == (not args.smoke):
        raise UsageError("give exactly one of --config or --smoke")
    path = smoke_config_path() if args.smoke else Path(args.config)
    cfg = load_config(path)
    if args.budget is not None:
        cfg["budget"] = args.budget
    start = time.perf_counter()
    report = run_campaigns(cfg, threads=args.threads, seed=args.seed)
    elapsed = time.perf_counter() - start
    doc = report.to_json()
    doc["reproduce"] = f"simplexmax verify --config {path if args.config else '--smoke'} --seed {report.config['seed']} --threads {args.threads}".replace(
        "--config --smoke", "--smoke"
    )
    doc["run"] = _common(args) | {"seed": report.config["seed"]}
    _emit(doc, args.output)
    if args.summary:
        Path(args.summary).write_text(report.summary_text())
    elif not args.quiet:
        sys.stderr.write(report.summary_text())
    _timing(args, elapsed, {"cases": report.timings()})
    if report.failed:
        return EXIT_FAIL
    if report.budget_exhausted:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_counterexample(args) -> int:
    from .counterexample import CounterexampleFamily, divergence_report, family_norms

    t = parse_gram(args.gram) if args.gram else [[int(i == j) for j in range(args.k)] for i in range(args.k)]
    p = [s.strip() for s in args.p.split(",")]
    for s in p:
        if s.lower() not in ("inf", "infinity"):
            _fraction(s, "exponent")
    fam = CounterexampleFamily(args.d, args.k, t, p, _fraction(args.tau, "tau") if args.tau else None, args.radius)
    start = time.perf_counter()
    rep = divergence_report(fam, args.r, args.j_max, args.j_min, args.budget, args.threads)
    doc = rep.to_json()
    if args.norms:
        doc["input_norms"] = [repr(v) for v in family_norms(fam)]
    elapsed = time.perf_counter() - start
    doc["config"] = {
        "subcommand": "counterexample",
        "d": args.d,
        "k": args.k,
        "gram": t,
        "p": args.p,
        "r": args.r,
        "tau": str(fam.tau),
        "radius": args.radius,
        "j_min": args.j_min,
        "j_max": args.j_max,
    } | _common(args)
    _emit(doc, args.output)
    _timing(args, elapsed, {"blocks_ms": rep.timings()})
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1, help="worker threads (default: logical cores)")
    common.add_argument("--seed", type=int, default=None, help="random seed (campaigns)")
    common.add_argument("--budget", type=_positive_int, default=None, help="enumeration budget; overrides SIMPLEXMAX_BUDGET")
    common.add_argument("--output", "-o", default=None, help="write the primary output here instead of stdout")
    common.add_argument("--timing", default=None, help="write wall-clock timings to this sidecar file")
    common.add_argument("--quiet", "-q", action="store_true", help="suppress stderr timing and summaries")

    p = _Parser(prog="simplexmax", description="Lattice simplex counting, multilinear maximal averages and exponent regions.")
    p.add_argument("--version", action="version", version=f"simplexmax {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", parents=[common], help="count isometric lattice copies of a scaled simplex")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--lambda-sq", type=int, required=True)
    c.add_argument("--gram", help='Gram matrix, rows separated by ";" e.g. "1 0; 0 1"')
    c.add_argument("--simplex", help="file with one non-origin vertex per line")
    c.set_defaults(func=cmd_count)

    m = sub.add_parser("maximal", parents=[common], help="evaluate the discrete maximal average on a box")
    m.add_argument("--input", action="append", required=True, help="grid function file or const:VALUE (repeat per vertex)")
    m.add_argument("--gram", required=True)
    g = m.add_mutually_exclusive_group(required=True)
    g.add_argument("--lambda-sq", help="comma-separated scales")
    g.add_argument("--lambda-sq-range", type=_range, help="inclusive range LO..HI")
    m.add_argument("--dim", type=int, default=None)
    m.add_argument("--box", default=None, help="evaluation box 'lo1,..:hi1,..' (default: supports dilated by the largest vertex)")
    m.add_argument("--norms", default=None, help="comma-separated r values for ||A_*||_r")
    m.add_argument("--summary", default=None, help="write the summary JSON here instead of stdout")
    m.set_defaults(func=cmd_maximal)

    r = sub.add_parser("region", parents=[common], help="classify points, export regions or evaluate hypotheses")
    r.add_argument("--kind", choices=["ck", "ckq", "tilde", "cube"])
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--m", type=int, default=2)
    r.add_argument("--scale", default=None, help="scale factor as a fraction")
    r.add_argument("--d", type=int, default=None, help="dimension; scales by (d-2)/d, or (d-1)/d for tilde")
    r.add_argument("--point", default=None, help="comma-separated reciprocal exponents")
    r.add_argument("--export", choices=["csv", "json"], default=None)
    r.add_argument("--theorem", default=None, help="hypothesis id (T0, T1i, T1ii, T2i, T2ii, T3, C3, C3', T3')")
    r.add_argument("--p", default=None, help="comma-separated exponents p_j (fractions or inf)")
    r.add_argument("--r", default=None, help="target exponent r")
    r.set_defaults(func=cmd_region)

    v = sub.add_parser("verify", parents=[common], help="run a verification campaign config")
    v.add_argument("--config", default=None)
    v.add_argument("--smoke", action="store_true", help="run the bundled smoke config")
    v.add_argument("--summary", default=None, help="write the text summary here")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("counterexample", parents=[common], help="dyadic block sums for the divergence family")
    x.add_argument("--d", type=int, default=7)
    x.add_argument("--k", type=int, default=2)
    x.add_argument("--gram", default=None, help="default: identity")
    x.add_argument("--p", default="7/5,inf", help="exponents p_1,..,p_k")
    x.add_argument("--r", default=None, help="target exponent (default: 1/r = sum 1/p_j)")
    x.add_argument("--tau", default=None)
    x.add_argument("--radius", type=int, default=16, help="box radius for --norms")
    x.add_argument("--j-min", type=int, default=1)
    x.add_argument("--j-max", type=int, default=2)
    x.add_argument("--norms", action="store_true", help="also report input norms on the truncated box")
    x.set_defaults(func=cmd_counterexample)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"simplexmax: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"simplexmax: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, EmptyAverage) as exc:
        print(f"simplexmax: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimplexMaxError as exc:
        print(f"simplexmax: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
