"""Command-line entry point: ``daisyturan <subcommand> ...``.

Exit status: 0 pass, 1 usage/config/file-format error, 2 verification
failed (witness written), 3 search budget exhausted without a proof.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, bounds, cube
from .certificate import Certificate
from .constructions import construct_independent_family, fano_complement, padded_independent_family
from .hypergraph import (
    DaisyShape,
    FamilyFormatError,
    assert_daisy_free,
    blow_up,
    format_family,
    max_daisy_free,
    read_family,
)
from .swise import max_swise_independent, verify_counting_inequality

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _finish(cert: Certificate, args) -> int:
    cert.meta["config"] = _config(args)
    _emit(cert.to_json() + "\n", args.output)
    print(f"{cert.kind}: {'PASS' if cert.passed else 'FAIL'} (mode {cert.mode})", file=sys.stderr)
    return EXIT_OK if cert.passed else EXIT_FAIL


def _read_input(path: str, loader):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {path}")
    return loader(p)


def _read_cube(path) -> cube.CubeFamily:
    return cube.parse_cube_family(Path(path).read_text())


def _workers(args) -> int:
    return args.workers if args.workers else (os.cpu_count() or 1)


# -- subcommands -------------------------------------------------------------------

def cmd_construct(args) -> int:
    if args.independent:
        if args.q is None or args.r is None:
            raise UsageError("--independent needs -q and -r")
        if args.n is None:
            F = construct_independent_family(args.q, args.r, args.m)
        else:
            F = padded_independent_family(args.q, args.r, args.m, args.n, seed=args.seed)
    elif args.fano:
        F = fano_complement()
    else:
        if args.input is None or args.factor is None:
            raise UsageError("--blowup needs --input and --factor")
        F = blow_up(_read_input(args.input, read_family), args.factor)
    _emit(format_family(F), args.output)
    print(f"n={F.n} r={F.r} members={len(F)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.daisy_free:
        F = _read_input(args.input, read_family)
        if args.s is None or args.t is None:
            raise UsageError("--daisy-free needs -s and -t")
        shape = DaisyShape(F.r, args.s, args.t)
        samples = args.samples if args.samples is not None else 2000
        cert = assert_daisy_free(F, shape, mode=args.mode, samples=samples, seed=args.seed, workers=_workers(args))
    else:
        F = _read_input(args.input, _read_cube)
        if args.d is None:
            raise UsageError("--hits/--count need --d")
        samples = args.samples if args.samples is not None else cube.DEFAULT_SAMPLES
        if args.hits:
            cert = cube.hits_every_subcube(F, args.d, mode=args.mode, samples=samples, seed=args.seed)
        else:
            limit = args.limit if args.limit is not None else cube.central_binomial_limit(args.d)
            cert = cube.max_count_per_subcube(F, args.d, limit, mode=args.mode, samples=samples, seed=args.seed)
    return _finish(cert, args)


def cmd_search(args) -> int:
    if args.max_daisy_free:
        need = [args.n, args.r, args.s, args.t]
        if None in need:
            raise UsageError("--max-daisy-free needs -n, -r, -s, -t")
        res = max_daisy_free(args.n, DaisyShape(args.r, args.s, args.t),
                             time_budget=args.time_budget, node_budget=args.node_budget)
        out, proved, found = res.to_dict(), res.proved_optimal, res.best_size
    else:
        if None in (args.q, args.d, args.s):
            raise UsageError("--max-swise needs -q, -d, -s")
        inst = max_swise_independent(args.q, args.d, args.s,
                                     time_budget=args.time_budget, node_budget=args.node_budget)
        out, proved, found = inst.to_dict(), inst.proved_optimal, inst.max_found
    out.update(tool_version=__version__, config=_config(args))
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    print(f"best {found} ({'proved optimal' if proved else 'not proved optimal'})", file=sys.stderr)
    return EXIT_OK if proved else EXIT_BUDGET


def _parse_values(kind: str, text: str):
    """"8..200" or "2,3,5" for scalar kinds; "q:r,..." tuples for the others."""
    try:
        if kind in ("blowup", "independent-limit", "special-t"):
            arity = 3 if kind == "special-t" else 2
            vals = [tuple(int(x) for x in item.split(":")) for item in text.split(",")]
            if any(len(v) != arity for v in vals):
                raise ValueError
            return vals
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse --values {text!r} for kind {kind}") from None


def cmd_bounds(args) -> int:
    reports = bounds.theorem_bound_table(args.kind, _parse_values(args.kind, args.values), tol=args.tol)
    _emit(bounds.bound_table_csv(reports, args.kind), args.output)
    return EXIT_OK


def cmd_swise(args) -> int:
    inst = max_swise_independent(args.q, args.d, args.s, time_budget=args.time_budget, node_budget=args.node_budget)
    cert = verify_counting_inequality(args.q, args.s, inst)
    cert.meta.update(search=inst.to_dict())
    code = _finish(cert, args)
    if code == EXIT_OK and not inst.proved_optimal:
        print("search budget exhausted before optimality was proved", file=sys.stderr)
        return EXIT_BUDGET
    return code


def cmd_cube(args) -> int:
    if args.report:
        if args.d is None:
            raise UsageError("--report needs --d")
        rep = cube.gamma_report(args.d).to_dict()
        rep.update(tool_version=__version__)
        _emit(json.dumps(rep, indent=2) + "\n", args.output)
        return EXIT_OK
    if args.construct:
        if args.n is None:
            raise UsageError("--construct needs -n")
        kind = args.construct
        if kind == "layers":
            period = args.period if args.period is not None else (args.d + 1 if args.d is not None else None)
            if period is None:
                raise UsageError("layers needs --period or --d")
            F = cube.layers_mod_construction(args.n, period, args.offset)
        elif kind == "hitting":
            if args.d is None:
                raise UsageError("hitting needs --d")
            F = cube.layered_hitting_family(args.n, args.d)
        elif kind == "five-point":
            F = cube.five_point_family(args.n)
        else:
            if args.d is None:
                raise UsageError("sqrt needs --d")
            F = cube.sqrt_spaced_family(args.n, args.d, args.C)
        if not args.verify:
            _emit(cube.format_cube_family(F), args.output)
            print(f"n={F.n} members={len(F)} density={float(F.density()):.6f}", file=sys.stderr)
            return EXIT_OK
    elif args.verify:
        if args.input is None:
            raise UsageError("--verify without --construct needs --input")
        F = _read_input(args.input, _read_cube)
    else:
        raise UsageError("cube needs --construct, --verify or --report")
    if args.d is None:
        raise UsageError("--verify needs --d")
    args.samples = args.samples or cube.DEFAULT_SAMPLES
    if args.verify == "hit":
        cert = cube.hits_every_subcube(F, args.d, mode=args.mode, samples=args.samples, seed=args.seed)
    else:
        limit = args.limit if args.limit is not None else (
            5 if args.construct == "five-point" else cube.central_binomial_limit(args.d))
        cert = cube.max_count_per_subcube(F, args.d, limit, mode=args.mode, samples=args.samples, seed=args.seed)
    return _finish(cert, args)


def cmd_demo(args) -> int:
    from .acceptance import run_all

    results = run_all()
    for res in results:
        print(res.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} acceptance checks passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


# -- parser ------------------------------------------------------------------------

def _common(p, *, mode=False):
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=0, help="random seed, 64-bit (default 0)")
    if mode:
        p.add_argument("--mode", choices=("exhaustive", "sampled", "auto"), default="auto",
                       help="verification mode (default auto: exhaustive below the size caps)")
        p.add_argument("--samples", type=int, help="sample count in sampled mode")


def _budget(p):
    p.add_argument("--time-budget", type=float, default=60.0, help="seconds (default 60)")
    p.add_argument("--node-budget", type=int, help="search node limit")


def build_parser() -> Parser:
    parser = Parser(prog="daisyturan", description="Daisy-free hypergraphs, s-wise independence and hypercube hitting sets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("construct", help="write a uniform family file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--independent", action="store_true", help="linearly independent r-sets over F_q^(m+r)")
    g.add_argument("--fano", action="store_true", help="complement of the Fano lines in the triple layer")
    g.add_argument("--blowup", action="store_true", help="blow up --input by --factor")
    p.add_argument("-q", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("-m", type=int, default=0)
    p.add_argument("-n", type=int, help="ground set size for the padded variant")
    p.add_argument("--input")
    p.add_argument("--factor", type=int)
    _common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a family file and write a certificate")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--daisy-free", action="store_true", help="uniform family contains no (r,s,t)-daisy")
    g.add_argument("--hits", action="store_true", help="cube family meets every d-subcube")
    g.add_argument("--count", action="store_true", help="every d-subcube holds at most --limit members")
    p.add_argument("input")
    p.add_argument("-s", type=int)
    p.add_argument("-t", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--limit", type=int, help="default C(d, d/2) - 1")
    p.add_argument("--workers", type=int, help="parallel workers (default: all cores)")
    _common(p, mode=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exact extremal search")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--max-daisy-free", action="store_true")
    g.add_argument("--max-swise", action="store_true")
    for flag in ("-n", "-r", "-s", "-t", "-q", "-d"):
        p.add_argument(flag, type=int)
    _budget(p)
    _common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bounds", help="CSV table of a closed-form bound")
    p.add_argument("--kind", required=True, choices=bounds.BOUND_KINDS)
    p.add_argument("--values", required=True,
                   help='"8..200" or "2,3,5"; "q:r,..." for blowup, "q:m,..." for independent-limit, "s:q:m,..." for special-t')
    p.add_argument("--tol", type=float, default=1e-9, help="Euler product tolerance (default 1e-9)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("swise", help="largest s-wise independent set plus counting certificate")
    p.add_argument("-q", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-s", type=int, required=True)
    _budget(p)
    _common(p)
    p.set_defaults(func=cmd_swise)

    p = sub.add_parser("cube", help="hypercube constructions, verification and bound report")
    p.add_argument("--construct", choices=("layers", "hitting", "five-point", "sqrt"))
    p.add_argument("--verify", choices=("hit", "count"))
    p.add_argument("--report", action="store_true", help="JSON bound report for --d")
    p.add_argument("-n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--period", type=int)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--limit", type=int)
    p.add_argument("--input")
    _common(p, mode=True)
    p.set_defaults(func=cmd_cube)

    p = sub.add_parser("demo", help="run the acceptance checks and print the table")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, FamilyFormatError, ValueError, OverflowError, OSError) as exc:
        print(f"daisyturan: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
