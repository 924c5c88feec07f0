"""
Command-line interface for volsel

Commands:
- gen random | hardness: write point files
- hv: union volume of a point file
- solve: run one solver, print a JSON run record
- bench: run solvers over files and budgets, print a CSV table
- verify hardness | lemmas: exact checks, print a JSON report

Exit codes: 0 success, 1 failed verification, 2 usage, 3 budget or cell cap,
4 parse error.
"""

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from volsel import __version__
from volsel.api.geometry import format_points, parse_rows, read_points
from volsel.api.hardness import TriGridVertexSet, embed_instance, verify_construction, verify_reduction
from volsel.constants import (
    ALGORITHMS,
    ENGINE_ESTIMATE,
    ENGINE_SWEEP,
    ENGINES,
    ERR_INDEX_RANGE,
    ERR_UNKNOWN_ALGO,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    FALLBACK_POLICIES,
    LEMMA_SUITES,
    MODE_EXACT,
    MODE_FLOAT,
    MODES,
)
from volsel.doctype.run_record.run_record import CSV_COLUMNS
from volsel.exceptions import InvalidParameterError, VolselError
from volsel.tasks import run_benchmark, run_solver, run_suite
from volsel.utils import get_hook

logger = logging.getLogger(__name__)

GLOBAL_DEFAULTS = {"seed": 0, "mode": MODE_FLOAT, "output": None, "verbose": 0, "timing": False}


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS defaults let the flags appear before or after the command
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    parent.add_argument("--mode", choices=MODES, default=argparse.SUPPRESS, help="arithmetic mode (default float)")
    parent.add_argument("--output", default=argparse.SUPPRESS, help="write the result to this path")
    parent.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                        help="-v for INFO, -vv for DEBUG logging on stderr")
    parent.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include elapsed_ms in run records")
    return parent


def _reference_options(parser: argparse.ArgumentParser):
    parser.add_argument("--reference", help="comma-separated reference point the file is measured against")
    parser.add_argument("--minimize", action="store_true", help="objectives are minimized relative to --reference")


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(prog="volsel", description="Hypervolume subset selection", parents=[common])
    parser.add_argument("--version", action="version", version=f"volsel {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate point files", parents=[common])
    gen_kinds = gen.add_subparsers(dest="kind", required=True)
    gen_random = gen_kinds.add_parser("random", help="log-uniform points in [1, spread]^d", parents=[common])
    gen_random.add_argument("--n", type=int, required=True)
    gen_random.add_argument("--d", type=int, required=True)
    gen_random.add_argument("--spread", type=float, default=1e6)
    gen_random.set_defaults(handler=cmd_gen_random)
    gen_hardness = gen_kinds.add_parser("hardness", help="instance from a triangular-grid vertex set",
                                        epilog="Without --output the points go to stdout and the sidecar "
                                               "to <gamma-vertices>.hardness.json.",
                                        parents=[common])
    gen_hardness.add_argument("--gamma-vertices", required=True, help="file of (i, j) pairs, one per line")
    gen_hardness.add_argument("--ell", type=int, required=True)
    gen_hardness.set_defaults(handler=cmd_gen_hardness)

    hv = commands.add_parser("hv", help="union volume of a point file", parents=[common])
    hv.add_argument("file")
    hv.add_argument("--engine", choices=ENGINES, default=ENGINE_SWEEP)
    hv.add_argument("--eps", type=float, default=0.05, help="estimate precision")
    hv.add_argument("--delta", type=float, default=0.01, help="estimate failure probability")
    hv.add_argument("--indices", help="comma-separated subset of point indices")
    _reference_options(hv)
    hv.set_defaults(handler=cmd_hv)

    solve = commands.add_parser("solve", help="run one solver", parents=[common])
    solve.add_argument("file")
    solve.add_argument("--algo", choices=ALGORITHMS, required=True)
    solve.add_argument("--k", type=int, required=True)
    solve.add_argument("--eps", type=float, default=0.5)
    solve.add_argument("--cell-cap", type=int)
    solve.add_argument("--fallback", choices=FALLBACK_POLICIES)
    _reference_options(solve)
    solve.set_defaults(handler=cmd_solve)

    bench = commands.add_parser("bench", help="benchmark table over files, algorithms and budgets",
                                parents=[common])
    bench.add_argument("files", nargs="+")
    bench.add_argument("--algos", required=True, help="comma-separated algorithms")
    bench.add_argument("--k", required=True, help="comma-separated budgets")
    bench.add_argument("--eps", type=float, default=0.5)
    bench.add_argument("--cell-cap", type=int)
    bench.add_argument("--fallback", choices=FALLBACK_POLICIES)
    bench.set_defaults(handler=cmd_bench)

    verify = commands.add_parser("verify", help="exact verification reports", parents=[common])
    verify_kinds = verify.add_subparsers(dest="kind", required=True)
    verify_hardness = verify_kinds.add_parser("hardness", help="hardness construction or reduction",
                                              parents=[common])
    verify_hardness.add_argument("--m", type=int)
    verify_hardness.add_argument("--gamma-vertices")
    verify_hardness.add_argument("--ell", type=int)
    verify_hardness.add_argument("--full-check", action="store_true",
                                 help="also decide the VolSel instance by brute force over all points")
    verify_hardness.set_defaults(handler=cmd_verify_hardness)
    verify_lemmas = verify_kinds.add_parser("lemmas", help="approximation-scheme and hardness lemma suites",
                                            parents=[common])
    verify_lemmas.add_argument("--which", choices=LEMMA_SUITES, required=True)
    verify_lemmas.add_argument("--trials", type=int, default=20)
    verify_lemmas.add_argument("--n", type=int, default=8)
    verify_lemmas.add_argument("--d", type=int, default=2)
    verify_lemmas.add_argument("--k", type=int, default=3)
    verify_lemmas.add_argument("--eps", type=float, default=0.5)
    verify_lemmas.add_argument("--m", type=int)
    verify_lemmas.set_defaults(handler=cmd_verify_lemmas)

    return parser


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict):
    _emit(args, json.dumps(payload, sort_keys=True) + "\n")


def _parse_list(text: str, kind=str) -> list:
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        return [kind(item) for item in items]
    except ValueError:
        raise InvalidParameterError(f"Cannot parse list '{text}'")


def _load(args):
    reference = None
    if args.reference:
        reference = parse_rows([args.reference], args.mode, positive=False)[0]
    return read_points(args.file, mode=args.mode, reference=reference, maximize=not args.minimize)


def cmd_gen_random(args) -> int:
    if args.n < 1 or args.d < 1:
        raise InvalidParameterError(f"gen random needs n >= 1 and d >= 1, got n={args.n} d={args.d}")
    if not args.spread > 1:
        raise InvalidParameterError(f"spread must exceed 1, got {args.spread}")

    rng = np.random.default_rng(args.seed)
    coords = np.exp(rng.uniform(0.0, math.log(args.spread), size=(args.n, args.d)))
    coords = np.clip(coords, 1.0, args.spread)
    if args.mode == MODE_EXACT:
        rows = np.floor(coords).astype(np.int64).tolist()
    else:
        rows = coords.tolist()

    _emit(args, format_points(rows))
    logger.info(f"Generated {args.n} log-uniform points in [1, {args.spread:g}]^{args.d}")
    return EXIT_OK


def sidecar_path(args) -> Path:
    """<output>.json, or <gamma-vertices>.hardness.json when points go to stdout"""
    if args.output:
        return Path(f"{args.output}.json")
    return Path(args.gamma_vertices).with_suffix(".hardness.json")


def cmd_gen_hardness(args) -> int:
    vertex_set = TriGridVertexSet.from_file(args.gamma_vertices, args.ell)
    instance = embed_instance(vertex_set)
    _emit(args, format_points(instance.points))

    target = sidecar_path(args)
    target.write_text(json.dumps(instance.sidecar(), sort_keys=True) + "\n")
    logger.info(f"Wrote hardness sidecar to {target}")
    return EXIT_OK


def cmd_hv(args) -> int:
    points = _load(args)
    if args.indices:
        indices = _parse_list(args.indices, int)
        for index in indices:
            if not 0 <= index < len(points):
                raise InvalidParameterError(ERR_INDEX_RANGE.format(index=index, n=len(points)))
        points = points.subset(indices)

    engine = get_hook("hv_engines", args.engine)
    if args.engine == ENGINE_ESTIMATE:
        value = engine(points, args.eps, args.delta, seed=args.seed)
    else:
        value = engine(points)

    _emit_json(args, {
        "engine": args.engine,
        "mode": args.mode,
        "n": len(points),
        "d": points.dimension,
        "value": value,
    })
    return EXIT_OK


def cmd_solve(args) -> int:
    points = _load(args)
    record = run_solver(args.algo, points, args.k, args.eps, args.cell_cap, args.fallback, args.seed)
    _emit(args, record.to_json(include_timing=args.timing) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    algorithms = _parse_list(args.algos)
    if not algorithms:
        raise InvalidParameterError("bench needs at least one algorithm")
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise InvalidParameterError(ERR_UNKNOWN_ALGO.format(algo=algorithm, choices=", ".join(ALGORITHMS)))
    ks = _parse_list(args.k, int)
    if not ks:
        raise InvalidParameterError("bench needs at least one k")

    rows = run_benchmark(args.files, algorithms, ks, args.eps, args.mode, args.cell_cap, args.fallback, args.seed)

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for path, record, ratio in rows:
            writer.writerow(record.csv_row(path, ratio, include_timing=args.timing))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_verify_hardness(args) -> int:
    if args.gamma_vertices:
        if args.ell is None:
            raise InvalidParameterError("verify hardness --gamma-vertices needs --ell")
        instance = embed_instance(TriGridVertexSet.from_file(args.gamma_vertices, args.ell))
        report = verify_reduction(instance, full_check=args.full_check)
        passed = report["agree"]
    elif args.m is not None:
        report = verify_construction(args.m)
        passed = report["passed"]
    else:
        raise InvalidParameterError("verify hardness needs --m or --gamma-vertices with --ell")

    _emit_json(args, report)
    return EXIT_OK if passed else EXIT_INTERNAL


def cmd_verify_lemmas(args) -> int:
    report = run_suite(
        args.which,
        trials=args.trials,
        seed=args.seed,
        n=args.n,
        d=args.d,
        k=args.k,
        eps=args.eps,
        m=args.m,
    )
    _emit_json(args, report)
    return EXIT_OK if report["ok"] else EXIT_INTERNAL


def _configure_logging(verbose: int):
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    for name, default in GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except VolselError as exc:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
