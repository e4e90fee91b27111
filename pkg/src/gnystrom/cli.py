"""Command-line entry point.

Exit codes: 0 success, 1 I/O failure, 2 usage or parameter error,
3 bound verification failure. Without ``--seed`` every command uses seed 0.
"""

import argparse
import json
import sys
import time
from dataclasses import asdict

import numpy as np
import scipy.sparse as sp

from . import bench
from .approx import SCHEMES, ApproxConfig, relative_error, run_scheme
from .exceptions import InsufficientSampleError, MatrixMarketError, ParameterError
from .linalg import svd
from .mmio import read_matrix_market, write_matrix_market
from .testgen import GENERATOR_NAMES, generate, parse_generator

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_SEED = 0


def _err(msg):
    print(f"gnystrom: {msg}", file=sys.stderr)


def spectrum_sidecar(path):
    return f"{path}.spectrum"


def write_spectrum(path, sigma):
    with open(path, "w", encoding="ascii") as fh:
        fh.writelines(f"{s:.17g}\n" for s in sigma)


def cmd_generate(args):
    try:
        parse_generator(args.spec)
    except ParameterError as exc:
        _err(str(exc))
        return EXIT_USAGE
    if args.size < 2:
        _err(f"size must be >= 2, got {args.size}")
        return EXIT_USAGE
    matrix, sigma = generate(args.spec, args.size, args.seed, args.density)
    if sigma is None:
        # No closed-form spectrum: take it from an exact SVD.
        sigma = svd(matrix.toarray()).sigma
    if args.format == "coordinate" and not sp.issparse(matrix):
        matrix = sp.csr_array(matrix)
    elif args.format == "array" and sp.issparse(matrix):
        matrix = matrix.toarray()
    try:
        write_matrix_market(args.output, matrix, comment=f"generator {args.spec} m={args.size} seed={args.seed}")
        write_spectrum(spectrum_sidecar(args.output), sigma)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    return EXIT_OK


def cmd_approximate(args):
    if args.oversampling is not None and args.scheme not in bench.OVERSAMPLED:
        _err(f"--oversampling applies only to {', '.join(bench.OVERSAMPLED)}")
        return EXIT_USAGE
    try:
        a = read_matrix_market(args.input)
    except MatrixMarketError as exc:
        _err(f"{args.input}: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    try:
        config = ApproxConfig(rank=args.rank, oversampling=args.oversampling,
                              power_q=args.power_q, seed=args.seed, sketch_kind=args.sketch)
        start = time.perf_counter()
        factors = run_scheme(args.scheme, a, config)
        elapsed = time.perf_counter() - start
    except (ValueError, np.linalg.LinAlgError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    rel = relative_error(a, factors)
    try:
        write_matrix_market(f"{args.output}.L.mtx", factors.left)
        write_matrix_market(f"{args.output}.M.mtx", factors.core_or_identity())
        write_matrix_market(f"{args.output}.Rt.mtx", factors.right_t)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    l = config.gn_oversampling() if args.scheme in bench.OVERSAMPLED else 0
    report = {"scheme": args.scheme, "r": args.rank, "l": l, "rel_err": rel,
              "elapsed": elapsed, "rank_used": factors.rank_used}
    if args.format == "json":
        print(json.dumps(report))
    else:
        print(f"scheme={args.scheme} r={args.rank} l={l} rel_err={rel:.6e} "
              f"elapsed={elapsed:.6f} rank_used={factors.rank_used}")
    return EXIT_OK


def cmd_bench(args):
    try:
        config = bench.SweepConfig.from_json(args.config)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except (ValueError, TypeError) as exc:
        _err(f"bad sweep config {args.config}: {exc}")
        return EXIT_USAGE
    if args.seed is not None:
        config.seed_base = args.seed
    output = args.output or config.output
    if not output:
        _err("no output path: pass --output or set 'output' in the config")
        return EXIT_USAGE
    try:
        reports = bench.run_sweep(config)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except (ValueError, np.linalg.LinAlgError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    try:
        if args.format == "json":
            with open(output, "w", encoding="utf-8") as fh:
                json.dump([asdict(r) for r in reports], fh, indent=1)
        else:
            bench.emit_csv(reports, output)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    for (scheme, r), err in bench.mean_errors(reports).items():
        print(f"{scheme:<14} r={r:<5d} mean_rel_err={err:.6e}")
    for msg in bench.timing_warnings(reports):
        _err(f"warning: {msg}")
    return EXIT_OK


def cmd_verify_bounds(args):
    try:
        reports = bench.read_csv(args.csv)
        sigma = bench.read_spectrum(args.spectrum)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE
    try:
        verdicts = bench.verify_bounds(reports, sigma, args.k, min_trials=args.min_trials)
    except InsufficientSampleError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE
    if args.format == "json":
        print(json.dumps([asdict(v) for v in verdicts], indent=1))
    else:
        print(bench.format_verdicts(verdicts))
    failing = [v for v in verdicts if v.status == "fail"]
    if failing:
        _err("bound violated for: " + ", ".join(f"{v.scheme}@r={v.r}" for v in failing))
        return EXIT_VERIFY
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gnystrom",
        description="Randomized low-rank approximation: generate, approximate, bench, verify-bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic test matrix and its spectrum sidecar")
    p.add_argument("spec", help=f"generator name: {', '.join(GENERATOR_NAMES)}")
    p.add_argument("-m", "--size", type=int, default=300)
    p.add_argument("--density", type=float, default=0.01, help="flat-sparse fill fraction")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output", required=True, help="Matrix Market path; spectrum goes to <output>.spectrum")
    p.add_argument("--format", choices=("auto", "coordinate", "array"), default="auto")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("approximate", help="approximate a Matrix Market matrix")
    p.add_argument("input")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    p.add_argument("-r", "--rank", type=int, required=True)
    p.add_argument("-l", "--oversampling", type=int, default=None,
                   help="GN oversampling (default max(2, ceil(r/2)))")
    p.add_argument("--power-q", type=int, default=0, help="power iterations (rsvd)")
    p.add_argument("--sketch", choices=("gaussian", "sparse_sign", "srtt", "column_sampling"),
                   default="gaussian")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output", required=True, help="prefix for <prefix>.{L,M,Rt}.mtx")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("bench", help="run a sweep described by a JSON config")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None, help="override seed_base")
    p.add_argument("--output", default=None, help="override the config's output path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify-bounds", help="check sweep CSV trial means against error bounds")
    p.add_argument("csv")
    p.add_argument("spectrum", help="plain text, one singular value per line")
    p.add_argument("-k", type=int, required=True, help="target rank of the bounds")
    p.add_argument("--min-trials", type=int, default=20)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify_bounds)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
