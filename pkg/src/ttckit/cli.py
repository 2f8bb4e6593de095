"""Command-line front end.

Subcommands: gen, solve, compare, audit, bench, repro. Exit codes follow one
scheme everywhere: 0 success, 1 a reproduction/audit check failed, 2 bad
input (files, flags, malformed markets), 3 numerical failure (power
iteration did not converge).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ttckit.audit import (
    MISREPORT_MAX_N,
    PARETO_MAX_N,
    compare_methods,
    default_thread_cap,
    format_summary,
    write_reports,
)
from ttckit.bench import format_report, run_bench, write_csv
from ttckit.classical import solve_classical
from ttckit.errors import ConvergenceError, InputError, TooLargeError
from ttckit.generator import GeneratorConfig, generate, write_batch
from ttckit.model import Allocation, Instance, PickTrace, RoundTrace
from ttckit.reference import run_repro
from ttckit.serialize import load_instance, load_preferences_csv, save_allocation
from ttckit.spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, run_pipeline

ARROW = "→"


def _assignment_line(allocation: Allocation) -> str:
    return " ".join(
        f"{agent + 1}{ARROW}{obj + 1}" for agent, obj in enumerate(allocation.assignment)
    )


def _print_trace(allocation: Allocation) -> None:
    trace = allocation.trace
    if isinstance(trace, RoundTrace):
        for number, cycles in enumerate(trace.rounds, start=1):
            rendered = " ".join(
                "(" + ",".join(str(agent + 1) for agent in cycle) + ")" for cycle in cycles
            )
            print(f"round {number}: {rendered}")
    elif isinstance(trace, PickTrace):
        print("pick order:", " ".join(str(agent + 1) for agent, _ in trace.picks))
        print("picks:", " ".join(f"{a + 1}{ARROW}{o + 1}" for a, o in trace.picks))


def _load_input(path: Path) -> Instance:
    if path.suffix.lower() == ".csv":
        return Instance.identity_endowed(load_preferences_csv(path), label=path.stem)
    return load_instance(path)


def cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_input(Path(args.input))
    if args.method == "classical":
        allocation = solve_classical(instance)
    else:
        result = run_pipeline(instance, tol=args.tol, max_iter=args.max_iter)
        allocation = result.allocation
        if args.verbose:
            coefficients = " ".join(f"{value:.8f}" for value in result.ordering.v)
            print(f"ordering coefficients: [{coefficients}]")
            print(
                f"sigma {result.ordering.sigma:.8f} after"
                f" {result.ordering.iterations} iterations"
            )
    print(_assignment_line(allocation))
    if args.verbose:
        _print_trace(allocation)
    if args.out:
        save_allocation(allocation, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    config = GeneratorConfig(
        n=args.n, count=args.count, seed=args.seed, model=args.model, theta=args.theta
    )
    paths = write_batch(generate(config), args.out)
    print(f"wrote {len(paths)} instance files to {args.out}")
    return 0


def _generated_batch(args: argparse.Namespace) -> list[Instance]:
    config = GeneratorConfig(
        n=args.n, count=args.count, seed=args.seed, model=args.model, theta=args.theta
    )
    return generate(config)


def cmd_compare(args: argparse.Namespace) -> int:
    summary = compare_methods(
        _generated_batch(args),
        counterexample_path=args.counterexample,
        threads=default_thread_cap(),
    )
    print(format_summary(summary))
    if args.out:
        write_reports(summary.reports, args.out)
        print(f"wrote {args.out}")
    if args.counterexample and summary.counterexample is not None:
        print(f"wrote counterexample to {args.counterexample}")
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    summary = compare_methods(
        _generated_batch(args),
        counterexample_path=args.counterexample,
        pareto_max_n=PARETO_MAX_N,
        misreport_max_n=MISREPORT_MAX_N,
        threads=default_thread_cap(),
    )
    print(format_summary(summary))
    if args.out:
        write_reports(summary.reports, args.out)
        print(f"wrote {args.out}")
    if args.counterexample and summary.counterexample is not None:
        print(f"wrote counterexample to {args.counterexample}")
    return 0


def _parse_sizes(raw: str) -> list[int]:
    try:
        sizes = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"--sizes must be comma-separated integers, got {raw!r}") from None
    if not sizes:
        raise InputError("--sizes must name at least one size")
    return sizes


def cmd_bench(args: argparse.Namespace) -> int:
    methods = [part.strip() for part in args.methods.split(",") if part.strip()]
    records = run_bench(
        _parse_sizes(args.sizes),
        repetitions=args.count,
        methods=methods,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    print(format_report(records))
    if args.out:
        write_csv(records, args.out, overwrite=args.overwrite)
        print(f"wrote {args.out}")
    return 0


def cmd_repro(args: argparse.Namespace) -> int:
    report = run_repro(tol=args.tol, max_iter=args.max_iter)
    print(report.render())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttckit",
        description="Top trading cycles and the spectral ordering pipeline.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, default=DEFAULT_TOL, help="power-iteration tolerance")
    solver.add_argument(
        "--max-iter", type=int, default=DEFAULT_MAX_ITER, help="power-iteration budget"
    )

    batch = argparse.ArgumentParser(add_help=False)
    batch.add_argument("--n", type=int, required=True, help="market size")
    batch.add_argument("--count", type=int, default=1, help="number of instances")
    batch.add_argument("--seed", type=int, default=0, help="batch seed")
    batch.add_argument("--model", choices=("uniform", "popularity"), default="uniform")
    batch.add_argument("--theta", type=float, default=0.0, help="popularity concentration")

    p_solve = subparsers.add_parser("solve", parents=[solver], help="solve one instance file")
    p_solve.add_argument("input", help="instance JSON (or preference CSV) path")
    p_solve.add_argument("--method", choices=("classical", "spectral"), default="classical")
    p_solve.add_argument("--out", help="write the allocation JSON here")
    p_solve.add_argument("--verbose", action="store_true", help="print the trace")
    p_solve.set_defaults(handler=cmd_solve)

    p_gen = subparsers.add_parser("gen", parents=[batch], help="generate instance files")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.set_defaults(handler=cmd_gen)

    p_compare = subparsers.add_parser(
        "compare", parents=[batch], help="measure spectral-vs-classical agreement"
    )
    p_compare.add_argument("--out", help="write per-instance JSON-lines report here")
    p_compare.add_argument("--counterexample", help="write first disagreeing instance here")
    p_compare.set_defaults(handler=cmd_compare)

    p_audit = subparsers.add_parser(
        "audit",
        parents=[batch],
        help="compare plus exhaustive property oracles (small n)",
    )
    p_audit.add_argument("--out", help="write per-instance JSON-lines report here")
    p_audit.add_argument("--counterexample", help="write first disagreeing instance here")
    p_audit.set_defaults(handler=cmd_audit)

    p_bench = subparsers.add_parser("bench", parents=[solver], help="scaling benchmark")
    p_bench.add_argument("--sizes", default="100,200,400,800,1600", help="comma-separated sizes")
    p_bench.add_argument("--count", type=int, default=5, help="repetitions per size")
    p_bench.add_argument("--methods", default="classical,spectral")
    p_bench.add_argument("--seed", type=int, default=2024)
    p_bench.add_argument("--out", help="append records to this CSV")
    p_bench.add_argument(
        "--overwrite", action="store_true", help="truncate the CSV instead of appending"
    )
    p_bench.set_defaults(handler=cmd_bench)

    p_repro = subparsers.add_parser(
        "repro", parents=[solver], help="recompute the embedded reference examples"
    )
    p_repro.set_defaults(handler=cmd_repro)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InputError, TooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
