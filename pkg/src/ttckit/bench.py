"""Scaling benchmark for the two solvers.

Timing discipline: one warm-up solve per (size, method) is executed and
discarded, each timed region wraps exactly one solve (no generation, no
parsing, no I/O), and the process is pinned to a single logical CPU while
measuring where the platform supports it. Results are reported as median /
p10 / p90 over the repetitions, plus the iteration count (spectral) or
round count (classical) of the measured instance.

The log-log fit turns the medians into empirical scaling exponents, which
is the honest way to talk about asymptotics from measurements.
"""

from __future__ import annotations

import csv
import os
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from time import perf_counter
from typing import Iterator, Sequence

import numpy as np

from ttckit.classical import solve_classical
from ttckit.errors import InputError
from ttckit.generator import GeneratorConfig, generate_one
from ttckit.model import Instance
from ttckit.spectral import run_pipeline

CSV_HEADER = ("n", "method", "median_ms", "p10_ms", "p90_ms", "iters_or_rounds")
BENCH_METHODS = ("classical", "spectral")


@dataclass(frozen=True)
class BenchRecord:
    n: int
    method: str
    median_ms: float
    p10_ms: float
    p90_ms: float
    iters_or_rounds: int

    def __post_init__(self) -> None:
        if self.method not in BENCH_METHODS:
            raise InputError(f"unknown method {self.method!r}")
        if min(self.median_ms, self.p10_ms, self.p90_ms) <= 0:
            raise InputError("wall times must be strictly positive")


@contextmanager
def _pinned_to_one_cpu() -> Iterator[None]:
    if not hasattr(os, "sched_setaffinity"):
        yield
        return
    original = os.sched_getaffinity(0)
    os.sched_setaffinity(0, {min(original)})
    try:
        yield
    finally:
        os.sched_setaffinity(0, original)


def _solve_once(instance: Instance, method: str, tol: float, max_iter: int) -> tuple[float, int]:
    """(milliseconds, iterations-or-rounds) for a single timed solve."""
    if method == "classical":
        start = perf_counter()
        allocation = solve_classical(instance)
        elapsed = perf_counter() - start
        return elapsed * 1e3, len(allocation.trace.rounds)
    start = perf_counter()
    result = run_pipeline(instance, tol=tol, max_iter=max_iter)
    elapsed = perf_counter() - start
    return elapsed * 1e3, result.ordering.iterations


def run_bench(
    sizes: Sequence[int],
    repetitions: int = 5,
    methods: Sequence[str] = BENCH_METHODS,
    seed: int = 2024,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> list[BenchRecord]:
    if not sizes:
        raise InputError("sizes must be non-empty")
    if repetitions < 3:
        raise InputError(f"repetitions must be at least 3, got {repetitions}")
    for method in methods:
        if method not in BENCH_METHODS:
            raise InputError(f"unknown method {method!r}")
    records = []
    with _pinned_to_one_cpu():
        for n in sizes:
            instance = generate_one(GeneratorConfig(n=n, count=1, seed=seed), 0)
            for method in methods:
                _solve_once(instance, method, tol, max_iter)  # warm-up, discarded
                times = []
                detail = 0
                for _ in range(repetitions):
                    elapsed_ms, detail = _solve_once(instance, method, tol, max_iter)
                    times.append(elapsed_ms)
                p10, median, p90 = np.percentile(times, (10, 50, 90))
                records.append(
                    BenchRecord(n, method, float(median), float(p10), float(p90), detail)
                )
    return records


def write_csv(records: Sequence[BenchRecord], path: str | Path, overwrite: bool = False) -> None:
    """Append records; the header is written only when the file starts empty.
    Pass ``overwrite=True`` to truncate instead of appending."""
    target = Path(path)
    needs_header = overwrite or not target.exists() or target.stat().st_size == 0
    with target.open("w" if overwrite else "a", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        if needs_header:
            writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(
                (
                    record.n,
                    record.method,
                    f"{record.median_ms:.6f}",
                    f"{record.p10_ms:.6f}",
                    f"{record.p90_ms:.6f}",
                    record.iters_or_rounds,
                )
            )


def read_csv(path: str | Path) -> list[BenchRecord]:
    records = []
    with Path(path).open(newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            records.append(
                BenchRecord(
                    n=int(row["n"]),
                    method=row["method"],
                    median_ms=float(row["median_ms"]),
                    p10_ms=float(row["p10_ms"]),
                    p90_ms=float(row["p90_ms"]),
                    iters_or_rounds=int(row["iters_or_rounds"]),
                )
            )
    return records


def fit_exponents(records: Sequence[BenchRecord]) -> dict[str, float]:
    """Per-method slope of log(median_ms) against log(n).

    A slope near 1 means linear scaling, near 2 quadratic; anything clearly
    above 0 rules out constant-time behaviour.
    """
    exponents = {}
    for method in dict.fromkeys(record.method for record in records):
        points = [(record.n, record.median_ms) for record in records if record.method == method]
        if len(points) < 2:
            raise InputError(f"need at least two sizes to fit an exponent for {method}")
        xs = np.log([n for n, _ in points])
        ys = np.log([ms for _, ms in points])
        exponents[method] = float(np.polyfit(xs, ys, 1)[0])
    return exponents


def format_report(records: Sequence[BenchRecord]) -> str:
    lines = [f"{'n':>6}  {'method':<10}{'median_ms':>12}{'p10_ms':>12}{'p90_ms':>12}{'iters/rounds':>14}"]
    for record in records:
        lines.append(
            f"{record.n:>6}  {record.method:<10}{record.median_ms:>12.3f}"
            f"{record.p10_ms:>12.3f}{record.p90_ms:>12.3f}{record.iters_or_rounds:>14}"
        )
    if len({record.n for record in records}) >= 2:
        exponents = fit_exponents(records)
        fitted = ", ".join(
            f"{method} ~ n^{slope:.2f}" for method, slope in exponents.items()
        )
        lines.append(f"measured scaling exponents (log-log fit of median time): {fitted}")
        if any(slope > 0.2 for slope in exponents.values()):
            lines.append(
                "no method shows constant-time scaling; spectral cost grows with the "
                "n^2 matrix entries each iteration touches"
            )
    return "\n".join(lines)
