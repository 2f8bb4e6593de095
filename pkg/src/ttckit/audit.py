"""Executable checks of the mechanism-property and equivalence claims.

The oracles here are deliberately the dumbest correct ones: Pareto
efficiency by exhaustive search over all n! reassignments, strategy-proofness
by exhaustive misreport enumeration. They are bounded to small n and exist
so that no cleverness in the solvers has to be trusted.

``compare_methods`` runs both solvers over a batch and measures how often
they agree; disagreement is reported, never asserted. The first instance
that disagrees (or leaves the spectral method individually irrational) can
be persisted as a normal instance file so the finding is shareable.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Callable, Iterable, Sequence

from ttckit.classical import solve_classical
from ttckit.errors import InputError, TooLargeError
from ttckit.model import Allocation, Instance, PreferenceProfile
from ttckit.serialize import save_instance
from ttckit.spectral import solve_spectral

PARETO_MAX_N = 6
MISREPORT_MAX_N = 4

_SOLVERS: dict[str, Callable[[Instance], Allocation]] = {
    "classical": solve_classical,
    "spectral": solve_spectral,
}


def check_individual_rationality(instance: Instance, alloc: Allocation) -> bool:
    """True iff every agent ranks their assigned object weakly above their
    endowed one."""
    ranks = instance.profile.ranks
    endowed = instance.endowment.object_of
    return all(
        ranks[agent][alloc.assignment[agent]] <= ranks[agent][endowed[agent]]
        for agent in range(instance.n)
    )


def check_pareto_efficiency(
    instance: Instance, alloc: Allocation, max_n: int = PARETO_MAX_N
) -> bool:
    """Exhaustive dominance search over all n! bijections.

    True iff no reassignment makes some agent strictly better off (by their
    own ranks) while making nobody worse off.
    """
    n = instance.n
    if n > max_n:
        raise TooLargeError(n, max_n)
    ranks = instance.profile.ranks
    base = [ranks[agent][alloc.assignment[agent]] for agent in range(n)]
    for candidate in permutations(range(n)):
        someone_better = False
        for agent in range(n):
            rank = ranks[agent][candidate[agent]]
            if rank > base[agent]:
                break
            if rank < base[agent]:
                someone_better = True
        else:
            if someone_better:
                return False
    return True


def probe_strategy_proofness(
    instance: Instance, method: str, max_n: int = MISREPORT_MAX_N
) -> int:
    """Count profitable misreports across every agent and every one of the
    n! alternative rankings.

    A misreport is profitable when the deviator's received object, judged by
    their TRUE ranking, strictly beats what truth-telling got them.
    """
    n = instance.n
    if n > max_n:
        raise TooLargeError(n, max_n)
    if method not in _SOLVERS:
        raise InputError(f"unknown method {method!r}")
    solve = _SOLVERS[method]
    truthful = solve(instance).assignment
    violations = 0
    for agent in range(n):
        true_ranks = instance.profile.ranks[agent]
        truthful_rank = true_ranks[truthful[agent]]
        rows = list(instance.profile.ranking)
        for report in permutations(range(n)):
            if report == rows[agent]:
                continue  # re-reporting the truth cannot strictly improve
            deviated = list(rows)
            deviated[agent] = report
            outcome = solve(Instance(PreferenceProfile(tuple(deviated)), instance.endowment))
            if true_ranks[outcome.assignment[agent]] < truthful_rank:
                violations += 1
    return violations


@dataclass(frozen=True)
class AuditReport:
    """Per-instance audit result.

    ``individually_rational`` tracks the spectral allocation — that is the
    method under audit; classical TTC's individual rationality is a theorem
    and is enforced in its own property suite. ``pareto_efficient`` and
    ``misreport_violations`` are None when the corresponding exhaustive
    oracle was skipped (instance too large or check not requested).
    """

    label: str
    seed: int | None
    n: int
    agreement: bool
    individually_rational: bool
    pareto_efficient: bool | None
    misreport_violations: int | None
    classical_ranks: tuple[int, ...]
    spectral_ranks: tuple[int, ...]


def build_report(
    instance: Instance, pareto_max_n: int = 0, misreport_max_n: int = 0
) -> AuditReport:
    """Audit one instance. A bound of 0 disables that oracle; otherwise it
    runs when instance.n is within the bound and is skipped (None) above it."""
    classical = solve_classical(instance)
    spectral = solve_spectral(instance)
    ranks = instance.profile.ranks
    classical_ranks = tuple(ranks[a][classical.assignment[a]] for a in range(instance.n))
    spectral_ranks = tuple(ranks[a][spectral.assignment[a]] for a in range(instance.n))
    pareto: bool | None = None
    if 0 < instance.n <= pareto_max_n:
        pareto = check_pareto_efficiency(
            instance, spectral, max_n=pareto_max_n
        ) and check_pareto_efficiency(instance, classical, max_n=pareto_max_n)
    misreports: int | None = None
    if 0 < instance.n <= misreport_max_n:
        misreports = probe_strategy_proofness(instance, "spectral", max_n=misreport_max_n)
    return AuditReport(
        label=instance.label,
        seed=instance.seed,
        n=instance.n,
        agreement=classical.assignment == spectral.assignment,
        individually_rational=check_individual_rationality(instance, spectral),
        pareto_efficient=pareto,
        misreport_violations=misreports,
        classical_ranks=classical_ranks,
        spectral_ranks=spectral_ranks,
    )


@dataclass(frozen=True)
class ComparisonSummary:
    reports: tuple[AuditReport, ...]
    agreement_rate: float
    ir_failure_count: int
    mean_rank_classical: float
    mean_rank_spectral: float
    counterexample_index: int | None
    counterexample: Instance | None


def _worker(args: tuple[Instance, int, int]) -> AuditReport:
    instance, pareto_max_n, misreport_max_n = args
    return build_report(instance, pareto_max_n, misreport_max_n)


def default_thread_cap() -> int:
    """Parallelism cap from the TTC_THREADS environment variable (default 1)."""
    raw = os.environ.get("TTC_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise InputError(f"TTC_THREADS must be an integer, got {raw!r}") from None
    return max(1, threads)


def compare_methods(
    instances: Sequence[Instance],
    counterexample_path: str | Path | None = None,
    pareto_max_n: int = 0,
    misreport_max_n: int = 0,
    threads: int = 1,
) -> ComparisonSummary:
    """Run both solvers over a batch; reports stay in batch order, so fixed
    seeds give byte-identical report files regardless of ``threads``."""
    if not instances:
        raise InputError("compare_methods requires a non-empty batch")
    jobs = [(instance, pareto_max_n, misreport_max_n) for instance in instances]
    if threads > 1 and len(instances) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = tuple(pool.map(_worker, jobs, chunksize=64))
    else:
        reports = tuple(_worker(job) for job in jobs)

    agreement = sum(report.agreement for report in reports)
    ir_failures = sum(not report.individually_rational for report in reports)
    total_agents = sum(report.n for report in reports)
    counterexample_index = next(
        (
            index
            for index, report in enumerate(reports)
            if not report.agreement or not report.individually_rational
        ),
        None,
    )
    counterexample = None if counterexample_index is None else instances[counterexample_index]
    if counterexample is not None and counterexample_path is not None:
        save_instance(counterexample, counterexample_path)
    return ComparisonSummary(
        reports=reports,
        agreement_rate=agreement / len(reports),
        ir_failure_count=ir_failures,
        mean_rank_classical=sum(sum(r.classical_ranks) for r in reports) / total_agents,
        mean_rank_spectral=sum(sum(r.spectral_ranks) for r in reports) / total_agents,
        counterexample_index=counterexample_index,
        counterexample=counterexample,
    )


def report_line(report: AuditReport) -> str:
    """One AuditReport as one JSON line with a fixed key order."""
    return json.dumps(
        {
            "label": report.label,
            "seed": report.seed,
            "n": report.n,
            "agreement": report.agreement,
            "individually_rational": report.individually_rational,
            "pareto_efficient": report.pareto_efficient,
            "misreport_violations": report.misreport_violations,
            "classical_ranks": list(report.classical_ranks),
            "spectral_ranks": list(report.spectral_ranks),
        }
    )


def write_reports(reports: Iterable[AuditReport], path: str | Path) -> None:
    text = "".join(report_line(report) + "\n" for report in reports)
    Path(path).write_text(text, encoding="utf-8")


def format_summary(summary: ComparisonSummary) -> str:
    skipped = sum(report.pareto_efficient is None for report in summary.reports)
    pareto_failures = sum(report.pareto_efficient is False for report in summary.reports)
    misreport_total = sum(report.misreport_violations or 0 for report in summary.reports)
    lines = [
        f"{'instances':<28}{len(summary.reports)}",
        f"{'agreement rate':<28}{summary.agreement_rate:.4f}",
        f"{'spectral IR failures':<28}{summary.ir_failure_count}",
        f"{'pareto failures':<28}{pareto_failures} ({len(summary.reports) - skipped} checked)",
        f"{'misreport violations':<28}{misreport_total}",
        f"{'mean received rank':<28}classical {summary.mean_rank_classical:.4f}, "
        f"spectral {summary.mean_rank_spectral:.4f}",
    ]
    if summary.counterexample_index is not None:
        report = summary.reports[summary.counterexample_index]
        lines.append(
            f"{'first counterexample':<28}index {summary.counterexample_index}"
            f" (label {report.label or '-'})"
        )
    return "\n".join(lines)
