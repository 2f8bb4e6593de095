"""Embedded reference examples and the reproduction gate.

Two small markets with known-good values for every pipeline stage — weight
matrix, column sums, normalized matrix, singular-vector magnitudes, pick
order, allocations, and classical elimination rounds — are compiled in so
that ``ttckit repro`` needs no files on disk. :func:`run_repro` recomputes
everything and diffs it against the constants; degrading the solver
tolerance (e.g. ``--tol 1e-2``) must make the singular-vector check fail,
which is the negative control proving the gate has teeth.

Constants are written 1-based, like the file formats; comparisons convert.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ttckit.classical import solve_classical
from ttckit.model import Instance, validate_profile
from ttckit.spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, run_pipeline

NORMALIZED_TOL = 1e-8
MAGNITUDE_TOL = 1e-6


@dataclass(frozen=True)
class ReferenceExample:
    label: str
    preferences: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[float, ...], ...]
    colsums: tuple[float, ...]
    colsum_tol: float  # 0.0 means bit-exact
    normalized: tuple[tuple[float, ...], ...]
    v0_magnitudes: tuple[float, ...]
    pick_order: tuple[int, ...]
    assignment: tuple[int, ...]
    rounds: tuple[tuple[tuple[int, ...], ...], ...]

    def instance(self) -> Instance:
        return Instance.identity_endowed(validate_profile(self.preferences), label=self.label)


EXAMPLE1 = ReferenceExample(
    label="example1",
    preferences=((1, 2, 3, 4), (4, 1, 3, 2), (2, 1, 4, 3), (1, 4, 3, 2)),
    weights=(
        (1.0, 0.75, 0.5, 0.25),
        (0.75, 0.25, 0.5, 1.0),
        (0.75, 1.0, 0.25, 0.5),
        (1.0, 0.25, 0.5, 0.75),
    ),
    colsums=(3.5, 2.25, 1.75, 2.5),
    colsum_tol=0.0,
    normalized=(
        (0.28571429, 0.33333333, 0.28571429, 0.1),
        (0.21428571, 0.11111111, 0.28571429, 0.4),
        (0.21428571, 0.44444444, 0.14285714, 0.2),
        (0.28571429, 0.11111111, 0.28571429, 0.3),
    ),
    v0_magnitudes=(0.67952481, 0.43424211, 0.33978586, 0.48396838),
    pick_order=(1, 4, 2, 3),
    assignment=(1, 3, 2, 4),
    rounds=(((1,),), ((4,),), ((2, 3),)),
)

EXAMPLE2 = ReferenceExample(
    label="example2",
    preferences=(
        (1, 2, 3, 4, 5),
        (5, 4, 1, 3, 2),
        (2, 1, 5, 4, 3),
        (1, 5, 4, 3, 2),
        (2, 3, 5, 4, 1),
    ),
    weights=(
        (1.0, 0.8, 0.6, 0.4, 0.2),
        (0.6, 0.2, 0.4, 0.8, 1.0),
        (0.8, 1.0, 0.2, 0.4, 0.6),
        (1.0, 0.2, 0.4, 0.6, 0.8),
        (0.2, 1.0, 0.8, 0.4, 0.6),
    ),
    colsums=(3.6, 3.2, 2.4, 2.6, 3.2),
    # 3.6 and 2.6 are not dyadic, so column sums are compared within 1e-12
    # instead of bit-exactly (the example-1 sums are exact binary fractions).
    colsum_tol=1e-12,
    normalized=(
        (0.27777778, 0.25, 0.25, 0.15384615, 0.0625),
        (0.16666667, 0.0625, 0.16666667, 0.30769231, 0.3125),
        (0.22222222, 0.3125, 0.08333333, 0.15384615, 0.1875),
        (0.27777778, 0.0625, 0.16666667, 0.23076923, 0.25),
        (0.05555556, 0.3125, 0.33333333, 0.15384615, 0.1875),
    ),
    v0_magnitudes=(0.53588536, 0.47158305, 0.35029467, 0.38264279, 0.47044069),
    pick_order=(1, 2, 5, 4, 3),
    assignment=(1, 5, 3, 4, 2),
    rounds=(((1,), (2, 5)), ((4,),), ((3,),)),
)

EXAMPLES = (EXAMPLE1, EXAMPLE2)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class ReproReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def render(self) -> str:
        lines = [
            f"{'PASS' if check.ok else 'FAIL'}  {check.name:<44}{check.detail}"
            for check in self.checks
        ]
        passed = sum(check.ok for check in self.checks)
        lines.append(f"{passed}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _vector_str(values: np.ndarray | tuple[float, ...]) -> str:
    return "[" + " ".join(f"{float(v):g}" for v in values) + "]"


def _one_based(assignment: tuple[int, ...]) -> str:
    return " ".join(f"{agent + 1}→{obj + 1}" for agent, obj in enumerate(assignment))


def _check_example(example: ReferenceExample, tol: float, max_iter: int) -> list[Check]:
    instance = example.instance()
    result = run_pipeline(instance, tol=tol, max_iter=max_iter)
    classical = solve_classical(instance)
    checks = []

    def add(name: str, ok: bool, detail: str) -> None:
        checks.append(Check(f"{example.label}: {name}", ok, detail))

    expected_w = np.array(example.weights)
    add(
        "weight matrix (exact)",
        np.array_equal(result.weights.w, expected_w),
        f"max |delta| {np.abs(result.weights.w - expected_w).max():g}",
    )

    expected_colsums = np.array(example.colsums)
    colsum_delta = float(np.abs(result.stochastic.colsum - expected_colsums).max())
    colsum_ok = (
        np.array_equal(result.stochastic.colsum, expected_colsums)
        if example.colsum_tol == 0.0
        else colsum_delta < example.colsum_tol
    )
    add("column sums", colsum_ok, _vector_str(example.colsums))

    normalized_delta = float(np.abs(result.stochastic.m - np.array(example.normalized)).max())
    add(
        f"normalized matrix (tol {NORMALIZED_TOL:g})",
        normalized_delta < NORMALIZED_TOL,
        f"max |delta| {normalized_delta:.3e}",
    )

    magnitude_delta = float(
        np.abs(np.abs(result.ordering.v) - np.array(example.v0_magnitudes)).max()
    )
    add(
        f"singular magnitudes (tol {MAGNITUDE_TOL:g})",
        magnitude_delta < MAGNITUDE_TOL,
        f"max |delta| {magnitude_delta:.3e} in {result.ordering.iterations} iterations",
    )

    got_order = tuple(agent + 1 for agent in result.ordering.order)
    add(
        "pick order",
        got_order == example.pick_order,
        " ".join(str(agent) for agent in got_order),
    )

    expected_assignment = tuple(obj - 1 for obj in example.assignment)
    add(
        "spectral allocation",
        result.allocation.assignment == expected_assignment,
        _one_based(result.allocation.assignment),
    )
    add(
        "classical allocation",
        classical.assignment == expected_assignment,
        _one_based(classical.assignment),
    )
    add(
        "methods agree",
        result.allocation.assignment == classical.assignment,
        "spectral == classical",
    )

    expected_rounds = tuple(
        tuple(tuple(agent - 1 for agent in cycle) for cycle in cycles)
        for cycles in example.rounds
    )
    got_rounds = classical.trace.rounds
    add(
        "classical rounds",
        got_rounds == expected_rounds,
        " | ".join(
            " ".join("(" + ",".join(str(a + 1) for a in cycle) + ")" for cycle in cycles)
            for cycles in got_rounds
        ),
    )
    return checks


def run_repro(tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> ReproReport:
    checks: list[Check] = []
    for example in EXAMPLES:
        checks.extend(_check_example(example, tol, max_iter))
    return ReproReport(tuple(checks))
