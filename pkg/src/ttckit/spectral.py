"""Spectral ordering pipeline: ranks -> weights -> leading singular vector
-> pick order -> serial dictatorship.

Stages:

1. ``build_weight_matrix``: w[i][j] = (n - r + 1)/n with r the 1-based rank
   agent i gives object j, so a first choice weighs 1 and a last choice 1/n.
2. ``normalize_columns``: divide each column by its sum, giving the
   column-stochastic view reported alongside the raw weights.
3. ``leading_singular_vector``: power iteration for the dominant right
   singular direction of the raw weight matrix. The unnormalized matrix is
   the one whose leading direction separates agents: column normalization
   rescales every column onto the simplex and drives the dominant right
   singular vector toward the flat 1/sqrt(n) direction, which carries no
   ordering information. The stochastic matrix stays part of the result for
   reporting and diagnostics.
4. ``pick_order``: agents sorted by descending coefficient magnitude
   (sign-invariant), ties broken by ascending agent id.
5. ``serial_dictatorship``: agents pick their favourite remaining object in
   that order.

Every stage is a pure function; :func:`run_pipeline` composes them and keeps
the intermediate products, which the reproduction checks and the benchmark
both need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ttckit.classical import top_active_choice
from ttckit.errors import ConvergenceError, InputError, NotPermutationError
from ttckit.model import Allocation, Instance, PickTrace, PreferenceProfile

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Rank-derived weights; every row is a permutation of {1/n, ..., 1}."""

    w: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", _frozen(np.asarray(self.w, dtype=float)))

    @property
    def n(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True, eq=False)
class ColumnStochasticMatrix:
    """Column-normalized weights plus the pieces they were built from.

    ``m`` has strictly positive entries and unit column sums; ``weights``
    retains the raw weight matrix, which is what the singular-vector stage
    operates on (see module docstring).
    """

    m: np.ndarray
    colsum: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        m = _frozen(np.asarray(self.m, dtype=float))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "colsum", _frozen(np.asarray(self.colsum, dtype=float)))
        object.__setattr__(self, "weights", _frozen(np.asarray(self.weights, dtype=float)))
        if not (m > 0).all():
            raise InputError("normalized matrix must be strictly positive")
        drift = np.abs(m.sum(axis=0) - 1.0).max()
        if drift >= 1e-12:
            raise InputError(f"columns must sum to 1 (off by {drift:.3e})")

    @property
    def n(self) -> int:
        return self.m.shape[0]


@dataclass(frozen=True, eq=False)
class OrderingVector:
    """Unit-norm leading singular direction and the pick order it induces."""

    v: np.ndarray
    order: tuple[int, ...]
    sigma: float
    iterations: int

    def __post_init__(self) -> None:
        v = _frozen(np.asarray(self.v, dtype=float))
        object.__setattr__(self, "v", v)
        if abs(float(np.linalg.norm(v)) - 1.0) > 1e-10:
            raise InputError("ordering vector must have unit norm")
        if sorted(self.order) != list(range(len(v))):
            raise NotPermutationError("pick order", "order must visit every agent once")


def build_weight_matrix(profile: PreferenceProfile) -> WeightMatrix:
    n = profile.n
    ranks = np.asarray(profile.ranks, dtype=float)
    return WeightMatrix((n - ranks + 1.0) / n)


def normalize_columns(weights: WeightMatrix) -> ColumnStochasticMatrix:
    colsum = weights.w.sum(axis=0)
    return ColumnStochasticMatrix(weights.w / colsum, colsum, weights.w)


def leading_singular_vector(
    matrix: ColumnStochasticMatrix,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> OrderingVector:
    """Dominant right singular direction by power iteration on the Gram
    product of the raw weight matrix.

    Starts from the normalized all-ones vector (never random: the matrix is
    strictly positive, so the start cannot be orthogonal to the dominant
    direction, and determinism keeps golden runs reproducible). Converged
    when successive iterates differ by less than ``tol`` in max-norm.
    """
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise InputError(f"max_iter must be at least 1, got {max_iter}")
    gram = matrix.weights.T @ matrix.weights
    n = gram.shape[0]
    v = np.full(n, 1.0 / math.sqrt(n))
    last_delta = math.inf
    for iteration in range(1, max_iter + 1):
        candidate = gram @ v
        candidate /= np.linalg.norm(candidate)
        last_delta = float(np.abs(candidate - v).max())
        v = candidate
        if last_delta < tol:
            break
    else:
        raise ConvergenceError(max_iter, last_delta)
    sigma = math.sqrt(float(v @ (gram @ v)))
    return OrderingVector(v, tuple(pick_order(v)), sigma, iteration)


def pick_order(v: OrderingVector | Sequence[float] | np.ndarray) -> list[int]:
    """Agents by descending coefficient magnitude, ties by ascending id.

    Using magnitudes makes the order invariant under the global sign that a
    singular vector is only defined up to: pick_order(v) == pick_order(-v).
    """
    coeffs = np.abs(np.asarray(v.v if isinstance(v, OrderingVector) else v, dtype=float))
    return sorted(range(len(coeffs)), key=lambda agent: (-coeffs[agent], agent))


def serial_dictatorship(profile: PreferenceProfile, order: Sequence[int]) -> Allocation:
    """Agents pick their favourite remaining object, one at a time, in ``order``."""
    if sorted(order) != list(range(profile.n)):
        raise NotPermutationError("pick order", "order must visit every agent once")
    remaining = set(range(profile.n))
    picks = []
    for agent in order:
        obj = top_active_choice(profile, agent, remaining)
        remaining.discard(obj)
        picks.append((agent, obj))
    assignment = [-1] * profile.n
    for agent, obj in picks:
        assignment[agent] = obj
    return Allocation(tuple(assignment), "spectral", PickTrace(tuple(picks)))


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Every intermediate product of one spectral solve."""

    weights: WeightMatrix
    stochastic: ColumnStochasticMatrix
    ordering: OrderingVector
    allocation: Allocation


def run_pipeline(
    instance: Instance,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SpectralResult:
    weights = build_weight_matrix(instance.profile)
    stochastic = normalize_columns(weights)
    ordering = leading_singular_vector(stochastic, tol=tol, max_iter=max_iter)
    allocation = serial_dictatorship(instance.profile, ordering.order)
    return SpectralResult(weights, stochastic, ordering, allocation)


def solve_spectral(
    instance: Instance,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Allocation:
    """Full pipeline; deterministic for fixed inputs and parameters."""
    return run_pipeline(instance, tol=tol, max_iter=max_iter).allocation
