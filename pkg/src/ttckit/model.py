"""Domain types for square housing markets.

Agents and objects are numbered 0..n-1 internally. File formats and error
messages use 1-based labels; the conversion happens once, at the parse
boundary (:func:`validate_profile` and the functions in
:mod:`ttckit.serialize`). Ranks are always 1-based: an agent's favourite
object has rank 1.

All types here are immutable after construction and safe to share between
concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ttckit.errors import (
    EmptyInputError,
    InputError,
    NonSquareError,
    NotPermutationError,
    OutOfRangeError,
)


def _permutation_error(where: str, row: Sequence[int], n: int) -> NotPermutationError:
    seen: set[int] = set()
    for value in row:
        if not 0 <= value < n:
            return NotPermutationError(where, f"object {value + 1} out of range 1..{n}")
        if value in seen:
            return NotPermutationError(where, f"object {value + 1} appears more than once")
        seen.add(value)
    missing = min(set(range(n)) - seen)
    return NotPermutationError(where, f"object {missing + 1} is missing")


@dataclass(frozen=True)
class PreferenceProfile:
    """Strict, complete preferences: one ranking row per agent.

    ``ranking[i]`` lists the objects agent ``i`` wants, best first.
    ``ranks[i][j]`` is the 1-based rank agent ``i`` gives object ``j``; it is
    precomputed so lookups in hot loops are plain tuple indexing.
    """

    ranking: tuple[tuple[int, ...], ...]
    ranks: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.ranking)
        if n == 0:
            raise EmptyInputError("profile has no agents")
        ranks = []
        for i, row in enumerate(self.ranking):
            if len(row) != n:
                raise NonSquareError(
                    f"agent {i + 1}: ranking has {len(row)} entries for {n} agents"
                )
            inverse = [0] * n
            ok = True
            for position, obj in enumerate(row, start=1):
                if not isinstance(obj, int) or not 0 <= obj < n or inverse[obj]:
                    ok = False
                    break
                inverse[obj] = position
            if not ok:
                raise _permutation_error(f"agent {i + 1}", row, n)
            ranks.append(tuple(inverse))
        object.__setattr__(self, "ranks", tuple(ranks))

    @property
    def n(self) -> int:
        return len(self.ranking)

    def rank_of(self, agent: int, obj: int) -> int:
        """1-based rank agent gives the object (1 = most preferred)."""
        if not 0 <= agent < self.n:
            raise OutOfRangeError(f"agent {agent} out of range 0..{self.n - 1}")
        if not 0 <= obj < self.n:
            raise OutOfRangeError(f"object {obj} out of range 0..{self.n - 1}")
        return self.ranks[agent][obj]


def validate_profile(raw: Sequence[Sequence[int]]) -> PreferenceProfile:
    """Validate a 1-based preference table (as written in files) and return a profile.

    Raises :class:`EmptyInputError`, :class:`NonSquareError` or
    :class:`NotPermutationError` naming the offending agent row.
    """
    if raw is None or len(raw) == 0:
        raise EmptyInputError("no preference rows given")
    n = len(raw)
    rows = []
    for i, row in enumerate(raw):
        if len(row) != n:
            raise NonSquareError(
                f"agent {i + 1}: row has {len(row)} entries but there are {n} rows"
            )
        converted = []
        for value in row:
            if not isinstance(value, int) or isinstance(value, bool):
                raise NotPermutationError(f"agent {i + 1}", f"entry {value!r} is not an integer")
            converted.append(value - 1)
        rows.append(tuple(converted))
    return PreferenceProfile(tuple(rows))


@dataclass(frozen=True)
class Endowment:
    """Initial ownership: ``object_of[i]`` is the object agent ``i`` owns."""

    object_of: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.object_of)
        if n == 0:
            raise EmptyInputError("endowment has no agents")
        seen = [False] * n
        for obj in self.object_of:
            if not isinstance(obj, int) or not 0 <= obj < n or seen[obj]:
                raise _permutation_error("endowment", self.object_of, n)
            seen[obj] = True

    @classmethod
    def identity(cls, n: int) -> "Endowment":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.object_of)

    def owner_table(self) -> tuple[int, ...]:
        """Inverse map: ``owner_table()[j]`` is the agent owning object ``j``."""
        owners = [0] * self.n
        for agent, obj in enumerate(self.object_of):
            owners[obj] = agent
        return tuple(owners)


@dataclass(frozen=True)
class RoundTrace:
    """Classical elimination history: per round, the cycles removed.

    Each cycle is a tuple of agents, rotated to start at its smallest agent;
    cycles within a round are sorted by that first agent.
    """

    rounds: tuple[tuple[tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class PickTrace:
    """Serial-dictatorship history: (agent, picked object) in pick sequence."""

    picks: tuple[tuple[int, int], ...]

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(agent for agent, _ in self.picks)


METHODS = ("classical", "spectral")


@dataclass(frozen=True)
class Allocation:
    """A bijective agent-to-object assignment plus how it was produced."""

    assignment: tuple[int, ...]
    method: str
    trace: RoundTrace | PickTrace | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}")
        n = len(self.assignment)
        if n == 0:
            raise EmptyInputError("allocation has no agents")
        seen = [False] * n
        for obj in self.assignment:
            if not isinstance(obj, int) or not 0 <= obj < n or seen[obj]:
                raise _permutation_error("assignment", self.assignment, n)
            seen[obj] = True

    @property
    def n(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class Instance:
    """A market: preferences plus endowment, with an optional label and seed."""

    profile: PreferenceProfile
    endowment: Endowment
    label: str = ""
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.profile.n != self.endowment.n:
            raise NonSquareError(
                f"profile has {self.profile.n} agents but endowment has {self.endowment.n}"
            )

    @classmethod
    def identity_endowed(
        cls, profile: PreferenceProfile, label: str = "", seed: int | None = None
    ) -> "Instance":
        return cls(profile, Endowment.identity(profile.n), label, seed)

    @property
    def n(self) -> int:
        return self.profile.n
