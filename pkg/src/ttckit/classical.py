"""Classical Top Trading Cycles on the top-choice functional graph.

Each round, every remaining agent points at the owner of their best-ranked
remaining object. A functional graph on a finite set always contains a
cycle; all cycles found in a round trade and leave together. The result is
the unique TTC allocation for strict preferences.

:func:`chase_assignment` reaches the same allocation by a different route
(path walking with immediate cycle extraction, no rounds) and exists purely
as a cross-check; it must never replace :func:`solve_classical`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping, Sequence

from ttckit.errors import NoActiveObjectsError
from ttckit.model import Allocation, Instance, PreferenceProfile, RoundTrace


@dataclass(frozen=True, eq=False)
class TopChoiceGraph:
    """One round's pointing structure: agent -> owner of top remaining object."""

    active_agents: frozenset[int]
    active_objects: frozenset[int]
    points_to: Mapping[int, int]

    def __post_init__(self) -> None:
        assert set(self.points_to) == self.active_agents
        assert all(target in self.active_agents for target in self.points_to.values())


def top_active_choice(
    profile: PreferenceProfile, agent: int, active_objects: AbstractSet[int]
) -> int:
    """Best-ranked object of ``agent`` among ``active_objects``."""
    for obj in profile.ranking[agent]:
        if obj in active_objects:
            return obj
    raise NoActiveObjectsError(f"agent {agent + 1} has no remaining object to choose from")


def top_choice_graph(
    profile: PreferenceProfile,
    owner: Sequence[int],
    active_agents: Iterable[int],
    active_objects: AbstractSet[int],
) -> TopChoiceGraph:
    """Build one round's graph. ``owner[j]`` is the agent holding object ``j``."""
    points_to = {
        agent: owner[top_active_choice(profile, agent, active_objects)]
        for agent in active_agents
    }
    return TopChoiceGraph(frozenset(points_to), frozenset(active_objects), points_to)


def _rotate_to_min(cycle: list[int]) -> list[int]:
    start = cycle.index(min(cycle))
    return cycle[start:] + cycle[:start]


def find_cycles(graph: TopChoiceGraph) -> list[list[int]]:
    """All cycles of the functional graph, each rotated to start at its
    smallest agent, sorted by that agent. Self-loops are 1-cycles."""
    NEW, ON_WALK, DONE = 0, 1, 2
    state = dict.fromkeys(graph.active_agents, NEW)
    cycles: list[list[int]] = []
    for root in sorted(graph.active_agents):
        if state[root] != NEW:
            continue
        walk: list[int] = []
        agent = root
        while state[agent] == NEW:
            state[agent] = ON_WALK
            walk.append(agent)
            agent = graph.points_to[agent]
        if state[agent] == ON_WALK:
            cycles.append(_rotate_to_min(walk[walk.index(agent):]))
        for member in walk:
            state[member] = DONE
    cycles.sort(key=lambda cycle: cycle[0])
    return cycles


def solve_classical(instance: Instance) -> Allocation:
    """Round-based TTC. Terminates in at most n rounds; trace records, per
    round, the cycles eliminated."""
    profile = instance.profile
    n = instance.n
    owner = instance.endowment.owner_table()
    object_active = [True] * n
    active_objects = set(range(n))
    unassigned = set(range(n))
    assignment = [-1] * n
    # Objects never reactivate, so each agent's frontier into their own
    # ranking only ever advances; total scanning is O(n^2) across rounds.
    frontier = [0] * n
    rounds: list[tuple[tuple[int, ...], ...]] = []
    while unassigned:
        choice: dict[int, int] = {}
        points_to: dict[int, int] = {}
        for agent in unassigned:
            row = profile.ranking[agent]
            at = frontier[agent]
            while not object_active[row[at]]:
                at += 1
            frontier[agent] = at
            choice[agent] = row[at]
            points_to[agent] = owner[row[at]]
        graph = TopChoiceGraph(frozenset(unassigned), frozenset(active_objects), points_to)
        cycles = find_cycles(graph)
        for cycle in cycles:
            for agent in cycle:
                obj = choice[agent]
                assignment[agent] = obj
                object_active[obj] = False
                active_objects.discard(obj)
            unassigned.difference_update(cycle)
        rounds.append(tuple(tuple(cycle) for cycle in cycles))
    return Allocation(tuple(assignment), "classical", RoundTrace(tuple(rounds)))


def chase_assignment(instance: Instance) -> tuple[int, ...]:
    """Alternative TTC route: walk top-choice pointers from the lowest
    unassigned agent, extract the cycle the walk runs into, repeat.

    Produces no trace; with strict preferences the assignment must equal
    ``solve_classical(instance).assignment`` (uniqueness of TTC).
    """
    profile = instance.profile
    n = instance.n
    owner = instance.endowment.owner_table()
    active_objects = set(range(n))
    assignment = [-1] * n
    on_path = [False] * n
    unassigned = n
    while unassigned:
        path: list[int] = []
        choices: list[int] = []
        agent = next(a for a in range(n) if assignment[a] < 0)
        while True:
            obj = top_active_choice(profile, agent, active_objects)
            on_path[agent] = True
            path.append(agent)
            choices.append(obj)
            agent = owner[obj]
            if on_path[agent]:
                for member, got in zip(path[path.index(agent):], choices[path.index(agent):]):
                    assignment[member] = got
                    active_objects.discard(got)
                    unassigned -= 1
                for member in path:
                    on_path[member] = False
                break
    return tuple(assignment)
