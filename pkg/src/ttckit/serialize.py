"""Canonical file formats: instance JSON, allocation JSON, preference CSV.

All identifiers are 1-based on disk and 0-based in memory. The dump
functions emit a canonical form (fixed key order, two-space indent,
trailing newline) so that ``dumps(parse(text)) == text`` for files that
are already canonical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from ttckit.errors import InputError, NotPermutationError
from ttckit.model import (
    Allocation,
    Endowment,
    Instance,
    PickTrace,
    PreferenceProfile,
    RoundTrace,
    validate_profile,
)

# ---------------------------------------------------------------------------
# instances


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("instance file must contain a JSON object")
    try:
        prefs = doc["preferences"]
    except KeyError:
        raise InputError('instance file is missing "preferences"') from None
    if not isinstance(prefs, list) or not all(isinstance(row, list) for row in prefs):
        raise InputError('"preferences" must be a list of lists')
    profile = validate_profile(prefs)

    declared_n = doc.get("n")
    if declared_n is not None and declared_n != profile.n:
        raise InputError(f'"n" is {declared_n} but there are {profile.n} preference rows')

    raw_endowment = doc.get("endowment")
    if raw_endowment is None:
        endowment = Endowment.identity(profile.n)
    else:
        if not isinstance(raw_endowment, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in raw_endowment
        ):
            raise InputError('"endowment" must be null or a list of integers')
        if len(raw_endowment) != profile.n:
            raise InputError(
                f'"endowment" has {len(raw_endowment)} entries for {profile.n} agents'
            )
        try:
            endowment = Endowment(tuple(v - 1 for v in raw_endowment))
        except NotPermutationError as exc:
            raise InputError(f"bad endowment: {exc}") from exc

    label = doc.get("label", "")
    if not isinstance(label, str):
        raise InputError('"label" must be a string')
    seed = doc.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise InputError('"seed" must be an integer when present')
    return Instance(profile, endowment, label=label, seed=seed)


def _int_row(row: Iterable[int]) -> str:
    return "[" + ", ".join(str(value + 1) for value in row) + "]"


def dumps_instance(instance: Instance) -> str:
    """Canonical form: two-space indent, one preference row per line."""
    rows = ",\n    ".join(_int_row(row) for row in instance.profile.ranking)
    if instance.endowment.object_of == tuple(range(instance.n)):
        endowment = "null"
    else:
        endowment = _int_row(instance.endowment.object_of)
    lines = [
        "{",
        f'  "n": {instance.n},',
        '  "preferences": [',
        f"    {rows}",
        "  ],",
        f'  "endowment": {endowment},',
        f'  "label": {json.dumps(instance.label)}'
        + ("," if instance.seed is not None else ""),
    ]
    if instance.seed is not None:
        lines.append(f'  "seed": {instance.seed}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def save_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(instance), encoding="utf-8")


# ---------------------------------------------------------------------------
# preference CSV (rows only, no header)


def parse_preferences_csv(text: str) -> PreferenceProfile:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append([int(cell) for cell in line.split(",")])
        except ValueError:
            raise InputError(f"line {lineno}: expected comma-separated integers") from None
    return validate_profile(rows)


def dumps_preferences_csv(profile: PreferenceProfile) -> str:
    return "".join(",".join(str(obj + 1) for obj in row) + "\n" for row in profile.ranking)


def load_preferences_csv(path: str | Path) -> PreferenceProfile:
    return parse_preferences_csv(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# allocations


def _trace_to_json(trace: RoundTrace | PickTrace | None) -> Any:
    if trace is None:
        return None
    if isinstance(trace, RoundTrace):
        return [
            [[agent + 1 for agent in cycle] for cycle in cycles] for cycles in trace.rounds
        ]
    return [[agent + 1, obj + 1] for agent, obj in trace.picks]


def _trace_from_json(method: str, raw: Any) -> RoundTrace | PickTrace | None:
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise InputError('"trace" must be a list')
    try:
        if method == "classical":
            return RoundTrace(
                tuple(
                    tuple(tuple(agent - 1 for agent in cycle) for cycle in cycles)
                    for cycles in raw
                )
            )
        return PickTrace(tuple((agent - 1, obj - 1) for agent, obj in raw))
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed trace: {exc}") from exc


def parse_allocation(text: str) -> Allocation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("allocation file must contain a JSON object")
    method = doc.get("method")
    if method not in ("classical", "spectral"):
        raise InputError(f'"method" must be "classical" or "spectral", got {method!r}')
    raw_assignment = doc.get("assignment")
    if not isinstance(raw_assignment, dict):
        raise InputError('"assignment" must be an object mapping agent to object')
    n = len(raw_assignment)
    assignment = [0] * n
    for key, value in raw_assignment.items():
        try:
            agent = int(key)
        except ValueError:
            raise InputError(f"assignment key {key!r} is not an agent id") from None
        if not 1 <= agent <= n:
            raise InputError(f"assignment agent {agent} out of range 1..{n}")
        if not isinstance(value, int) or isinstance(value, bool):
            raise InputError(f"assignment value for agent {agent} is not an integer")
        assignment[agent - 1] = value - 1
    return Allocation(
        tuple(assignment), method, trace=_trace_from_json(method, doc.get("trace"))
    )


def dumps_allocation(allocation: Allocation) -> str:
    """Canonical form: assignment and trace each on a single line."""
    assignment = ", ".join(
        f'"{agent + 1}": {obj + 1}' for agent, obj in enumerate(allocation.assignment)
    )
    trace = json.dumps(_trace_to_json(allocation.trace))
    lines = [
        "{",
        f'  "method": "{allocation.method}",',
        f'  "assignment": {{{assignment}}},',
        f'  "trace": {trace}',
        "}",
    ]
    return "\n".join(lines) + "\n"


def load_allocation(path: str | Path) -> Allocation:
    return parse_allocation(Path(path).read_text(encoding="utf-8"))


def save_allocation(allocation: Allocation, path: str | Path) -> None:
    Path(path).write_text(dumps_allocation(allocation), encoding="utf-8")
