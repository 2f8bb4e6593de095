from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ttckit.model import Endowment, Instance, PreferenceProfile
from ttckit.reference import EXAMPLE1, EXAMPLE2

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")


@st.composite
def profiles(draw, min_n: int = 1, max_n: int = 6) -> PreferenceProfile:
    n = draw(st.integers(min_n, max_n))
    rows = tuple(tuple(draw(st.permutations(range(n)))) for _ in range(n))
    return PreferenceProfile(rows)


@st.composite
def instances(draw, min_n: int = 1, max_n: int = 6, identity_only: bool = False) -> Instance:
    profile = draw(profiles(min_n, max_n))
    if identity_only or draw(st.booleans()):
        endowment = Endowment.identity(profile.n)
    else:
        endowment = Endowment(tuple(draw(st.permutations(range(profile.n)))))
    return Instance(profile, endowment)


def identity_top_instance(n: int) -> Instance:
    """Every agent ranks their own object first (then the rest in id order)."""
    rows = tuple(
        (agent,) + tuple(obj for obj in range(n) if obj != agent) for agent in range(n)
    )
    return Instance.identity_endowed(PreferenceProfile(rows))


@pytest.fixture
def example1() -> Instance:
    return EXAMPLE1.instance()


@pytest.fixture
def example2() -> Instance:
    return EXAMPLE2.instance()
