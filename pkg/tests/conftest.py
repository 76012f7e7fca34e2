"""Shared fixtures and hypothesis profile."""
import os
from datetime import timedelta

import pytest
from hypothesis import settings, HealthCheck

settings.register_profile(
    "default",
    max_examples=25,
    deadline=timedelta(seconds=30),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=100, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def quad_spec():
    from handshake.states import QuadratureSpec
    return QuadratureSpec()


@pytest.fixture(scope="session")
def hydrogen_pair():
    from handshake.states import ground_state, excited_state
    return ground_state(), excited_state()
