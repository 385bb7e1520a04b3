from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from klsym.pipeline import EngineRegistry

settings.register_profile("klsym", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("klsym")


@pytest.fixture(scope="session")
def registry() -> EngineRegistry:
    """Shared engines so tests over several k reuse Kloosterman tables."""
    return EngineRegistry()
