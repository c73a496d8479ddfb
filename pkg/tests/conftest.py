import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hmono.checks.cost.kernel import build_cost
from hmono.checks.transport import analytic_zoo
from hmono.config import load_settings
from hmono.utils.types import RunContext

settings.register_profile("hmono", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("hmono")


@pytest.fixture
def fast_settings():
    return load_settings("fast")


@pytest.fixture
def make_ctx(fast_settings):
    """RunContext for a zoo map under an isotropic cost, with the fast profile."""

    def factory(name: str, n: int = 2, p: float = 2.0, params: dict | None = None, count: int = 64):
        cost = build_cost(n, p)
        dmap = analytic_zoo(name, n, params, count=count)
        return RunContext(cost=cost, dmap=dmap, settings=fast_settings, seed=fast_settings.seed)

    return factory


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
