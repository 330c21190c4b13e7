import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# deterministic property tests; seeds are fixed here, never in the CLI
settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

FUZZ_SEED = 20240611


@pytest.fixture
def rng():
    return np.random.default_rng(FUZZ_SEED)
