import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parent))

from zgw.random_instances import variant_spaces  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

VARIANTS = variant_spaces()
VARIANT_NAMES = sorted(VARIANTS)
FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

seeds = st.integers(min_value=0, max_value=2**32 - 1)
variant_names = st.sampled_from(VARIANT_NAMES)
exponents = st.sampled_from([1.0, 1.5, 2.0, 3.0, np.inf])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
