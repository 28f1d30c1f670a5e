import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def holomorphic_pool():
    """Holomorphic eta-quotients over levels N <= 60 at the least weight carrying any.

    Levels whose count would need the slow search are skipped, and large
    sets are thinned to about 40 quotients per level.
    """
    from etaspan import count_eta_quotients, eta_quotients, existence_weight
    from etaspan.enumeration import DP_LIMIT, CuspLattice

    pool = []
    for N in range(1, 61):
        w, _ = existence_weight(N)
        for k in (w, 2 * w):
            if CuspLattice(N).dp_size(k) > DP_LIMIT or count_eta_quotients(N, k) > 5000:
                continue
            qs = eta_quotients(N, k)
            step = max(1, len(qs) // 40)
            pool.extend(qs[::step])
    return pool
