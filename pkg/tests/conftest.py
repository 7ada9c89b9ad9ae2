import math

import numpy as np
import pytest

from ychannel.model import ChannelSpec


def random_specs(seed: int, count: int, p_lo: float = 1e-2, p_hi: float = 1e4):
    """Deterministic channel draws: gains uniform (0,1] sorted descending,
    power log-uniform in [p_lo, p_hi]."""
    rng = np.random.Generator(np.random.Philox(seed))
    out = []
    for _ in range(count):
        g = np.sort(1.0 - rng.random(3))[::-1]
        power = 10.0 ** rng.uniform(math.log10(p_lo), math.log10(p_hi))
        out.append(ChannelSpec(float(g[0]), float(g[1]), float(g[2]), float(power)))
    return out


@pytest.fixture(scope="session")
def spec_pool():
    """A reusable pool of 200 random channel instances."""
    return random_specs(seed=1234, count=200)
