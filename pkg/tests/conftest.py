from fractions import Fraction

import numpy as np
import pytest

from cobose import make_distribution


def random_distribution(rng, max_modes=8, tailed=False, floor=0.05):
    """Random generic spectrum; the floor keeps purity gaps non-degenerate."""
    s = int(rng.integers(2, max_modes + 1))
    w = rng.random(s) + floor
    tail = float(rng.uniform(0.05, 0.6)) if tailed else 0.0
    w = w / w.sum() * (1.0 - tail)
    return make_distribution(w, tail_mass=tail, normalize=True)


def random_rational_distribution(rng, max_modes=6):
    s = int(rng.integers(2, max_modes + 1))
    ints = rng.integers(1, 20, size=s)
    den = int(ints.sum())
    return make_distribution([Fraction(int(a), den) for a in ints])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
