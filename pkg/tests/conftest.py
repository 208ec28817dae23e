import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CORPUS = ("Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "S3", "D4", "Q8")
SMALL = ("Z2", "Z4", "Z6", "Z2xZ2", "S3", "Q8")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def engine_t_step(t):
    """B_1/2 on a 1 + t JP through the generic engine, read off without cancellation.

    For t <= 1 the Plus 2-box (a + b delta/2, b delta/2) is used; for t > 1 the Minus
    2-box (a + delta b, a), where b is the larger coordinate and a is read directly.
    """
    from qfourier.algebra import MINUS, TwoBox
    from qfourier.blockmap import b_lambda
    from qfourier.groups import cyclic
    from qfourier.ising import SQRT2, IsingElement

    if t <= 1:
        return IsingElement.from_twobox(b_lambda(IsingElement(1.0, t).to_twobox(), 0.5)).t
    y = b_lambda(TwoBox(cyclic(2), MINUS, [1.0 + SQRT2 * t, 1.0]), 0.5).coeff.real
    return (y[0] - y[1]) / SQRT2 / y[1]
