import numpy as np
import pytest

from qlgreen import kernel_from_callable


def make_random_kernel(n, rng, nu=None, name=None):
    """Positive, smooth test density with a random exponent parameter."""
    a0, b0, c0 = rng.uniform(0.2, 2.0, 3)
    phase = rng.uniform(0.0, np.pi)
    if nu is None:
        nu = float(rng.uniform(0.5, 1.5))

    def w(t):
        t = np.asarray(t, dtype=float)
        return a0 + b0 * t + c0 * np.sin(3.0 * t + phase) ** 2

    return kernel_from_callable(n, nu, w, name=name or f"random(n={n},nu={nu:.3f})")


@pytest.fixture
def kernel_factory():
    return make_random_kernel
