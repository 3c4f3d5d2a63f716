import numpy as np
import pytest

import skdrift as sk


@pytest.fixture
def einstein_spec():
    """Brownian-particle coefficients gamma=1+x/100, sigma=sqrt(2 gamma)."""
    gamma, sigma = sk.from_einstein(
        sk.ScalarField(lambda x: 1.0 / (1.0 + np.asarray(x, float) / 100.0),
                       lambda x: -0.01 / (1.0 + np.asarray(x, float) / 100.0) ** 2),
        kBT=1.0)
    return sk.DynamicsSpec(force=sk.constant(0.0), friction=gamma, noise=sigma,
                           domain=(-50.0, 200.0), x0=0.0, v0=0.0)


@pytest.fixture
def sin_noise():
    return sk.sinusoid(2.0, 1.0)


def zero_path(n_steps=1000, dt=1e-3):
    """A driving path with no noise, for deterministic-limit tests."""
    return sk.WienerPath(dt=dt, increments=np.zeros(n_steps), seed=0)
