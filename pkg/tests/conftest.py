import numpy as np
import pytest

from twistcav import CavityConfig, UniaxialMedium

QUARTZ_N_O = 1.547
QUARTZ_N_E = 1.556
CAVITY_LENGTH = 1e-4  # cm, the worked scenario


@pytest.fixture
def quartz() -> UniaxialMedium:
    return UniaxialMedium.from_indices(QUARTZ_N_O, QUARTZ_N_E)


@pytest.fixture
def quartz_cavity(quartz) -> CavityConfig:
    return CavityConfig(length=CAVITY_LENGTH, medium=quartz)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260811)


def random_medium(rng) -> UniaxialMedium:
    """Random positive-uniaxial medium with 1 < n_o < n_e < 3."""
    n_o = rng.uniform(1.01, 2.5)
    n_e = n_o + rng.uniform(0.05, min(0.45, 2.99 - n_o))
    return UniaxialMedium.from_indices(n_o, n_e)


def random_off_axis_wavevector(rng):
    """Random wavevector bounded away from the optic axis."""
    from twistcav import WaveVector

    while True:
        k = rng.normal(size=3) * rng.uniform(0.5, 2.0)
        norm = np.linalg.norm(k)
        if norm > 1e-3 and np.hypot(k[0], k[1]) > 0.05 * norm:
            return WaveVector(*k)
