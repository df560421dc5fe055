import numpy as np
import pytest

from depletion import profiles as prof


@pytest.fixture(scope="session")
def fig4_profiles():
    return {
        "minkowski": prof.minkowski(),
        "rindler": prof.rindler(0.0),
        "rainbow": prof.rainbow(0.01),
        "sine": prof.sine(1.0, 0.5),
    }


@pytest.fixture
def sites():
    def _sites(N):
        return np.arange(1, N + 1) / N

    return _sites
