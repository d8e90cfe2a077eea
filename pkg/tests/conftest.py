import pytest

from basilica.recursion import SpectralSequence
from basilica.spectrum import SpectrumIsolation


@pytest.fixture(scope="session")
def seq():
    """In-memory spectral sequence shared by the module tests (no disk cache)."""
    return SpectralSequence()


@pytest.fixture(scope="session")
def iso(seq):
    return SpectrumIsolation(seq)
