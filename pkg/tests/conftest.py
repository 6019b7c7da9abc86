import numpy as np
import pytest

from pseudoanalytic import formalpowers, genpair

from helpers import unit_weight, yukawa_weight


@pytest.fixture(scope="session")
def yukawa_basis():
    seq = genpair.generating_sequence(yukawa_weight())
    return formalpowers.FormalPowerBasis(seq, 0j, 6)


@pytest.fixture(scope="session")
def unit_basis():
    return formalpowers.FormalPowerBasis(genpair.generating_sequence(unit_weight()), 0j, 8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
