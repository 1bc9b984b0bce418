from fractions import Fraction

import pytest

from persistent_ruin import ModelParams, homogeneous_params
from persistent_ruin.ring import SeriesRing


@pytest.fixture(scope="session")
def p_mixed():
    return ModelParams(Fraction(1, 3), Fraction(3, 5), 3, 7)


@pytest.fixture(scope="session")
def p_small():
    return ModelParams(Fraction(1, 3), Fraction(3, 5), 3, 5)


@pytest.fixture(scope="session")
def p_homog():
    return homogeneous_params(Fraction(1, 2), 5, f=3)


@pytest.fixture(scope="session")
def ring10():
    return SeriesRing(max_degree=10)
