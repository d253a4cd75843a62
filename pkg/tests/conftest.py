import numpy as np
import pytest

from qkzkit.context import QContext
from qkzkit.reps import GradingChoice
from qkzkit.rsolve import RCache


@pytest.fixture(scope="session")
def ctx():
    return QContext(q=0.7)


@pytest.fixture(scope="session")
def ctx_complex():
    return QContext(q=0.6 + 0.09j)


@pytest.fixture(scope="session")
def grading():
    return GradingChoice(1, 1)


@pytest.fixture(scope="session")
def grading10():
    return GradingChoice(1, 0)


@pytest.fixture(scope="session")
def cache():
    return RCache()


def zeta_sample(rng, lo=0.5, hi=2.0):
    return (lo + (hi - lo) * rng.random()) * np.exp(2j * np.pi * rng.random())


def z_sample(rng, lo=0.1, hi=0.9):
    # branch-safe scalar samples: |arg z| < pi/2 keeps half-integer powers
    # of z and its shifts on the principal sheet for any admissible q
    return (lo + (hi - lo) * rng.random()) * np.exp(1j * np.pi * (rng.random() - 0.5))
