import json
import os
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import settings

from thetacycles.quadspace import QuadSpace, mat
from thetacycles.lattice import LatticeData
from thetacycles.binarymodel import GroupSpec
from thetacycles import lift as lf

# fixed seeds everywhere: hypothesis runs are reproducible
settings.register_profile("fixed", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("fixed")

DATA = os.path.join(os.path.dirname(__file__), "data")

CORPUS_A_GRAM = [[0, 0, -1], [0, 6, 0], [-1, 0, 0]]
WITT2_GRAM = [[0, 0, F(-1, 2)], [0, 2, 0], [F(-1, 2), 0, 0]]
DIAG = [[1, 0, 0], [0, 1, 0], [0, 0, -1]]


@pytest.fixture(autouse=True)
def _quiet_group_warnings():
    # the level-divisibility warning is expected for the corpus (N = 3, level 12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


@pytest.fixture(scope="session")
def oracles():
    with open(os.path.join(DATA, "oracles.json")) as f:
        return json.load(f)


def lattice(gram):
    return LatticeData(QuadSpace(mat(gram)))


CORPUS = {
    # name: (gram, h, u, N)
    "A": (CORPUS_A_GRAM, (0, F(1, 6), 0), (1, 0, -1), 3),
    "B": (CORPUS_A_GRAM, (0, F(1, 6), 0), (1, 1, -1), 3),
    "C": (CORPUS_A_GRAM, (0, F(1, 6), 0), (1, 0, -2), 3),
    "D": ([[0, 0, -1], [0, 10, 0], [-1, 0, 0]], (0, F(1, 10), 0), (1, 0, -1), 5),
    "E": ([[3, 0, 0], [0, 3, 0], [0, 0, -3]], (0, F(1, 3), 0), (1, 2, 0), 12),
}


def corpus_spec(name):
    gram, h, u, N = CORPUS[name]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return lf.cycle_spec(lattice(gram), h, u, GroupSpec("congruence", N))


@pytest.fixture(scope="session")
def spec_a():
    return corpus_spec("A")
