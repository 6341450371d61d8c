from fractions import Fraction

import pytest

from bieberbach import catalog
from bieberbach.crystal import CrystalGroup

HALF = Fraction(1, 2)


@pytest.fixture
def klein():
    return catalog.get("klein").group


@pytest.fixture
def hw():
    return catalog.get("hantzsche-wendt").group


@pytest.fixture
def g2():
    return catalog.get("G2").group


def make(dim, gens=(), vecs=(), name="test"):
    return CrystalGroup(dim, tuple(gens), tuple(vecs), name)
