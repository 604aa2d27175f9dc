"""Shared fixtures: small fields and systems that keep the suite fast."""

from random import Random

import pytest

from aelab.aedh import exchange, gen_system
from aelab.ffield import FieldSpec


@pytest.fixture
def rng():
    return Random(12345)


@pytest.fixture(scope="session")
def gf2():
    return FieldSpec(2)


@pytest.fixture(scope="session")
def gf5():
    return FieldSpec(5)


@pytest.fixture(scope="session")
def gf9():
    return FieldSpec(3, 2)


@pytest.fixture(scope="session")
def gf32():
    return FieldSpec.for_order(32)


@pytest.fixture(scope="session")
def gf256():
    return FieldSpec.for_order(256)


@pytest.fixture(scope="session")
def params8(gf32):
    """Standard system data on 8 strands over GF(32)."""
    return gen_system(8, gf32, 4, 4, Random(7))


@pytest.fixture(scope="session")
def exchange8(params8):
    return exchange(params8, Random(8))
