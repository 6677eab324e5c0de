import pytest

from planar4crit.assembly import build_gn
from planar4crit.criticality import extract_qn


@pytest.fixture(scope="session")
def g4():
    return build_gn(4)


@pytest.fixture(scope="session")
def g5():
    return build_gn(5)


@pytest.fixture(scope="session")
def q4(g4):
    return extract_qn(g4)
