import pytest

from sullivan.bigraded import BUILTIN_SPECS, build
from sullivan.selfeq import construct_phi

WEDGE = BUILTIN_SPECS["wedge-s2-s3-s3"]


@pytest.fixture(scope="session")
def wedge6():
    return build(WEDGE, 6)


@pytest.fixture(scope="session")
def wedge6x(wedge6):
    return wedge6.with_circle("x")


@pytest.fixture(scope="session")
def phi6(wedge6x):
    return construct_phi(wedge6x)
