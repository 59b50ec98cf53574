import pytest

from cuemoments.charfn import build_charfn


@pytest.fixture(scope="session")
def table_s0():
    return build_charfn(0.0)


@pytest.fixture(scope="session")
def table_s1():
    return build_charfn(1.0)


@pytest.fixture(scope="session")
def table_s2():
    return build_charfn(2.0)
