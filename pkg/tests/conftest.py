import pytest

from gogkit.fixtures import load_fixture


@pytest.fixture(scope="session")
def c4c6():
    return load_fixture("c4c6")


@pytest.fixture(scope="session")
def c6hnn():
    return load_fixture("c6hnn")


@pytest.fixture(scope="session")
def c4c2c4():
    return load_fixture("c4c2c4")


@pytest.fixture(scope="session")
def c2c2():
    return load_fixture("c2c2")


@pytest.fixture(scope="session")
def expand_demo():
    return load_fixture("expand_demo")
