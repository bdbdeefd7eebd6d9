import pytest

from sawbound.census import enumerate_census


@pytest.fixture(scope="session")
def census16():
    return enumerate_census(2, 16, workers=4)


@pytest.fixture(scope="session")
def census8():
    return enumerate_census(2, 8)


@pytest.fixture(scope="session")
def census12():
    return enumerate_census(2, 12)
