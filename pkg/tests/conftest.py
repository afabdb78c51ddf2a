"""Shared algebras; construction is exact and reused across a module."""

import pytest

from nilsolv.freelie import build_algebra


@pytest.fixture(scope="session")
def f22():
    return build_algebra(2, 2)


@pytest.fixture(scope="session")
def f24():
    return build_algebra(2, 4)


@pytest.fixture(scope="session")
def f25():
    return build_algebra(2, 5)


@pytest.fixture(scope="session")
def f33():
    return build_algebra(3, 3)
