import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gpml.fixture import load_fixture, fixture_graph  # noqa: E402


@pytest.fixture(scope="session")
def graph():
    return load_fixture()


@pytest.fixture
def fresh_graph():
    return fixture_graph()
