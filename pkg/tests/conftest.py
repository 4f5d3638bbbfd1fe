import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.dirname(__file__))

from exactkit.modules import CategoryConfig  # noqa: E402
from exactkit.subfunctors import build_skeleton, enumerate_subfunctors  # noqa: E402


@pytest.fixture(scope="session")
def cfg2():
    return CategoryConfig(2, 2)


@pytest.fixture(scope="session")
def cfg3():
    return CategoryConfig(2, 3)


@pytest.fixture(scope="session")
def skeleton2(cfg2):
    return build_skeleton(cfg2, 3)


@pytest.fixture(scope="session")
def skeleton3(cfg3):
    return build_skeleton(cfg3, 4)


@pytest.fixture(scope="session")
def subfunctors3(skeleton3):
    return enumerate_subfunctors(skeleton3)
