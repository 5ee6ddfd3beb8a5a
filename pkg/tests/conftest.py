import pytest

from helpers import mat


@pytest.fixture
def k3_adj():
    return mat([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
