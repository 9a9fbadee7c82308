import pytest


@pytest.fixture
def rows():
    return [{"a": "1", "b": ""}]
