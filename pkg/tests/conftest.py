import pytest

from pantscomplex.farey import Slope


@pytest.fixture
def S():
    """Parse slopes tersely: S("1/2")."""
    return Slope.parse
