import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from amech import AlgebroidChart
from amech.models import get_builtin, so3_structure_tensor


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def so3_chart():
    return AlgebroidChart.lie_algebra(so3_structure_tensor(), label="so3")


@pytest.fixture(scope="session")
def standard2():
    return AlgebroidChart.standard(2)


@pytest.fixture(scope="session")
def sho_model():
    return get_builtin("euclid-sho")


@pytest.fixture(scope="session")
def rigid_body():
    return get_builtin("so3-rigid-body")


@pytest.fixture(scope="session")
def wong_abelian():
    return get_builtin("wong-abelian")


@pytest.fixture(scope="session")
def atiyah_so3():
    return get_builtin("atiyah-so3")
