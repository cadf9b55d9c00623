import os

import hypothesis
import numpy as np
import pytest

from cuspbound.domain import CuspProfile

np.seterr(all='warn')

hypothesis.settings.register_profile('default', max_examples=50, deadline=None)
hypothesis.settings.register_profile('fast', max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))


@pytest.fixture
def h1_3d():
    return CuspProfile(3, (1.0, 1.0))


@pytest.fixture
def cusp_3d():
    return CuspProfile(3, (2.0, 2.0))
