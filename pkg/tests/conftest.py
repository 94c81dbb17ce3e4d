import os
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

from kneadforge import IntPoly, isolate_real_roots  # noqa: E402


@pytest.fixture(scope="session")
def lam_e():
    return isolate_real_roots(IntPoly((-1, 0, -1, 0, 1)), (Fraction(1), Fraction(2)))[0]


@pytest.fixture(scope="session")
def lam_octic():
    return isolate_real_roots(IntPoly((-1, 0, 0, 0, -1, 0, 0, 0, 1)), (Fraction(1), Fraction(2)))[0]
