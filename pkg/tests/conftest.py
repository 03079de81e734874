from fractions import Fraction

import pytest
from hypothesis import settings

from servloc.formulation import PointXYQ
from servloc.instance import reference_instance

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ref():
    return reference_instance()


@pytest.fixture
def frac_point():
    """A relaxation-feasible point of the reference instance that the family cuts separate."""
    z = Fraction(0)
    return PointXYQ(
        ((Fraction(2), z), (Fraction(2), z), (z, Fraction(6, 5))),
        (Fraction(1), Fraction(3, 10)),
        ((Fraction(1), z), (Fraction(1), z), (Fraction(7, 10), Fraction(3, 10))),
    )
