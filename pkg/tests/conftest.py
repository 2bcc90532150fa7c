import random

import pytest
from hypothesis import HealthCheck, settings

from chudnovsky import field_make, parse_qspec

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIELD_SPECS = ["2", "3", "2^2", "5", "2^3", "3^2"]


def field_of(spec):
    return parse_qspec(spec)


@pytest.fixture(params=FIELD_SPECS)
def field(request):
    return field_of(request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)
