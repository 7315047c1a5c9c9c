import os

import pytest
from hypothesis import HealthCheck, settings

from mpd.complex import FreeComplex, Multifiltration

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

# a=0, b=1, c=2; edges listed as bc, ac, ab to match the usual picture
TRIANGLE = (
    ((0,), (0, 0)),
    ((1,), (1, 0)),
    ((2,), (0, 1)),
    ((1, 2), (1, 1)),
    ((0, 2), (0, 1)),
    ((0, 1), (1, 0)),
    ((0, 1, 2), (2, 2)),
)


def triangle_filtration(p=2):
    return Multifiltration(2, TRIANGLE, p)


def staircase_complex(hi, p=3):
    """C_{-1} = F(0,0), C_d = F(d,d+1) + F(d+1,d), with H_d = k at (d+1,d+1)."""
    gens = [((0, 0),)] + [((d, d + 1), (d + 1, d)) for d in range(0, hi + 1)]
    diffs = {0: [{0: 1}, {0: 1}]}
    for d in range(1, hi + 1):
        s = (-1) ** d % p
        diffs[d] = [{0: s, 1: 1}, {0: 1, 1: s}]
    return FreeComplex.from_maps(2, p, -1, gens, diffs).check()


def two_param_resolution(p=3):
    gens = [((0, 2), (2, 0)), ((0, 4), (2, 2), (4, 0)), ((4, 4),)]
    diffs = {
        1: [{0: 1}, {0: 1, 1: 1}, {1: 1}],
        2: [{0: 1, 1: -1 % p, 2: 1}],
    }
    return FreeComplex.from_maps(2, p, 0, gens, diffs).check()


@pytest.fixture
def triangle():
    return triangle_filtration()
