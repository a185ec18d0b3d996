from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from hopftwist.instances import bundled_cocycles, catalog
from hopftwist.twist import Cocycle, verify_main_theorem

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL = ["trivial", "z2", "z2xz2", "sweedler", "groupoid2", "z2_union_z2", "pair_qz2"]
ALL = SMALL + ["groupoid2_s3", "pair_m2"]


@lru_cache(maxsize=None)
def instance(name):
    return catalog()[name]()


@lru_cache(maxsize=None)
def twisted(name, cocycle):
    B, A = instance(name)
    cocs = {"identity": Cocycle.identity(B), **bundled_cocycles(name, B)}
    c = cocs[cocycle]
    rep, T = verify_main_theorem(c, A)
    return c, rep, T


def pairs():
    """(instance, cocycle) names for every bundled cocycle including the identity."""
    out = []
    for name in ALL:
        B, _ = instance(name)
        out += [(name, "identity")] + [(name, k) for k in bundled_cocycles(name, B)]
    return out


@pytest.fixture
def z2xz2():
    return instance("z2xz2")
