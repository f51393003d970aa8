"""Crepant resolver tests.

The terminalization invariants double as oracles here: total multiplicity
must match the lattice index of the input (volume conservation), every
ray must sit at height one (crepancy), and no chart may keep a box point
at height one (terminality).  Each is computed from the output fan alone,
independently of how the subdivision was produced.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quotsing.errors import InputError
from quotsing.crepant_resolver import (
    Terminalization,
    smoothness_check,
    stellar_subdivide,
    terminalize,
    verify_crepant,
    verify_terminal,
    verify_volume_conservation,
)
from quotsing.toric_kernel import (
    Fan,
    box_points,
    classify_cone,
    fan_multiplicities,
    junior_points,
    quotient_cone,
)


def test_a1_surface():
    t = terminalize(quotient_cone((2, (1, 1))))
    assert t.cone_count == 2 and t.smooth and t.crepant and t.terminal
    assert t.multiplicity_sum == 2


def test_one_third_blowup():
    t = terminalize(quotient_cone((3, (1, 1, 1))))
    assert t.cone_count == 3
    assert t.multiplicities == (1, 1, 1)
    assert t.smooth and t.crepant and t.terminal
    assert len(t.juniors) == 1


def test_terminal_input_unchanged():
    t = terminalize(quotient_cone((2, (1, 1, 1, 1))))
    assert t.cone_count == 1 and t.juniors == ()
    assert t.fan.rays == t.cone.rays
    assert t.terminal and t.crepant and not t.smooth
    assert t.multiplicity_sum == 2


def test_rays_are_orthant_rays_plus_juniors():
    c = quotient_cone((6, (1, 2, 3)))
    t = terminalize(c)
    assert t.ray_count == c.dimension + len(junior_points(c))
    junior_vectors = {b.lattice for b in t.juniors}
    assert set(t.fan.rays) == set(c.rays) | junior_vectors


def test_rejects_non_gorenstein():
    with pytest.raises(InputError):
        terminalize(quotient_cone((3, (1, 0, 0))))


@given(
    d=st.integers(min_value=1, max_value=14),
    a=st.integers(min_value=0, max_value=13),
)
@settings(max_examples=50, deadline=None)
def test_sl3_cyclic_terminalizations_are_smooth(d, a):
    # SL(3) weights 1/d(1, a, d-1-a): full crepant resolutions exist in
    # dimension three, so the terminalization must be unimodular
    exps = (1 % d, a % d, (d - 1 - a) % d)
    c = quotient_cone((d, exps))
    if not c.gorenstein:
        return
    t = terminalize(c)
    assert t.crepant and t.terminal and t.smooth
    assert t.multiplicity_sum == c.multiplicity
    assert t.cone_count == c.multiplicity  # unimodular cones partition the volume


@given(
    d=st.integers(min_value=1, max_value=10),
    a=st.integers(min_value=0, max_value=9),
    b=st.integers(min_value=0, max_value=9),
)
@settings(max_examples=50, deadline=None)
def test_sl4_cyclic_terminalization_invariants(d, a, b):
    exps = (1 % d, a % d, b % d, (-1 - a - b) % d)
    c = quotient_cone((d, exps))
    if not c.gorenstein:
        return
    t = terminalize(c)
    assert t.crepant and t.terminal
    assert t.multiplicity_sum == c.multiplicity
    assert verify_volume_conservation(c, t.fan)
    assert verify_crepant(c, t.fan) and verify_terminal(c, t.fan)


def test_terminalize_idempotent_on_each_chart():
    # every chart of a terminalization is itself terminal: re-checking the
    # classification of each subcone box finds nothing at height <= 1
    c = quotient_cone((7, (1, 2, 4)))
    t = terminalize(c)
    assert verify_terminal(c, t.fan)
    assert smoothness_check(t.fan)


def test_stellar_subdivision_volume():
    c = quotient_cone((6, (1, 2, 3)))
    fan = Fan(dimension=3, rays=c.rays, cones=((0, 1, 2),))
    j = junior_points(c)[0]
    sub = stellar_subdivide(fan, j.lattice)
    assert sum(fan_multiplicities(sub)) == 6
    assert j.lattice in sub.rays


def test_stellar_subdivision_point_outside():
    c = quotient_cone((2, (1, 1)))
    fan = Fan(dimension=2, rays=c.rays, cones=((0, 1),))
    with pytest.raises(InputError):
        stellar_subdivide(fan, (-5, -7))


def test_stellar_at_existing_ray_is_noop():
    c = quotient_cone((2, (1, 1)))
    fan = Fan(dimension=2, rays=c.rays, cones=((0, 1),))
    assert stellar_subdivide(fan, tuple(c.rays[0])).cones == fan.cones
