"""Toric kernel tests.

Oracles: for a single cyclic generator the box of the orthant is
enumerable by plain modular arithmetic (the fractional parts of
k*(a_1,...,a_n)/d for k < d), so the Smith-form enumeration is checked
against that; heights are checked against element ages computed by the
group engine, which shares no code path with the lattice side.
"""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from quotsing.errors import InputError
from quotsing.exact_linalg import FieldMatrix
from quotsing.group_engine import (
    GroupSpec,
    closure,
    diag_matrix,
    element_age,
    reid_tai_classify,
    weight_one_class_count,
)
from quotsing.toric_kernel import (
    Fan,
    abelianize,
    box_points,
    classify_cone,
    fan_multiplicities,
    fan_orbifold_euler,
    format_fan,
    junior_points,
    parse_fan,
    quotient_cone,
    sublattice_box,
    validate_fan,
)


def oracle_cyclic_box(d, exps):
    """Fractional orbits of the single generator: the box, by arithmetic."""
    pts = set()
    for k in range(d):
        pts.add(tuple(Fraction((k * a) % d, d) for a in exps))
    return pts


# ---------------------------------------------------------------------------
# lattice construction
# ---------------------------------------------------------------------------


def test_cone_1_6_123_frozen():
    c = quotient_cone((6, (1, 2, 3)))
    assert c.lattice_index == 6 and c.multiplicity == 6 and c.gorenstein
    heights = sorted(b.height for b in box_points(c))
    assert heights == [0, 1, 1, 1, 1, 2]
    assert len(junior_points(c)) == 4
    assert classify_cone(c) == "canonical_not_terminal"


def test_cone_1_2_1111_frozen():
    c = quotient_cone((2, (1, 1, 1, 1)))
    assert sorted(b.height for b in box_points(c)) == [0, 2]
    assert classify_cone(c) == "terminal"
    assert junior_points(c) == ()


def test_non_faithful_weights_collapse():
    c = quotient_cone((4, (2, 2)))
    assert c.lattice_index == 2
    assert {b.standard for b in box_points(c)} == {
        (Fraction(0), Fraction(0)),
        (Fraction(1, 2), Fraction(1, 2)),
    }


def test_multi_generator_lattice():
    # 1/2(1,1,0) and 1/2(0,1,1) generate a non-cyclic group of order 4
    c = quotient_cone([(2, (1, 1, 0)), (2, (0, 1, 1))])
    assert c.lattice_index == 4
    assert sorted(b.height for b in box_points(c)) == [0, 1, 1, 1]


def test_weights_validation():
    with pytest.raises(InputError):
        quotient_cone((0, (1, 2)))
    with pytest.raises(InputError):
        quotient_cone([(2, (1, 1)), (3, (1, 1, 1))])
    with pytest.raises(InputError):
        quotient_cone([])


def test_gl_ray_division():
    # 1/3(1,0,0): e_0/3 is a lattice point, so the ray generator divides
    c = quotient_cone((3, (1, 0, 0)))
    assert not c.gorenstein
    assert c.lattice_index == 3 and c.multiplicity == 1
    assert (1, 0, 0) in {tuple(r) for r in c.rays} or c.multiplicity == 1


@given(
    d=st.integers(min_value=1, max_value=15),
    raw=st.lists(st.integers(min_value=0, max_value=14), min_size=2, max_size=4),
)
@settings(max_examples=60, deadline=None)
def test_box_matches_arithmetic_oracle(d, raw):
    exps = tuple(a % d for a in raw)
    c = quotient_cone((d, exps))
    got = {b.standard for b in box_points(c)}
    assert got == oracle_cyclic_box(d, exps)


@given(
    d=st.integers(min_value=1, max_value=12),
    raw=st.lists(st.integers(min_value=0, max_value=11), min_size=2, max_size=4),
)
@settings(max_examples=40, deadline=None)
def test_heights_match_ages(d, raw):
    exps = tuple(a % d for a in raw)
    c = quotient_cone((d, exps))
    g = closure(GroupSpec.from_diag(f"1/{d}({','.join(map(str, exps))})"))
    ages = sorted(element_age(g, i).age for i in range(g.order))
    heights = sorted(b.height for b in box_points(c))
    assert ages == heights


@given(
    d=st.integers(min_value=1, max_value=12),
    raw=st.lists(st.integers(min_value=0, max_value=11), min_size=3, max_size=4),
)
@settings(max_examples=40, deadline=None)
def test_classify_cone_matches_reid_tai(d, raw):
    exps = tuple(a % d for a in raw)
    c = quotient_cone((d, exps))
    g = closure(GroupSpec.from_diag(f"1/{d}({','.join(map(str, exps))})"))
    assert classify_cone(c) == reid_tai_classify(g)
    if c.gorenstein:
        assert len(junior_points(c)) == weight_one_class_count(g)


# ---------------------------------------------------------------------------
# abelianization
# ---------------------------------------------------------------------------


def test_abelianize_diagonal():
    g = closure(GroupSpec.from_diag("1/6(1,2,3)"))
    c = abelianize(g)
    assert c.lattice_index == 6
    assert sorted(b.height for b in box_points(c)) == [0, 1, 1, 1, 1, 2]


def test_abelianize_conjugated():
    s = FieldMatrix.from_rows([[1, 2, 0], [0, 1, 0], [0, 0, 1]])
    s_inv = FieldMatrix.from_rows([[1, -2, 0], [0, 1, 0], [0, 0, 1]])
    g = closure(GroupSpec("conj", (s @ diag_matrix("1/5(1,2,2)") @ s_inv,)))
    assert not g.is_diagonal()
    c = abelianize(g)
    assert c.lattice_index == 5
    oracle = quotient_cone((5, (1, 2, 2)))
    assert sorted(b.height for b in box_points(c)) == sorted(
        b.height for b in box_points(oracle)
    )


def test_abelianize_rejects_nonabelian():
    s3 = closure(
        GroupSpec(
            "S3",
            (FieldMatrix.permutation((1, 0, 2)), FieldMatrix.permutation((2, 0, 1))),
        )
    )
    with pytest.raises(InputError):
        abelianize(s3)


# ---------------------------------------------------------------------------
# box enumeration
# ---------------------------------------------------------------------------


def test_sublattice_box_counts():
    assert len(sublattice_box([[1, 0], [0, 1]])) == 1
    assert len(sublattice_box([[2, 0], [0, 3]])) == 6
    assert len(sublattice_box([[2, 1], [0, 3]])) == 6
    pts = sublattice_box([[1, 1], [-1, 1]])
    assert len(pts) == 2 and (0, 0) in pts


def test_sublattice_box_rejects_singular():
    with pytest.raises(InputError):
        sublattice_box([[1, 2], [2, 4]])


# ---------------------------------------------------------------------------
# fans
# ---------------------------------------------------------------------------


def sample_fan():
    c = quotient_cone((6, (1, 2, 3)))
    return Fan(dimension=3, rays=c.rays, cones=((0, 1, 2),))


def test_fan_text_roundtrip():
    fan = sample_fan()
    assert parse_fan(format_fan(fan)) == fan
    # whitespace and comments are tolerated
    noisy = "# header\n\n" + format_fan(fan).replace("ray 1:", "ray 1:   ")
    assert parse_fan(noisy) == fan


@pytest.mark.parametrize(
    "text",
    [
        "ray 0: 1 0\ncone: 0\n",  # no lattice header
        "lattice n=2\nray 1: 1 0\n",  # ray index gap
        "lattice n=2\nray 0: 1\n",  # wrong arity
        "lattice n=2\nray 0: 1 0\nray 1: 0 1\ncone: 0 1 1\n",  # repeated ray
        "lattice n=2\nray 0: 1 0\ncone: 0 5\n",  # unknown ray
        "lattice n=2\nray 0: 1 0\nray 1: 2 0\ncone: 0 1\n",  # degenerate cone
        "lattice n=2\nwedge: 1\n",  # unknown directive
    ],
)
def test_fan_parse_rejects(text):
    with pytest.raises(InputError):
        parse_fan(text)


def test_fan_multiplicities_and_euler():
    fan = sample_fan()
    assert fan_multiplicities(fan) == (6,)
    assert fan_orbifold_euler(fan) == 6
    validate_fan(fan)
