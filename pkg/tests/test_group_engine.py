"""Group engine tests.

Oracles used here, independent of the implementation under test:
  * conjugacy classes recomputed as full orbits under conjugation by every
    element (the engine only conjugates by generators);
  * commuting pairs counted by a raw double loop over matrices;
  * ages of diagonal elements recomputed from the fractional-part formula
    age(diag(zeta_d^{a_i})^k) = sum_i ((k * a_i) mod d) / d;
  * the general (character-sum) age path cross-checked against the diagonal
    oracle by conjugating a diagonal group with a dense unimodular matrix,
    which preserves eigenvalues and hence ages.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quotsing.errors import GroupTooLarge, InputError, ShapeError
from quotsing.exact_linalg import CyclotomicScalar, FieldMatrix
from quotsing.group_engine import (
    CANONICAL_NOT_TERMINAL,
    NOT_GORENSTEIN,
    TERMINAL,
    UNDETERMINED,
    GroupSpec,
    QuotientGroup,
    age_profile,
    axis_vector,
    closure,
    dhvw_euler_linear,
    diag_matrix,
    element_age,
    generic_line_stabilizer,
    group_spec_to_json,
    induced_class_map,
    invariant_axes,
    is_monomial_group,
    load_group_spec,
    matrix_eigen_decomposition,
    module_type,
    monomial_permutation_part,
    parse_diag_spec,
    primed_group,
    projective_fixed_euler,
    pseudo_reflections,
    reid_tai_classify,
    weight_one_class_count,
)

I4 = CyclotomicScalar.root_of_unity(4, 1)
W3 = CyclotomicScalar.root_of_unity(3, 1)


def q8():
    gi = FieldMatrix.diagonal([I4, I4**3])
    gj = FieldMatrix.from_rows([[0, 1], [-1, 0]])
    return closure(GroupSpec("Q8", (gi, gj)))


def f21(extra_line: bool = False):
    if extra_line:
        return closure(
            GroupSpec(
                "F21+1",
                (diag_matrix("1/7(1,2,4,0)"), FieldMatrix.permutation((2, 0, 1, 3))),
            )
        )
    return closure(
        GroupSpec(
            "F21", (diag_matrix("1/7(1,2,4)"), FieldMatrix.permutation((2, 0, 1)))
        )
    )


@pytest.fixture(scope="module")
def f21_z4():
    # <F21 (+) 1, omega4 I>: the order-84 group of shape (3,1)
    gens = (
        diag_matrix("1/7(1,2,4,0)"),
        FieldMatrix.permutation((2, 0, 1, 3)),
        FieldMatrix.scalar_matrix(4, I4),
    )
    return closure(GroupSpec("F21+1 x Z4", gens))


# ---------------------------------------------------------------------------
# specs and parsing
# ---------------------------------------------------------------------------


def test_parse_diag_spec():
    assert parse_diag_spec("1/7(1,2,4)") == (7, (1, 2, 4))
    assert parse_diag_spec(" 1 / 12 ( 1 , -1 , 5 , 7 ) ") == (12, (1, 11, 5, 7))
    assert parse_diag_spec("1/4(0,0,2,2)") == (4, (0, 0, 2, 2))


@pytest.mark.parametrize(
    "bad", ["", "1/0(1)", "2/3(1)", "1/3()", "1/3(1,)", "1/3(a)", "diag(1,2)"]
)
def test_parse_diag_spec_rejects(bad):
    with pytest.raises(InputError):
        parse_diag_spec(bad)


def test_diag_matrix_entries():
    m = diag_matrix("1/4(1,3)")
    assert m.entries[0][0] == I4
    assert m.entries[1][1] == I4**3


def test_group_spec_shape_checks():
    with pytest.raises(InputError):
        GroupSpec("empty", ())
    with pytest.raises(ShapeError):
        GroupSpec(
            "mixed",
            (FieldMatrix.identity(2), FieldMatrix.identity(3)),
        )


def test_spec_file_roundtrip():
    spec = GroupSpec(
        "roundtrip", (diag_matrix("1/4(1,3)"), FieldMatrix.permutation((1, 0)))
    )
    doc = group_spec_to_json(spec)
    assert doc["format_version"] == 1 and doc["conductor"] == 4
    back = load_group_spec(doc)
    assert back.name == "roundtrip"
    assert closure(back).order == closure(spec).order == 8


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(format_version=2),
        lambda d: d.update(name=""),
        lambda d: d.update(conductor=0),
        lambda d: d.update(generators="nope"),
        lambda d: d["generators"][0][0].pop(),
        lambda d: d["generators"][0][0][0].pop(),
        lambda d: d["generators"][0][0].__setitem__(0, ["1/0", "0"]),
    ],
)
def test_spec_file_rejects_malformed(mutate):
    doc = group_spec_to_json(GroupSpec("x", (diag_matrix("1/4(1,3)"),)))
    mutate(doc)
    with pytest.raises(InputError):
        load_group_spec(doc)


def test_spec_file_diag_only():
    g = load_group_spec(
        {"format_version": 1, "name": "d", "conductor": 1, "generators": [],
         "diag": "1/3(1,1,1)"}
    )
    assert closure(g).order == 3


# ---------------------------------------------------------------------------
# closure
# ---------------------------------------------------------------------------


def test_closure_known_orders():
    assert q8().order == 8
    assert f21().order == 21
    assert closure(GroupSpec.from_diag("1/5(1,2)")).order == 5
    assert closure(GroupSpec("neg", (FieldMatrix.scalar_matrix(4, -1),))).order == 2


def test_closure_too_large():
    with pytest.raises(GroupTooLarge) as exc:
        closure(GroupSpec.from_diag("1/9(1,2)"), max_order=5)
    assert exc.value.max_order == 5
    assert exc.value.partial_count > 5


def test_closure_rejects_singular_generator():
    z = CyclotomicScalar.zero()
    singular = FieldMatrix.from_rows([[1, 1], [1, 1]])
    with pytest.raises(InputError):
        closure(GroupSpec("sing", (singular,)))


def test_elements_sorted_and_indexed():
    g = q8()
    keys = [e.sort_key() for e in g.elements]
    assert keys == sorted(keys)
    for i, e in enumerate(g.elements):
        assert g.index_of(e) == i
    assert g.elements[g.identity_index].is_identity()


def test_membership_foreign_conductor():
    g = q8()
    # -I presented at conductor 3 (coprime to the group conductor 4)
    minus_one = FieldMatrix.scalar_matrix(2, CyclotomicScalar.root_of_unity(3, 1) ** 0 * -1)
    assert minus_one in g
    assert FieldMatrix.scalar_matrix(2, CyclotomicScalar.root_of_unity(3, 1)) not in g


# ---------------------------------------------------------------------------
# conjugacy structure vs oracles
# ---------------------------------------------------------------------------


def brute_classes(group):
    out = []
    assigned = set()
    inv = group.inverse_indices
    for i in range(group.order):
        if i in assigned:
            continue
        orbit = set()
        for t in range(group.order):
            orbit.add(group.product_index(group.product_index(inv[t], i), t))
        out.append(tuple(sorted(orbit)))
        assigned |= orbit
    return tuple(out)


def brute_commuting_pairs(group):
    count = 0
    for a in group.elements:
        for b in group.elements:
            if a @ b == b @ a:
                count += 1
    return count


@pytest.mark.parametrize("maker", [q8, f21])
def test_classes_match_brute_force(maker):
    g = maker()
    assert g.conjugacy_classes() == brute_classes(g)


@pytest.mark.parametrize("maker", [q8, f21])
def test_commuting_pairs_match_brute_force(maker):
    g = maker()
    assert g.commuting_pairs_count() == brute_commuting_pairs(g)


def test_q8_frozen_values():
    g = q8()
    assert g.class_count() == 5
    gi = FieldMatrix.diagonal([I4, I4**3])
    assert len(g.centralizer(g.index_of(gi))) == 4
    assert g.contains_center(2)  # -I is the primitive square root scalar
    assert not g.is_abelian()
    assert module_type(g) == (2,)


def test_f21_frozen_values():
    g = f21()
    assert g.class_count() == 5
    assert module_type(g) == (3,)
    assert is_monomial_group(g)
    assert g.is_sl()


def test_burnside_identity_via_dhvw():
    for maker in (q8, f21):
        g = maker()
        res = dhvw_euler_linear(g)
        assert res.value == res.class_count == g.class_count()
        assert res.commuting_pairs == g.order * res.class_count


def test_dhvw_fixed_dims_are_linear_certificate():
    g = q8()
    res = dhvw_euler_linear(g)
    # only the identity fixes anything outside the origin except -I fixes 0-dim
    assert sorted(res.fixed_space_dims) == [0, 0, 0, 0, 2]


# ---------------------------------------------------------------------------
# ages
# ---------------------------------------------------------------------------


def oracle_diag_age(d, exps, k):
    return sum(Fraction((k * a) % d, d) for a in exps)


@given(
    d=st.integers(min_value=1, max_value=12),
    raw=st.lists(st.integers(min_value=0, max_value=11), min_size=2, max_size=4),
    k=st.integers(min_value=0, max_value=11),
)
@settings(max_examples=60, deadline=None)
def test_diagonal_age_matches_fractional_parts(d, raw, k):
    exps = tuple(a % d for a in raw)
    g = closure(GroupSpec.from_diag(f"1/{d}({','.join(map(str, exps))})"))
    mat = FieldMatrix.from_diag_exponents(d, [(k * a) % d for a in exps])
    entry = element_age(g, g.index_of(mat))
    assert entry.age == oracle_diag_age(d, exps, k)


def test_age_of_identity_is_zero():
    g = q8()
    entry = element_age(g, g.identity_index)
    assert entry.age == 0 and entry.order == 1 and entry.exponents == (0, 0)


def test_age_plus_inverse_age_is_codim_of_fixed_space():
    for maker in (q8, f21):
        g = maker()
        inv = g.inverse_indices
        n = g.dimension
        for i in range(g.order):
            lhs = element_age(g, i).age + element_age(g, inv[i]).age
            assert lhs == n - g.fixed_space_dim(i)


def test_character_sum_path_matches_diagonal_oracle():
    # conjugate 1/5(1,4) by a dense unimodular matrix: same eigenvalues,
    # but the matrices are no longer diagonal so the general path runs
    s = FieldMatrix.from_rows([[1, 1], [0, 1]])
    s_inv = FieldMatrix.from_rows([[1, -1], [0, 1]])
    d = diag_matrix("1/5(1,4)")
    g = closure(GroupSpec("conjugated", (s @ d @ s_inv,)))
    assert not any(e.is_diagonal() for e in g.elements if not e.is_identity())
    ages = sorted(element_age(g, i).age for i in range(g.order))
    expected = sorted(oracle_diag_age(5, (1, 4), k) for k in range(5))
    assert ages == expected


def test_eigen_decomposition_nondiagonal():
    t = FieldMatrix.permutation((2, 0, 1))
    decomp = matrix_eigen_decomposition(t)
    assert sum(len(basis) for _v, basis in decomp) == 3
    values = [v for v, _b in decomp]
    assert all((v**3).is_one() for v in values)
    assert len(values) == 3  # 1, w3, w3^2 each once


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def test_classify_minus_one_sl4_terminal():
    g = closure(GroupSpec("<-I4>", (FieldMatrix.scalar_matrix(4, -1),)))
    assert reid_tai_classify(g) == TERMINAL
    assert weight_one_class_count(g) == 0


def test_classify_omega3_scalar():
    g = closure(GroupSpec("<w3 I3>", (FieldMatrix.scalar_matrix(3, W3),)))
    assert reid_tai_classify(g) == CANONICAL_NOT_TERMINAL
    assert weight_one_class_count(g) == 1  # only 1/3(1,1,1) has age one


def test_classify_non_gorenstein():
    g = closure(GroupSpec.from_diag("1/3(1,0,0)"))
    assert reid_tai_classify(g) == NOT_GORENSTEIN


def test_pseudo_reflection_detection():
    g = closure(GroupSpec.from_diag("1/2(1,0)"))
    refl = pseudo_reflections(g)
    assert len(refl) == 1
    sl = closure(GroupSpec.from_diag("1/2(1,1)"))
    assert pseudo_reflections(sl) == ()


def test_weight_one_counts():
    assert weight_one_class_count(closure(GroupSpec.from_diag("1/3(1,1,1)"))) == 1
    assert weight_one_class_count(closure(GroupSpec.from_diag("1/2(1,1,1,1)"))) == 0
    assert weight_one_class_count(f21()) == 3


# ---------------------------------------------------------------------------
# module type
# ---------------------------------------------------------------------------


def test_module_type_diagonal_is_all_ones():
    g = closure(GroupSpec.from_diag("1/6(1,2,3)"))
    assert module_type(g) == (1, 1, 1)


def test_module_type_q8_plus_scalars():
    # Q8 acting on C^2, extended by the identity on two more lines; the
    # complement is scalar for every element, which exercises the base case
    gi = FieldMatrix.block_diag(
        [FieldMatrix.diagonal([I4, I4**3]), FieldMatrix.identity(2)]
    )
    gj = FieldMatrix.block_diag(
        [FieldMatrix.from_rows([[0, 1], [-1, 0]]), FieldMatrix.identity(2)]
    )
    g = closure(GroupSpec("Q8+I2", (gi, gj)))
    assert module_type(g) == (2, 1, 1)


def test_module_type_f21_plus_line(f21_z4):
    assert module_type(f21(extra_line=True)) == (3, 1)
    assert module_type(f21_z4) == (3, 1)


# ---------------------------------------------------------------------------
# invariant lines and the primed construction
# ---------------------------------------------------------------------------


def test_line_stabilizer_whole_group_on_fixed_axis():
    g = f21(extra_line=True)
    act = generic_line_stabilizer(g, 3)
    assert len(act.stabilizer) == g.order
    assert act.quotient_order == 1


def test_line_stabilizer_rejects_non_invariant_line():
    g = f21()
    with pytest.raises(InputError):
        generic_line_stabilizer(g, 0)  # T permutes the axes
    assert invariant_axes(g) == ()
    assert invariant_axes(f21(extra_line=True)) == (3,)


def test_line_stabilizer_characters(f21_z4):
    act = generic_line_stabilizer(f21_z4, 3)
    assert len(act.stabilizer) == 21
    assert act.quotient_order == 4
    assert act.characters[act.generator_index] == I4
    # the character is trivial exactly on the stabilizer
    for i in act.stabilizer:
        assert act.characters[i].is_one()


def test_induced_class_map_fibers(f21_z4):
    act = generic_line_stabilizer(f21_z4, 3)
    fibers = induced_class_map(f21_z4, act.stabilizer)
    assert fibers.quotient_size == 4
    assert fibers.fiber_sizes == (5, 5, 5, 5)
    assert fibers.class_count == 20


def test_induced_class_map_needs_cyclic_quotient():
    g = q8()
    center = [i for i, e in enumerate(g.elements) if e.is_scalar()]
    with pytest.raises(InputError):
        induced_class_map(g, center)


def test_quotient_group_structure():
    g = closure(GroupSpec.from_diag("1/6(1,5)"))
    squares = [i for i in range(g.order) if g.element_order(i) in (1, 3)]
    quo = QuotientGroup(g, squares)
    assert quo.size == 2 and quo.is_cyclic()


def test_quotient_group_rejects_non_normal():
    s3 = closure(
        GroupSpec(
            "S3",
            (FieldMatrix.permutation((1, 0, 2)), FieldMatrix.permutation((2, 0, 1))),
        )
    )
    flip = s3.index_of(FieldMatrix.permutation((1, 0, 2)))
    with pytest.raises(InputError):
        QuotientGroup(s3, (s3.identity_index, flip))


def test_primed_group_f21_z4(f21_z4):
    pr = primed_group(f21_z4, 3)
    assert pr.stabilizer_block_group.order == 21
    assert pr.group.order == 63
    assert pr.quotient_order == 3 and pr.quotient_cyclic
    assert FieldMatrix.scalar_matrix(3, W3) in pr.group
    # lambda = zeta_12, the least exponent among three candidates
    assert pr.lambda_root == CyclotomicScalar.root_of_unity(12, 1)
    assert len(pr.lambda_candidates) == 3
    assert pr.group.is_sl()


def test_primed_group_needs_block_shape():
    with pytest.raises(InputError):
        primed_group(f21(), 2)


# ---------------------------------------------------------------------------
# monomial structure and projective fixed loci
# ---------------------------------------------------------------------------


def test_monomial_permutation_part():
    assert monomial_permutation_part(FieldMatrix.permutation((2, 0, 1))) == (2, 0, 1)
    assert monomial_permutation_part(diag_matrix("1/3(1,2,0)")) == (0, 1, 2)
    dense = FieldMatrix.from_rows([[1, 1], [0, 1]])
    assert monomial_permutation_part(dense) is None


@given(
    d=st.integers(min_value=1, max_value=10),
    exps=st.lists(st.integers(min_value=0, max_value=9), min_size=2, max_size=5),
)
@settings(max_examples=40, deadline=None)
def test_projective_fixed_euler_is_dimension(d, exps):
    g = closure(GroupSpec.from_diag(f"1/{d}({','.join(str(a % d) for a in exps)})"))
    assert projective_fixed_euler(g) == len(exps)


def test_projective_fixed_euler_nondiagonal_abelian():
    s = FieldMatrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    s_inv = FieldMatrix.from_rows([[1, -1, 0], [0, 1, 0], [0, 0, 1]])
    g = closure(GroupSpec("conj", (s @ diag_matrix("1/4(1,3,2)") @ s_inv,)))
    assert g.is_abelian() and not g.is_diagonal()
    assert projective_fixed_euler(g) == 3


def test_projective_fixed_euler_single_element(f21_z4):
    t4 = f21_z4.index_of(FieldMatrix.permutation((2, 0, 1, 3)))
    assert projective_fixed_euler(f21_z4, t4) == 4


def test_projective_fixed_euler_rejects_non_commuting():
    g = q8()
    with pytest.raises(InputError):
        projective_fixed_euler(g, range(g.order))
