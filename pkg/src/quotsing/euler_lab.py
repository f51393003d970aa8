"""Executable identity checks tying group data to the toric machinery.

Every public function returns a CheckResult instead of asserting, so the
caller decides what a failed verdict means: the test suite asserts on
verdicts, the CLI serializes them into reports.  Exceptions are reserved
for malformed inputs (InputError) and for contradictions that can only be
bugs (InternalConsistencyError).  All comparisons are exact; there are no
tolerances anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .crepant_resolver import terminalize
from .errors import InputError, InternalConsistencyError
from .exact_linalg import CyclotomicScalar, FieldMatrix, subspace_intersection
from .exact_linalg.cyclotomic import discrete_root_exponent
from .group_engine import (
    CANONICAL_NOT_TERMINAL,
    DEFAULT_MAX_ORDER,
    TERMINAL,
    GroupSpec,
    MatrixGroup,
    QuotientGroup,
    closure,
    dhvw_euler_linear,
    element_age,
    generic_line_stabilizer,
    induced_class_map,
    invariant_axes,
    monomial_permutation_part,
    reid_tai_classify,
    weight_one_class_count,
)
from .toric_kernel import (
    abelianize,
    classify_cone,
    fan_orbifold_euler,
    junior_points,
)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one exact identity check.

    verdict is "pass" exactly when lhs == rhs; both sides are retained so a
    failure is self-explaining.  certificate carries whatever intermediate
    data backs the verdict (per-class terms, witnesses, chosen axes).
    """

    name: str
    inputs: dict
    lhs: object
    rhs: object
    verdict: str
    certificate: dict

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _result(name: str, inputs: dict, lhs, rhs, certificate: dict,
            passed: Optional[bool] = None) -> CheckResult:
    if passed is None:
        passed = lhs == rhs
    return CheckResult(
        name=name,
        inputs=inputs,
        lhs=lhs,
        rhs=rhs,
        verdict="pass" if passed else "fail",
        certificate=certificate,
    )


def _group_label(group: MatrixGroup) -> str:
    return group.name or f"group_of_order_{group.order}"


def diag_exponent_label(g: FieldMatrix, d: int) -> Optional[str]:
    """Standard weight notation for a diagonal matrix of d-th roots of unity."""
    if not g.is_diagonal():
        return None
    exps = []
    for j in range(g.nrows):
        e = discrete_root_exponent(g.entries[j][j], d)
        if e is None:
            return None
        exps.append(e)
    return "1/%d(%s)" % (d, ",".join(str(e) for e in exps))


# ---------------------------------------------------------------------------
# abelian cross-check: group counts against the toric picture
# ---------------------------------------------------------------------------


def crosscheck_abelian(
    spec: Union[GroupSpec, MatrixGroup, str],
    max_order: int = DEFAULT_MAX_ORDER,
) -> CheckResult:
    """Everything countable about an abelian SL action, counted both ways.

    The group side supplies order, class count, weight-one classes, the
    orbifold Euler number, and the singularity class; the lattice side
    supplies cone multiplicity, junior points, the classification by box
    heights, and the terminalization with its verifiers.  All of these must
    agree pairwise.
    """
    if isinstance(spec, MatrixGroup):
        group = spec
    else:
        if isinstance(spec, str):
            spec = GroupSpec.from_diag(spec)
        group = closure(spec, max_order)
    if not group.is_abelian():
        raise InputError("crosscheck_abelian needs an abelian group")
    if not group.is_sl():
        raise InputError("crosscheck_abelian needs a special linear group")

    cone = abelianize(group)
    term = terminalize(cone)
    weight_one = weight_one_class_count(group)

    lhs = {
        "class_count": group.class_count(),
        "classification": classify_cone(cone),
        "crepant": term.crepant,
        "dhvw_euler": dhvw_euler_linear(group).value,
        "fan_euler": fan_orbifold_euler(term.fan),
        "junior_count": len(junior_points(cone)),
        "multiplicity": cone.multiplicity,
        "multiplicity_sum": term.multiplicity_sum,
        "terminal": term.terminal,
    }
    rhs = {
        "class_count": group.order,
        "classification": reid_tai_classify(group),
        "crepant": True,
        "dhvw_euler": group.order,
        "fan_euler": group.order,
        "junior_count": weight_one,
        "multiplicity": group.order,
        "multiplicity_sum": group.order,
        "terminal": True,
    }
    certificate = {
        "cone_count": term.cone_count,
        "order": group.order,
        "ray_count": term.ray_count,
        "smooth": term.smooth,
        "weight_one_classes": weight_one,
    }
    inputs = {"name": _group_label(group), "order": group.order}
    return _result("crosscheck_abelian", inputs, lhs, rhs, certificate)


# ---------------------------------------------------------------------------
# Euler number of the blown-up quotient via the class-sum formula
# ---------------------------------------------------------------------------


def _projective_pair_euler(group: MatrixGroup, i: int, j: int) -> int:
    """Euler number of the joint fixed locus of two elements in P(V).

    The locus is the disjoint union of the projectivized pairwise
    eigenspace intersections, so its Euler number is the sum of the
    intersection dimensions.  Both elements diagonal is the common case:
    each coordinate line lies in exactly one intersection, giving n.
    """
    gi = group.elements[i]
    gj = group.elements[j]
    if gi.is_diagonal() and gj.is_diagonal():
        return group.dimension
    total = 0
    for _vi, basis_i in group.eigen_decomposition(i):
        for _vj, basis_j in group.eigen_decomposition(j):
            total += len(subspace_intersection(basis_i, basis_j))
    return total


def blowup_euler_check(group: MatrixGroup) -> CheckResult:
    """Euler number of the blown-up quotient equals the class count.

    Blowing up the origin retracts onto P(V), so the Euler number of the
    quotient by G/(scalar center) is the class-sum over that quotient: each
    class contributes the Burnside average, over the centralizer of a lift,
    of the joint projective fixed-locus Euler numbers.  The sum must equal
    the number of conjugacy classes of G itself.  Per-class terms are kept
    in the certificate; they need not be uniform across classes.
    """
    n = group.dimension
    if not group.is_sl():
        raise InputError("blow-up Euler check needs a special linear group")
    if not group.contains_center():
        raise InputError(
            "blow-up Euler check needs the full scalar center in the group"
        )
    quotient = QuotientGroup(group, group.scalar_subgroup_indices())

    cache: dict[frozenset, int] = {}

    def pair_euler(a: int, b: int) -> int:
        key = frozenset((a, b))
        val = cache.get(key)
        if val is None:
            val = _projective_pair_euler(group, a, b)
            cache[key] = val
        return val

    per_class_terms = []
    for cls in quotient.conjugacy_classes():
        rep = min(cls)
        lift = quotient.reps[rep]
        centralizer = quotient.centralizer(rep)
        acc = sum(pair_euler(lift, quotient.reps[c]) for c in centralizer)
        term = Fraction(acc, len(centralizer))
        if term.denominator != 1 or term < 0:
            raise InternalConsistencyError(
                "per-class Euler average is not a nonnegative integer"
            )
        per_class_terms.append(int(term))

    lhs = sum(per_class_terms)
    rhs = group.class_count()
    certificate = {
        "dhvw_euler": dhvw_euler_linear(group).value,
        "dimension": n,
        "per_class_terms": per_class_terms,
        "quotient_class_count": len(per_class_terms),
        "quotient_order": quotient.size,
        "scalar_times_quotient_classes": n * len(per_class_terms),
    }
    inputs = {"name": _group_label(group), "order": group.order}
    return _result("blowup_euler", inputs, lhs, rhs, certificate)


# ---------------------------------------------------------------------------
# the scalar center acts on a blow-up chart as a pseudo-reflection
# ---------------------------------------------------------------------------


def blowup_chart_weights(
    d: int, exponents: Sequence[int], chart: int = 0
) -> tuple[int, ...]:
    """Diagonal weights induced on one chart of the blow-up at the origin.

    Chart k has coordinates y_k = x_k and y_i = x_i / x_k for i != k.  A
    diagonal action with weights a/d therefore acts with exponent a_k on
    y_k and a_i - a_k on the others; this applies the chart's monomial
    exponent matrix to the weight vector and reduces mod d.
    """
    n = len(exponents)
    if d <= 0:
        raise InputError("denominator must be positive")
    if not 0 <= chart < n:
        raise InputError(f"chart index out of range: {chart}")
    weights = []
    for i in range(n):
        row = [0] * n
        row[i] += 1
        if i != chart:
            row[chart] -= 1
        weights.append(sum(row[j] * exponents[j] for j in range(n)) % d)
    return tuple(weights)


def pseudo_reflection_certificate(group: MatrixGroup) -> CheckResult:
    """The scalar center becomes a pseudo-reflection on a blow-up chart.

    The scalar of order n scales every coordinate, so on chart 0 it
    multiplies y_0 = x_0 by the root and fixes every ratio x_i / x_0.  The
    check runs the monomial exponent transformation and compares with the
    pseudo-reflection weight vector (1, 0, ..., 0).
    """
    n = group.dimension
    if not group.contains_center():
        raise InputError(
            "pseudo-reflection certificate needs the full scalar center"
        )
    center = (1,) * n
    chart = blowup_chart_weights(n, center, chart=0)
    lhs = list(chart)
    rhs = [1] + [0] * (n - 1)
    certificate = {
        "center_exponents": list(center),
        "center_order": n,
        "chart": 0,
        "chart_weights": list(chart),
        "fixed_chart_coordinates": sum(1 for w in chart if w == 0),
    }
    inputs = {"name": _group_label(group), "order": group.order}
    return _result("pseudo_reflection_certificate", inputs, lhs, rhs, certificate)


# ---------------------------------------------------------------------------
# class count through the fibers of the induced map on classes
# ---------------------------------------------------------------------------


def class_fiber_sum_check(
    group: MatrixGroup, line: Union[int, Sequence, None] = None
) -> CheckResult:
    """Fiber sizes of the induced class map sum to the class count.

    The group must preserve a line; the stabilizer of its generic point is
    the character kernel and the cyclic quotient's classes are its
    elements.  Every conjugacy class lands in a single coset, so the fibers
    of the induced map partition the classes.  The fiber list itself is the
    interesting output and is kept in the certificate.
    """
    if line is None:
        axes = invariant_axes(group)
        if not axes:
            raise InputError("group preserves no coordinate line")
        line = axes[0]
    action = generic_line_stabilizer(group, line)
    fiber_map = induced_class_map(group, action.stabilizer)
    fibers = list(fiber_map.fiber_sizes)
    lhs = sum(fibers)
    rhs = group.class_count()
    certificate = {
        "axis": action.axis,
        "fibers": fibers,
        "quotient_order": action.quotient_order,
        "stabilizer_order": len(action.stabilizer),
    }
    inputs = {"name": _group_label(group), "order": group.order}
    return _result("class_fiber_sum", inputs, lhs, rhs, certificate)


# ---------------------------------------------------------------------------
# block-diagonal 2+2 actions: trivial stabilizers force terminal
# ---------------------------------------------------------------------------


def _is_identity_block(g: FieldMatrix, offset: int) -> bool:
    for r in range(2):
        for c in range(2):
            e = g.entries[offset + r][offset + c]
            if r == c:
                if not e.is_one():
                    return False
            elif not e.is_zero():
                return False
    return True


def type22_terminal_check(group: MatrixGroup) -> CheckResult:
    """Terminality of a 2+2 block action is decided by summand stabilizers.

    The stabilizer of a generic point of one summand is the set of elements
    restricting to the identity there.  If both stabilizers are trivial the
    action must be terminal; a nontrivial stabilizer element fixes one
    plane pointwise and acts speciallinearly on the other, so it has weight
    exactly one and the action cannot be terminal.  The least such element
    is reported as the witness.
    """
    n = group.dimension
    if n != 4:
        raise InputError("type-(2,2) check needs 4x4 matrices")
    for i, g in enumerate(group.elements):
        for r in range(2):
            for c in range(2):
                if not g.entries[r][2 + c].is_zero() or not g.entries[2 + r][c].is_zero():
                    raise InputError(
                        f"element {i} is not block-diagonal of shape 2+2"
                    )
    for i, g in enumerate(group.elements):
        for offset in (0, 2):
            block = FieldMatrix.from_rows(
                [
                    [g.entries[offset][offset], g.entries[offset][offset + 1]],
                    [g.entries[offset + 1][offset], g.entries[offset + 1][offset + 1]],
                ]
            )
            if not block.det().is_one():
                raise InputError(
                    f"element {i} has a summand block outside the special linear group"
                )

    stab_first = tuple(
        i for i, g in enumerate(group.elements) if _is_identity_block(g, 0)
    )
    stab_second = tuple(
        i for i, g in enumerate(group.elements) if _is_identity_block(g, 2)
    )
    both_trivial = len(stab_first) == 1 and len(stab_second) == 1

    witness = None
    if not both_trivial:
        nontrivial = sorted(
            set(stab_first + stab_second) - {group.identity_index}
        )
        w = nontrivial[0]
        entry = element_age(group, w)
        witness = {
            "age": int(entry.age),
            "element_index": w,
            "label": diag_exponent_label(group.elements[w], entry.order)
            or "non-diagonal",
        }

    lhs = reid_tai_classify(group)
    rhs = TERMINAL if both_trivial else CANONICAL_NOT_TERMINAL
    certificate = {
        "stabilizer_orders": [len(stab_first), len(stab_second)],
        "witness": witness,
    }
    inputs = {"name": _group_label(group), "order": group.order}
    return _result("type22_terminal", inputs, lhs, rhs, certificate)


# ---------------------------------------------------------------------------
# extensions of a monomial group: the three-way structure scan
# ---------------------------------------------------------------------------

# cycles the coordinate lines 0 -> 2 -> 1 -> 0; together with a diagonal
# group it generates the monomial groups with 3-cycle permutation parts
CYCLIC_SHIFT_3 = FieldMatrix.permutation((2, 0, 1))

# permutation matrices invert cheaply; cache the inverse for the hot loops
_CYCLIC_SHIFT_3_INV = FieldMatrix.permutation((1, 2, 0))

# negated transposition of the last two lines; the canonical representative
# of the order-2 monomial extensions in the structure scan
SIGN_SWAP_3 = FieldMatrix.permutation((0, 2, 1)).scale(-1)


def _central_root_matrix(n: int, order: int, power: int = 1) -> FieldMatrix:
    return FieldMatrix.scalar_matrix(
        n, CyclotomicScalar.root_of_unity(order, power % order)
    )


def _common_fixed_axis(group: MatrixGroup) -> Optional[int]:
    """Axis fixed by the permutation part of every element, if monomial."""
    perms = []
    for e in group.elements:
        p = monomial_permutation_part(e)
        if p is None:
            return None
        perms.append(p)
    for j in range(group.dimension):
        if all(p[j] == j for p in perms):
            return j
    return None


def _extension_closure(
    base: MatrixGroup, extra: FieldMatrix, name: str, max_order: int
) -> MatrixGroup:
    gens = tuple(base.elements[i] for i in base.generator_indices) + (extra,)
    return closure(GroupSpec(name=name, generators=gens), max_order)


def trichotomy_scan(
    g_eta: MatrixGroup,
    g_prime: MatrixGroup,
    max_order: int = DEFAULT_MAX_ORDER,
) -> CheckResult:
    """Exactly one of three shapes fits a monomial extension in dimension 3.

    Given a monomial group without the order-3 center and a supergroup, the
    scan tests: (a) both groups are monomial with a coordinate axis fixed
    by every permutation part (the block-splitting shape, reported with the
    axis); (b) the supergroup is generated by the base and the central cube
    root; (c) the supergroup is generated by the base and the negated
    transposition, possibly twisted by the central cube root.  The verdict
    is that exactly one alternative holds.  Normality of the base and
    cyclicity of the quotient are diagnostic and only reported.
    """
    if g_eta.dimension != 3 or g_prime.dimension != 3:
        raise InputError("the structure scan works on 3x3 groups")
    eta_keys = g_eta.canonical_element_keys()
    prime_keys = g_prime.canonical_element_keys()
    if not eta_keys <= prime_keys:
        raise InputError("the extension does not contain the base group")

    inputs = {
        "name": f"{_group_label(g_eta)}->{_group_label(g_prime)}",
        "base_order": g_eta.order,
        "extension_order": g_prime.order,
    }
    omega3 = _central_root_matrix(3, 3)
    if omega3 in g_eta:
        certificate = {
            "precondition": "base group contains the order-3 scalar center",
        }
        return _result(
            "trichotomy_scan", inputs, None, 1, certificate, passed=False
        )

    axis = _common_fixed_axis(g_prime)
    alt_axis = (
        axis is not None
        and not g_prime.is_abelian()
        and not g_eta.is_abelian()
    )

    ext_center = _extension_closure(g_eta, omega3, "base+center3", max_order)
    alt_center = ext_center.canonical_element_keys() == prime_keys

    ext_swap = _extension_closure(g_eta, SIGN_SWAP_3, "base+swap", max_order)
    swap_plain = ext_swap.canonical_element_keys() == prime_keys
    twisted = omega3 @ SIGN_SWAP_3.promote(3)
    ext_twisted = _extension_closure(g_eta, twisted, "base+twisted-swap", max_order)
    swap_twisted = ext_twisted.canonical_element_keys() == prime_keys
    alt_swap = swap_plain or swap_twisted

    normal = True
    for gi in g_prime.generator_indices:
        g = g_prime.elements[gi]
        ginv = g.inverse()
        for e in g_eta.elements:
            if (g @ e @ ginv).canonical_key() not in eta_keys:
                normal = False
                break
        if not normal:
            break
    quotient_cyclic: Optional[bool] = None
    if normal:
        idxs = [g_prime.index_of(e) for e in g_eta.elements]
        quotient_cyclic = QuotientGroup(g_prime, idxs).is_cyclic()

    held = int(alt_axis) + int(alt_center) + int(alt_swap)
    certificate = {
        "alternatives": {
            "central_cube_root_extension": alt_center,
            "shared_axis_monomial": {"axis": axis, "holds": alt_axis},
            "sign_swap_extension": {
                "holds": alt_swap,
                "plain": swap_plain,
                "twisted": swap_twisted,
            },
        },
        "base_normal_in_extension": normal,
        "extension_contains_center3": omega3 in g_prime,
        "quotient_cyclic": quotient_cyclic,
    }
    return _result("trichotomy_scan", inputs, held, 1, certificate)


# ---------------------------------------------------------------------------
# exact commutator identities for diagonal groups against the shift
# ---------------------------------------------------------------------------


def shift_commutator_check(i: int) -> CheckResult:
    """Conjugating 1/3(i, i+1, i+2) by the shift, then dividing, is central.

    The shift cycles the diagonal exponents, so the commutator has
    exponents (1, 1, -2) regardless of i; as a matrix that is the scalar
    cube root of unity.
    """
    x = FieldMatrix.from_diag_exponents(3, (i % 3, (i + 1) % 3, (i + 2) % 3))
    t, t_inv = CYCLIC_SHIFT_3, _CYCLIC_SHIFT_3_INV
    lhs_mat = t @ x @ t_inv @ x.inverse()
    rhs_mat = _central_root_matrix(3, 3)
    lhs = diag_exponent_label(lhs_mat, 3) or "non-diagonal"
    rhs = diag_exponent_label(rhs_mat, 3)
    certificate = {"exponent_offset": i % 3}
    inputs = {"name": f"1/3({i % 3},{(i + 1) % 3},{(i + 2) % 3})"}
    return _result(
        "shift_commutator", inputs, lhs, rhs, certificate,
        passed=lhs_mat == rhs_mat,
    )


def double_commutator_cube_check(d: int, a: int, b: int) -> CheckResult:
    """The double shift-commutator of a diagonal element is its cube.

    For phi = 1/d(a, b, -a-b) set f = phi^-1 (T phi T^-1); then
    T^-1 f T f^-1 equals phi^3 exactly.  Everything is computed by matrix
    arithmetic; no exponent shortcuts are taken on the checked side.
    """
    if d <= 0:
        raise InputError("denominator must be positive")
    phi = FieldMatrix.from_diag_exponents(d, (a % d, b % d, (-a - b) % d))
    t, t_inv = CYCLIC_SHIFT_3, _CYCLIC_SHIFT_3_INV
    f = phi.inverse() @ (t @ phi @ t_inv)
    lhs_mat = t_inv @ f @ t @ f.inverse()
    rhs_mat = phi.power(3)
    lhs = diag_exponent_label(lhs_mat, d) or "non-diagonal"
    rhs = diag_exponent_label(rhs_mat, d) or "non-diagonal"
    certificate = {
        "intermediate": diag_exponent_label(f, d) or "non-diagonal",
    }
    inputs = {"name": f"1/{d}({a % d},{b % d},{(-a - b) % d})"}
    return _result(
        "double_commutator_cube", inputs, lhs, rhs, certificate,
        passed=lhs_mat == rhs_mat,
    )
