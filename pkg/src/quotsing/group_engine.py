"""Finite matrix groups: closure, conjugacy, ages, and classification.

A MatrixGroup is a fully enumerated finite subgroup of GL(n) over a
cyclotomic field, with cached conjugacy classes, centralizers, element
orders, and determinants.  On top of that sit the singularity-theoretic
computations: element ages, the Reid-Tai terminal/canonical test, the
isotypic decomposition of the defining representation, line stabilizers
and their cyclic quotients, and induced maps on conjugacy classes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    GroupTooLarge,
    InputError,
    InternalConsistencyError,
    ShapeError,
)
from .exact_linalg import (
    CyclotomicScalar,
    FieldMatrix,
    discrete_root_exponent,
    euler_phi,
    in_span,
    kernel,
    matrix_from_columns,
    rref,
    span_echelon,
    subspace_intersection,
)
from .exact_linalg.matrices import Vector

DEFAULT_MAX_ORDER = 20000

TERMINAL = "terminal"
CANONICAL_NOT_TERMINAL = "canonical_not_terminal"
NOT_CANONICAL = "not_canonical"
NOT_GORENSTEIN = "not_gorenstein"


class _Undetermined:
    """Sentinel for an isotypic decomposition the scan could not certify."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "Undetermined"


UNDETERMINED = _Undetermined()


# ---------------------------------------------------------------------------
# group specifications
# ---------------------------------------------------------------------------

_DIAG_RE = re.compile(
    r"^\s*1\s*/\s*(\d+)\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*$"
)


def parse_diag_spec(text: str) -> tuple[int, tuple[int, ...]]:
    """Parse the diagonal shorthand "1/d(a1,...,an)" into (d, exponents).

    Negative entries are reduced mod d.  Raises InputError on malformed
    text or d = 0.
    """
    m = _DIAG_RE.match(text)
    if not m:
        raise InputError(f'malformed diagonal spec: "{text}" (expected "1/d(a1,...,an)")')
    d = int(m.group(1))
    if d <= 0:
        raise InputError(f"diagonal spec denominator must be positive, got {d}")
    exps = tuple(int(x) % d for x in m.group(2).split(","))
    return d, exps


def diag_matrix(text: str) -> FieldMatrix:
    """The diagonal matrix named by the "1/d(a1,...,an)" shorthand."""
    d, exps = parse_diag_spec(text)
    return FieldMatrix.from_diag_exponents(d, exps)


@dataclass(frozen=True)
class GroupSpec:
    """Named generating set for a finite matrix group."""

    name: str
    generators: tuple[FieldMatrix, ...]

    def __post_init__(self):
        if not self.generators:
            raise InputError("group spec needs at least one generator")
        n = self.generators[0].nrows
        for g in self.generators:
            if g.nrows != g.ncols or g.nrows != n:
                raise ShapeError("generators must be square matrices of equal size")

    @property
    def dimension(self) -> int:
        return self.generators[0].nrows

    @classmethod
    def from_diag(cls, text: str, name: Optional[str] = None) -> "GroupSpec":
        return cls(name if name is not None else text, (diag_matrix(text),))


def load_group_spec(source: Union[str, dict]) -> GroupSpec:
    """Read a GroupSpecFile (path or already-parsed dict) into a GroupSpec.

    Layout: {"format_version": 1, "name": str, "conductor": m,
    "generators": [n x n arrays whose entries are arrays of exactly
    phi(m) rational strings], optional "diag": "1/d(a1,...,an)"}.
    """
    if isinstance(source, str):
        try:
            with open(source) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read group file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON in group file: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, dict):
        raise InputError("group file must be a JSON object")
    version = doc.get("format_version")
    if version != 1:
        raise InputError(f'unsupported or missing "format_version": {version!r}')
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise InputError('group file needs a non-empty string "name"')
    conductor = doc.get("conductor")
    if not isinstance(conductor, int) or conductor < 1:
        raise InputError(f'"conductor" must be a positive integer, got {conductor!r}')
    k = euler_phi(conductor)

    gens: list[FieldMatrix] = []
    raw_gens = doc.get("generators", [])
    if not isinstance(raw_gens, list):
        raise InputError('"generators" must be an array')
    for gi, raw in enumerate(raw_gens):
        if not isinstance(raw, list) or not raw:
            raise InputError(f"generators[{gi}] must be a non-empty matrix array")
        n = len(raw)
        rows = []
        for ri, raw_row in enumerate(raw):
            if not isinstance(raw_row, list) or len(raw_row) != n:
                raise InputError(f"generators[{gi}][{ri}] must be a row of length {n}")
            row = []
            for ci, entry in enumerate(raw_row):
                if not isinstance(entry, list) or len(entry) != k:
                    raise InputError(
                        f"generators[{gi}][{ri}][{ci}] must list exactly {k} coefficients"
                    )
                try:
                    coeffs = tuple(Fraction(s) for s in entry)
                except (ValueError, ZeroDivisionError) as exc:
                    raise InputError(
                        f"generators[{gi}][{ri}][{ci}]: bad rational: {exc}"
                    ) from exc
                row.append(CyclotomicScalar(conductor, coeffs))
            rows.append(row)
        gens.append(FieldMatrix.from_rows(rows))

    diag_text = doc.get("diag")
    if diag_text is not None:
        if not isinstance(diag_text, str):
            raise InputError('"diag" must be a string')
        gens.append(diag_matrix(diag_text))
    if not gens:
        raise InputError('group file defines no generators (need "generators" or "diag")')
    return GroupSpec(name, tuple(gens))


def group_spec_to_json(spec: GroupSpec) -> dict:
    """Serialize a GroupSpec to the GroupSpecFile layout."""
    conductor = 1
    for g in spec.generators:
        conductor = lcm(conductor, g.conductor)
    gens = []
    for g in spec.generators:
        g = g.promote(conductor)
        gens.append(
            [[[str(c) for c in entry.coeffs] for entry in row] for row in g.entries]
        )
    return {
        "format_version": 1,
        "name": spec.name,
        "conductor": conductor,
        "generators": gens,
    }


# ---------------------------------------------------------------------------
# closure and the enumerated group
# ---------------------------------------------------------------------------


def _raw_key(m: FieldMatrix):
    # exact identity key for matrices at one shared conductor; flattened to
    # plain ints because Fraction hashing is slow in closure-sized dicts
    out = []
    for row in m.entries:
        for x in row:
            for c in x.coeffs:
                out.append(c.numerator)
                out.append(c.denominator)
    return tuple(out)


class MatrixGroup:
    """A finite subgroup of GL(n), fully enumerated and canonically sorted."""

    def __init__(self, elements: tuple[FieldMatrix, ...], generator_indices: tuple[int, ...],
                 name: str = ""):
        self.elements = elements
        self.generator_indices = generator_indices
        self.name = name
        self.order = len(elements)
        self.dimension = elements[0].nrows
        self.conductor = elements[0].conductor
        self._index = {_raw_key(e): i for i, e in enumerate(elements)}
        self._products: dict[tuple[int, int], int] = {}
        self._identity_index = self._index[_raw_key(
            FieldMatrix.identity(self.dimension).promote(self.conductor))]
        self._inverses: Optional[tuple[int, ...]] = None
        self._orders: dict[int, int] = {}
        self._classes: Optional[tuple[tuple[int, ...], ...]] = None
        self._class_of: Optional[dict[int, int]] = None
        self._centralizers: dict[int, tuple[int, ...]] = {}
        self._ages: dict[int, "AgeEntry"] = {}
        self._eigen: dict[int, tuple] = {}
        self._abelian: Optional[bool] = None
        self._module_type = None
        self._commuting_pairs: Optional[int] = None

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_generators(
        cls,
        generators: Sequence[FieldMatrix],
        name: str = "",
        max_order: int = DEFAULT_MAX_ORDER,
    ) -> "MatrixGroup":
        return closure(GroupSpec(name or "anonymous", tuple(generators)),
                       max_order=max_order)

    # -- element plumbing --------------------------------------------------------

    @property
    def identity_index(self) -> int:
        return self._identity_index

    def index_of(self, g: FieldMatrix) -> int:
        if self.conductor % g.conductor == 0:
            idx = self._index.get(_raw_key(g.promote(self.conductor)))
        else:
            # foreign conductor: fall back to value comparison
            idx = next((i for i, e in enumerate(self.elements) if e == g), None)
        if idx is None:
            raise InputError("matrix is not an element of this group")
        return idx

    def __contains__(self, g: FieldMatrix) -> bool:
        try:
            self.index_of(g)
            return True
        except InputError:
            return False

    def product_index(self, i: int, j: int) -> int:
        key = (i, j)
        cached = self._products.get(key)
        if cached is None:
            prod = self.elements[i] @ self.elements[j]
            cached = self._index[_raw_key(prod)]
            self._products[key] = cached
        return cached

    @property
    def inverse_indices(self) -> tuple[int, ...]:
        if self._inverses is None:
            inv = [0] * self.order
            for i, e in enumerate(self.elements):
                inv[i] = self._index[_raw_key(e.inverse().promote(self.conductor))]
            self._inverses = tuple(inv)
        return self._inverses

    def element_order(self, i: int) -> int:
        r = self._orders.get(i)
        if r is None:
            k, idx = 1, i
            while idx != self._identity_index:
                idx = self.product_index(idx, i)
                k += 1
            self._orders[i] = r = k
        return r

    def determinants(self) -> tuple[CyclotomicScalar, ...]:
        return tuple(e.det() for e in self.elements)

    def is_sl(self) -> bool:
        return all(d.is_one() for d in self.determinants())

    def is_abelian(self) -> bool:
        if self._abelian is None:
            gens = [self.elements[i] for i in self.generator_indices]
            self._abelian = all(
                a @ b == b @ a for ai, a in enumerate(gens) for b in gens[ai + 1 :]
            )
        return self._abelian

    def is_diagonal(self) -> bool:
        return all(e.is_diagonal() for e in self.elements)

    # -- conjugacy structure -----------------------------------------------------

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes as sorted index tuples; representative = least index."""
        if self._classes is None:
            if self.is_abelian():
                classes = tuple((i,) for i in range(self.order))
            else:
                inv = self.inverse_indices
                gens = self.generator_indices
                seen = [False] * self.order
                out = []
                for i in range(self.order):
                    if seen[i]:
                        continue
                    orbit = {i}
                    stack = [i]
                    seen[i] = True
                    while stack:
                        x = stack.pop()
                        for j in gens:
                            y = self.product_index(self.product_index(inv[j], x), j)
                            if y not in orbit:
                                orbit.add(y)
                                seen[y] = True
                                stack.append(y)
                    out.append(tuple(sorted(orbit)))
                classes = tuple(out)
            self._classes = classes
            self._class_of = {
                i: c for c, members in enumerate(classes) for i in members
            }
        return self._classes

    def class_count(self) -> int:
        return len(self.conjugacy_classes())

    def class_of(self, i: int) -> int:
        self.conjugacy_classes()
        return self._class_of[i]

    def centralizer(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.order:
            raise InputError(f"element index out of range: {i}")
        cached = self._centralizers.get(i)
        if cached is None:
            cached = tuple(
                j
                for j in range(self.order)
                if self.product_index(i, j) == self.product_index(j, i)
            )
            self._centralizers[i] = cached
        return cached

    def commuting_pairs_count(self) -> int:
        """#{(g, h) : gh = hg}, counted directly (not via the class equation)."""
        if self._commuting_pairs is None:
            if self.is_abelian():
                self._commuting_pairs = self.order * self.order
            else:
                self._commuting_pairs = sum(
                    len(self.centralizer(i)) for i in range(self.order)
                )
        return self._commuting_pairs

    def contains_center(self, n: Optional[int] = None) -> bool:
        """True iff some scalar element is a primitive n-th root of unity."""
        if n is None:
            n = self.dimension
        for e in self.elements:
            if e.is_scalar() and e.entries[0][0].order() == n:
                return True
        return False

    def scalar_subgroup_indices(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.elements) if e.is_scalar())

    def diagonal_subgroup_indices(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.elements) if e.is_diagonal())

    def canonical_element_keys(self) -> frozenset:
        """Conductor-independent element set identity, for group comparison."""
        return frozenset(e.canonical_key() for e in self.elements)

    # -- eigen data ---------------------------------------------------------------

    def eigen_decomposition(self, i: int):
        """Tuple of (eigenvalue, echelon eigenbasis), exponents ascending."""
        cached = self._eigen.get(i)
        if cached is None:
            cached = matrix_eigen_decomposition(
                self.elements[i], self.element_order(i)
            )
            self._eigen[i] = cached
        return cached

    def fixed_space_dim(self, i: int) -> int:
        g = self.elements[i]
        if g.is_diagonal():
            return sum(1 for j in range(self.dimension) if g.entries[j][j].is_one())
        shifted = g - FieldMatrix.identity(self.dimension).promote(g.conductor)
        return len(kernel(shifted))


def closure(spec: GroupSpec, max_order: int = DEFAULT_MAX_ORDER) -> MatrixGroup:
    """Breadth-first multiplicative closure of the generating set.

    Elements are sorted canonically (lexicographic on reduced coefficients
    at the shared conductor).  Raises GroupTooLarge when the closure
    exceeds max_order and InputError on a non-invertible generator.
    """
    conductor = 1
    for g in spec.generators:
        conductor = lcm(conductor, g.conductor)
    gens = [g.promote(conductor) for g in spec.generators]
    n = spec.dimension
    for gi, g in enumerate(gens):
        if g.det().is_zero():
            raise InputError(f"generator {gi} of {spec.name!r} is not invertible")

    identity = FieldMatrix.identity(n).promote(conductor)
    seen = {_raw_key(identity): identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                p = e @ g
                key = _raw_key(p)
                if key not in seen:
                    if len(seen) >= max_order:
                        raise GroupTooLarge(len(seen) + 1, max_order)
                    seen[key] = p
                    nxt.append(p)
        frontier = nxt

    elements = tuple(sorted(seen.values(), key=lambda m: m.sort_key()))
    index = {_raw_key(e): i for i, e in enumerate(elements)}
    gen_indices = tuple(sorted({index[_raw_key(g)] for g in gens}))
    return MatrixGroup(elements, gen_indices, name=spec.name)


def matrix_eigen_decomposition(g: FieldMatrix, order: Optional[int] = None):
    """Eigenvalues (as roots of unity, exponent ascending) with eigenbases."""
    n = g.nrows
    if order is None:
        order = _matrix_order(g)
    if g.is_diagonal():
        exps = []
        for j in range(n):
            e = discrete_root_exponent(g.entries[j][j], order)
            if e is None:
                raise InternalConsistencyError("diagonal entry is not a root of unity")
            exps.append(e)
        out = []
        for e in sorted(set(exps)):
            basis = tuple(axis_vector(n, j) for j in range(n) if exps[j] == e)
            out.append((CyclotomicScalar.root_of_unity(order, e), basis))
        return tuple(out)
    m = lcm(g.conductor, order)
    g = g.promote(m)
    out = []
    total = 0
    for j in range(order):
        lam = CyclotomicScalar.root_of_unity(order, j).promote(m)
        shifted = g - FieldMatrix.scalar_matrix(n, lam).promote(m)
        basis = kernel(shifted)
        if basis:
            out.append((CyclotomicScalar.root_of_unity(order, j), basis))
            total += len(basis)
    if total != n:
        raise InternalConsistencyError(
            f"eigenspace dimensions sum to {total}, expected {n}"
        )
    return tuple(out)


def _matrix_order(g: FieldMatrix, cap: int = 10000) -> int:
    p = g
    for k in range(1, cap + 1):
        if p.is_identity():
            return k
        p = p @ g
    raise InputError("matrix order exceeds cap; is it of finite order?")


# ---------------------------------------------------------------------------
# ages and Reid-Tai classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgeEntry:
    """Eigenvalue exponents of one element: g ~ diag(zeta_r^{a_i})."""

    order: int
    exponents: tuple[int, ...]
    age: Fraction


def element_age(group: MatrixGroup, i: int) -> AgeEntry:
    """Exact age of element i via the character-sum multiplicity formula.

    mult(zeta_r^j) = (1/r) sum_k tr(g^k) zeta_r^{-jk}; each multiplicity
    must come out a non-negative integer or something is deeply wrong.
    """
    cached = group._ages.get(i)
    if cached is not None:
        return cached
    g = group.elements[i]
    r = group.element_order(i)
    n = group.dimension
    if g.is_diagonal():
        exps = []
        for j in range(n):
            e = discrete_root_exponent(g.entries[j][j], r)
            if e is None:
                raise InternalConsistencyError(
                    "diagonal entry is not an order-r root of unity"
                )
            exps.append(e)
        exps.sort()
    else:
        m = lcm(group.conductor, r)
        traces = []
        idx = group.identity_index
        for _ in range(r):
            traces.append(group.elements[idx].trace().promote(m))
            idx = group.product_index(idx, i)
        step = m // r
        exps = []
        total = 0
        for j in range(r):
            acc = CyclotomicScalar.zero().promote(m)
            for k in range(r):
                root = CyclotomicScalar.root_of_unity(m, (-j * k * step) % m)
                acc = acc + traces[k] * root
            summed = acc.as_rational()
            if summed is None:
                raise InternalConsistencyError(
                    f"eigenvalue multiplicity of element {i} is not rational"
                )
            count = summed / r
            if count.denominator != 1 or count < 0:
                raise InternalConsistencyError(
                    f"non-integer eigenvalue multiplicity for element {i}"
                )
            exps.extend([j] * int(count))
            total += int(count)
        if total != n:
            raise InternalConsistencyError(
                f"eigenvalue multiplicities sum to {total}, expected {n}"
            )
    entry = AgeEntry(order=r, exponents=tuple(exps), age=Fraction(sum(exps), r))
    group._ages[i] = entry
    return entry


def age_profile(group: MatrixGroup) -> tuple[AgeEntry, ...]:
    """One AgeEntry per conjugacy class, in class order (ages are class functions)."""
    return tuple(
        element_age(group, members[0]) for members in group.conjugacy_classes()
    )


def pseudo_reflections(group: MatrixGroup) -> tuple[int, ...]:
    """Indices of non-identity elements fixing a hyperplane pointwise."""
    n = group.dimension
    return tuple(
        i
        for i in range(group.order)
        if i != group.identity_index and group.fixed_space_dim(i) == n - 1
    )


def reid_tai_classify(group: MatrixGroup) -> str:
    """Terminal/canonical classification of C^n/G by element ages."""
    if not group.is_sl():
        return NOT_GORENSTEIN
    profile = age_profile(group)
    ages = [
        entry.age
        for members, entry in zip(group.conjugacy_classes(), profile)
        if members[0] != group.identity_index
    ]
    if all(a > 1 for a in ages):
        return TERMINAL
    if all(a >= 1 for a in ages):
        return CANONICAL_NOT_TERMINAL
    # ages of SL elements are integers and a non-identity element has age >= 1
    raise InternalConsistencyError(
        "age below 1 for a non-identity SL element; ages must be positive integers"
    )


def weight_one_class_count(group: MatrixGroup) -> int:
    """Number of conjugacy classes of age exactly 1 (crepant divisor count)."""
    return sum(1 for entry in age_profile(group) if entry.age == 1)


@dataclass(frozen=True)
class DhvwEuler:
    """Orbifold Euler count of a linear action with its consistency data."""

    value: int
    class_count: int
    commuting_pairs: int
    group_order: int
    fixed_space_dims: tuple[int, ...]


def dhvw_euler_linear(group: MatrixGroup) -> DhvwEuler:
    """Class-sum Euler number of the linear action on C^n.

    Every fixed-point set is a linear subspace (recorded per class), so
    each class contributes 1 and the total is the class count.  The
    commuting-pair count is computed independently and must satisfy the
    Burnside identity pairs = |G| * #classes.
    """
    classes = group.conjugacy_classes()
    pairs = group.commuting_pairs_count()
    if pairs != group.order * len(classes):
        raise InternalConsistencyError(
            f"commuting pairs {pairs} != |G| * class count {group.order * len(classes)}"
        )
    dims = tuple(group.fixed_space_dim(members[0]) for members in classes)
    return DhvwEuler(
        value=len(classes),
        class_count=len(classes),
        commuting_pairs=pairs,
        group_order=group.order,
        fixed_space_dims=dims,
    )


# ---------------------------------------------------------------------------
# isotypic decomposition (module type)
# ---------------------------------------------------------------------------

_SCAN_ELEMENT_CAP = 48  # candidate subspaces come from this many leading elements


def module_type(group: MatrixGroup):
    """Sorted dimension multiset of the irreducible summands, e.g. (3, 1).

    Returns UNDETERMINED when the deterministic eigenspace scan finds no
    proper invariant subspace although the character norm exceeds 1.
    """
    if group._module_type is None:
        mats = list(group.elements)
        inv = group.inverse_indices
        gens = group.generator_indices
        parts = _module_type_rec(mats, inv, gens)
        if parts is None:
            group._module_type = UNDETERMINED
        else:
            group._module_type = tuple(sorted(parts, reverse=True))
    return group._module_type


def _character_norm(mats: Sequence[FieldMatrix], inv: Sequence[int]) -> Fraction:
    acc = CyclotomicScalar.zero()
    for i, m in enumerate(mats):
        acc = acc + m.trace() * mats[inv[i]].trace()
    value = acc.as_rational()
    if value is None:
        raise InternalConsistencyError("character norm is not rational")
    return value / len(mats)


def _module_type_rec(
    mats: list[FieldMatrix], inv: Sequence[int], gens: Sequence[int]
) -> Optional[tuple[int, ...]]:
    n = mats[0].nrows
    if n == 1:
        return (1,)
    if all(m.is_scalar() for m in mats):
        return (1,) * n
    if _character_norm(mats, inv) == 1:
        return (n,)

    found = _find_invariant_subspace(mats, gens)
    if found is None:
        return None
    w_basis = found
    c_basis = _invariant_complement(mats, inv, gens, w_basis)
    left = _module_type_rec(_restrict_all(mats, w_basis), inv, gens)
    right = _module_type_rec(_restrict_all(mats, c_basis), inv, gens)
    if left is None or right is None:
        return None
    return left + right


def _matrix_eigenspaces(m: FieldMatrix):
    try:
        return matrix_eigen_decomposition(m)
    except InputError:
        raise InternalConsistencyError("group element of infinite order")


def _g_span(basis, gen_mats) -> tuple[Vector, ...]:
    span = span_echelon(basis)
    n = len(basis[0])
    changed = True
    while changed and len(span) < n:
        changed = False
        for g in gen_mats:
            for v in list(span):
                w = _apply(g, v)
                if not in_span(span, w):
                    span = span_echelon(list(span) + [w])
                    changed = True
    return span


def _apply(m: FieldMatrix, v: Vector) -> Vector:
    zero = CyclotomicScalar.zero()
    return tuple(
        sum((m.entries[i][j] * v[j] for j in range(len(v)) if not v[j].is_zero()), zero)
        for i in range(m.nrows)
    )


def _find_invariant_subspace(mats, gens) -> Optional[tuple[Vector, ...]]:
    n = mats[0].nrows
    gen_mats = [mats[i] for i in gens]
    level1: list[tuple[Vector, ...]] = []
    scanned = 0
    for m in mats:
        if m.is_scalar():
            continue
        scanned += 1
        if scanned > _SCAN_ELEMENT_CAP:
            break
        for _value, basis in _matrix_eigenspaces(m):
            if len(basis) < n:
                span = _g_span(basis, gen_mats)
                if len(span) < n:
                    return span
                level1.append(basis)
    # depth-2 and deeper: intersect stored eigenspaces pairwise, then refine
    pool = level1
    for _depth in range(2, n + 1):
        nxt = []
        for ai in range(len(pool)):
            for bj in range(len(level1)):
                meet = subspace_intersection(pool[ai], level1[bj])
                if 0 < len(meet) < min(len(pool[ai]), len(level1[bj])):
                    span = _g_span(meet, gen_mats)
                    if len(span) < n:
                        return span
                    if len(nxt) < 64:
                        nxt.append(meet)
        if not nxt:
            break
        pool = nxt
    return None


def _invariant_complement(mats, inv, gens, w_basis) -> tuple[Vector, ...]:
    """G-invariant complement of the invariant subspace via projector averaging."""
    n = mats[0].nrows
    pivots = []
    for row in w_basis:
        lead = next(j for j, x in enumerate(row) if not x.is_zero())
        pivots.append(lead)
    zero = CyclotomicScalar.zero()
    p0_rows = [[zero] * n for _ in range(n)]
    for b, p in zip(w_basis, pivots):
        for r in range(n):
            p0_rows[r][p] = p0_rows[r][p] + b[r]
    p0 = FieldMatrix.from_rows(p0_rows)
    acc = None
    for i, m in enumerate(mats):
        term = m @ p0 @ mats[inv[i]]
        acc = term if acc is None else acc + term
    proj = acc.scale(Fraction(1, len(mats)))
    comp = kernel(proj)
    if len(comp) != n - len(w_basis):
        raise InternalConsistencyError("averaged projector has wrong rank")
    for g in (mats[i] for i in gens):
        for v in comp:
            if not in_span(comp, _apply(g, v)):
                raise InternalConsistencyError("averaged complement is not invariant")
    return comp


def _restrict_all(mats, basis) -> list[FieldMatrix]:
    """Matrices of each element's action in the given subspace basis."""
    k = len(basis)
    cols = matrix_from_columns(basis)
    out = []
    for m in mats:
        image_cols = [_apply(m, v) for v in basis]
        aug = FieldMatrix.from_rows(
            [
                list(cols.entries[i]) + [image_cols[j][i] for j in range(k)]
                for i in range(cols.nrows)
            ]
        )
        rows, pivots = rref(aug)
        if len(pivots) != k or any(p >= k for p in pivots):
            raise InternalConsistencyError("restriction basis lost rank")
        out.append(
            FieldMatrix.from_rows(
                [[rows[r][k + j] for j in range(k)] for r in range(k)]
            )
        )
    return out


# ---------------------------------------------------------------------------
# invariant lines, primed groups, induced class maps
# ---------------------------------------------------------------------------


def axis_vector(n: int, i: int) -> Vector:
    zero, one = CyclotomicScalar.zero(), CyclotomicScalar.one()
    return tuple(one if j == i else zero for j in range(n))


@dataclass(frozen=True)
class LineAction:
    """How a group acts on one invariant line."""

    axis: Optional[int]
    stabilizer: tuple[int, ...]
    characters: tuple[CyclotomicScalar, ...]
    quotient_order: int
    generator_index: int


def generic_line_stabilizer(
    group: MatrixGroup, line: Union[int, Vector]
) -> LineAction:
    """Stabilizer of the generic point of an invariant line.

    The stabilizer is the kernel of the character g -> (scalar by which g
    acts on the line); the quotient embeds in the multiplicative group of
    the field, hence is cyclic, certified here by exhibiting a character
    value of full order.
    """
    n = group.dimension
    axis: Optional[int] = None
    if isinstance(line, int):
        axis = line
        if not 0 <= axis < n:
            raise InputError(f"axis index out of range: {axis}")
        v = axis_vector(n, axis)
    else:
        v = tuple(CyclotomicScalar.coerce(x) for x in line)
        if len(v) != n or all(x.is_zero() for x in v):
            raise InputError("line must be a nonzero vector of matching dimension")
        lead = next(j for j, x in enumerate(v) if not x.is_zero())
        if all(v[j].is_zero() for j in range(n) if j != lead):
            axis = lead

    lead = next(j for j, x in enumerate(v) if not x.is_zero())
    lead_inv = v[lead].inverse()
    chars = []
    for i, g in enumerate(group.elements):
        w = _apply(g, v)
        chi = w[lead] * lead_inv
        scaled = tuple(chi * x for x in v)
        if scaled != w:
            raise InputError(
                f"line is not invariant under element {i} of {group.name!r}"
            )
        chars.append(chi)
    stab = tuple(i for i, chi in enumerate(chars) if chi.is_one())
    q = group.order // len(stab)
    # the character image is the full group of q-th roots of unity, so an
    # element mapping to the canonical primitive root exists; choosing it
    # (least index) makes downstream coset-representative choices stable
    target = CyclotomicScalar.root_of_unity(q, 1 % q)
    generator_index = None
    for i, chi in enumerate(chars):
        if chi == target:
            generator_index = i
            break
    if generator_index is None:
        raise InternalConsistencyError(
            "line character image misses the primitive root; quotient not cyclic?"
        )
    return LineAction(
        axis=axis,
        stabilizer=stab,
        characters=tuple(chars),
        quotient_order=q,
        generator_index=generator_index,
    )


def invariant_axes(group: MatrixGroup) -> tuple[int, ...]:
    """Coordinate axes preserved by every element of the group."""
    out = []
    for a in range(group.dimension):
        try:
            generic_line_stabilizer(group, a)
            out.append(a)
        except InputError:
            continue
    return tuple(out)


@dataclass(frozen=True)
class PrimedGroup:
    """Result of rescaling a line-coset representative into SL(n-1)."""

    group: MatrixGroup
    stabilizer_block_group: MatrixGroup
    h_index: int
    lambda_root: CyclotomicScalar
    lambda_candidates: tuple[CyclotomicScalar, ...]
    quotient_order: int
    quotient_cyclic: bool


def primed_group(group: MatrixGroup, line: Union[int, Vector, None] = None) -> PrimedGroup:
    """Extension of the line stabilizer's block group by the rescaled coset rep.

    Requires every element to be block-diagonal with respect to the given
    invariant coordinate axis (the "(t,1)" shape).  The rescaling root is
    chosen deterministically: the candidate of least exponent.  The result
    depends on that choice; the candidates are reported alongside it.
    """
    n = group.dimension
    if line is None:
        line = n - 1
    action = generic_line_stabilizer(group, line)
    if action.axis is None:
        raise InputError("primed-group construction needs a coordinate-axis line")
    k = action.axis
    for i, g in enumerate(group.elements):
        for r in range(n):
            if r != k and not (g.entries[r][k].is_zero() and g.entries[k][r].is_zero()):
                raise InputError(
                    f"element {i} is not block-diagonal along axis {k}; "
                    "group is not of shape (t,1) in these coordinates"
                )

    h_index = action.generator_index
    h1 = group.elements[h_index].delete_row_col(k, k)
    det_inv = h1.det().inverse()
    power = det_inv.as_root_power()
    if power is None:
        raise InternalConsistencyError("block determinant is not a root of unity")
    m_root, t = power
    nm1 = n - 1
    big = m_root * nm1
    exps = sorted(((t + m_root * i) % big) for i in range(nm1))
    candidates = tuple(
        CyclotomicScalar.root_of_unity(big, e).canonical() for e in exps
    )
    lam = candidates[0]
    h_prime = h1.scale(lam)
    if not h_prime.det().is_one():
        raise InternalConsistencyError("rescaled coset representative left SL")

    stab_blocks = [
        group.elements[i].delete_row_col(k, k) for i in action.stabilizer
    ]
    block_group = closure(
        GroupSpec(f"{group.name}|stabilizer-blocks", tuple(stab_blocks)),
        max_order=DEFAULT_MAX_ORDER,
    )
    primed = closure(
        GroupSpec(f"{group.name}|primed", tuple(stab_blocks) + (h_prime,)),
        max_order=DEFAULT_MAX_ORDER,
    )
    # h' must normalize the stabilizer blocks (conjugation by h does, blockwise)
    block_keys = block_group.canonical_element_keys()
    h_prime_inv = h_prime.inverse()
    for b in stab_blocks:
        conj = h_prime @ b @ h_prime_inv
        if conj.canonical_key() not in block_keys:
            raise InternalConsistencyError(
                "rescaled representative does not normalize the stabilizer blocks"
            )
    if primed.order % block_group.order:
        raise InternalConsistencyError("stabilizer blocks do not divide primed group")
    quotient = QuotientGroup(primed, tuple(
        primed.index_of(e) for e in block_group.elements
    ))
    return PrimedGroup(
        group=primed,
        stabilizer_block_group=block_group,
        h_index=h_index,
        lambda_root=lam,
        lambda_candidates=candidates,
        quotient_order=quotient.size,
        quotient_cyclic=quotient.is_cyclic(),
    )


class QuotientGroup:
    """G/N by canonical coset representatives (least element index per coset)."""

    def __init__(self, group: MatrixGroup, normal_indices: Sequence[int]):
        self.group = group
        nset = frozenset(normal_indices)
        if group.identity_index not in nset:
            raise InputError("subgroup must contain the identity")
        for a in nset:
            for b in nset:
                if group.product_index(a, b) not in nset:
                    raise InputError("given indices are not closed under product")
        inv = group.inverse_indices
        for g in range(group.order):
            gi = inv[g]
            for x in nset:
                if group.product_index(group.product_index(g, x), gi) not in nset:
                    raise InputError("subgroup is not normal")
        self.normal = tuple(sorted(nset))

        coset_of = [-1] * group.order
        reps: list[int] = []
        for i in range(group.order):
            if coset_of[i] >= 0:
                continue
            cid = len(reps)
            reps.append(i)
            for x in nset:
                coset_of[group.product_index(x, i)] = cid
        self.coset_of = tuple(coset_of)
        self.reps = tuple(reps)
        self.size = len(reps)
        self._orders: dict[int, int] = {}
        self._classes: Optional[tuple[tuple[int, ...], ...]] = None

    @property
    def identity(self) -> int:
        return self.coset_of[self.group.identity_index]

    def product(self, a: int, b: int) -> int:
        return self.coset_of[self.group.product_index(self.reps[a], self.reps[b])]

    def coset_order(self, a: int) -> int:
        r = self._orders.get(a)
        if r is None:
            k, x = 1, a
            while x != self.identity:
                x = self.product(x, a)
                k += 1
            self._orders[a] = r = k
        return r

    def is_cyclic(self) -> bool:
        return any(self.coset_order(a) == self.size for a in range(self.size))

    def is_abelian(self) -> bool:
        return all(
            self.product(a, b) == self.product(b, a)
            for a in range(self.size)
            for b in range(a + 1, self.size)
        )

    def inverse(self, a: int) -> int:
        return self.coset_of[self.group.inverse_indices[self.reps[a]]]

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        if self._classes is None:
            if self.is_abelian():
                self._classes = tuple((a,) for a in range(self.size))
            else:
                seen = [False] * self.size
                out = []
                for a in range(self.size):
                    if seen[a]:
                        continue
                    orbit = {a}
                    stack = [a]
                    seen[a] = True
                    while stack:
                        x = stack.pop()
                        for t in range(self.size):
                            y = self.product(self.product(self.inverse(t), x), t)
                            if y not in orbit:
                                orbit.add(y)
                                seen[y] = True
                                stack.append(y)
                    out.append(tuple(sorted(orbit)))
                self._classes = tuple(out)
        return self._classes

    def centralizer(self, a: int) -> tuple[int, ...]:
        return tuple(
            t for t in range(self.size) if self.product(a, t) == self.product(t, a)
        )


@dataclass(frozen=True)
class ClassFiberMap:
    """Fiber sizes of the induced map on conjugacy classes for G -> G/N."""

    quotient_size: int
    fibers: tuple[tuple[int, int], ...]  # (quotient coset rep element index, fiber size)
    class_count: int

    @property
    def fiber_sizes(self) -> tuple[int, ...]:
        return tuple(size for _rep, size in self.fibers)


def induced_class_map(group: MatrixGroup, normal_indices: Sequence[int]) -> ClassFiberMap:
    """Count the G-classes over each class of the cyclic quotient C = G/N.

    The quotient must be cyclic; its classes are its elements.  The fiber
    sizes always sum to the class count of G (each G-class lies in a
    single coset since N is normal).
    """
    quotient = QuotientGroup(group, normal_indices)
    if not quotient.is_cyclic():
        raise InputError("quotient by the given normal subgroup is not cyclic")
    counts = [0] * quotient.size
    for members in group.conjugacy_classes():
        cosets = {quotient.coset_of[i] for i in members}
        if len(cosets) != 1:
            raise InternalConsistencyError("conjugacy class split across cosets")
        counts[cosets.pop()] += 1
    fibers = tuple(
        (quotient.reps[c], counts[c]) for c in range(quotient.size)
    )
    total = sum(counts)
    if total != group.class_count():
        raise InternalConsistencyError(
            f"fiber sizes sum to {total}, expected {group.class_count()}"
        )
    return ClassFiberMap(
        quotient_size=quotient.size,
        fibers=fibers,
        class_count=group.class_count(),
    )


# ---------------------------------------------------------------------------
# monomial structure and projective fixed loci
# ---------------------------------------------------------------------------


def monomial_permutation_part(g: FieldMatrix) -> Optional[tuple[int, ...]]:
    """Permutation perm with g(line j) = line perm[j], or None if not monomial."""
    n = g.nrows
    perm = []
    for j in range(n):
        nz = [i for i in range(n) if not g.entries[i][j].is_zero()]
        if len(nz) != 1:
            return None
        perm.append(nz[0])
    if sorted(perm) != list(range(n)):
        return None
    return tuple(perm)


def is_monomial_group(group: MatrixGroup) -> bool:
    return all(
        monomial_permutation_part(e) is not None for e in group.elements
    )


def projective_fixed_euler(
    group: MatrixGroup,
    subgroup: Union[int, FieldMatrix, Iterable[int], MatrixGroup, None] = None,
) -> int:
    """Euler number of the fixed locus in P^(n-1) of an abelian (sub)action.

    The fixed locus is a disjoint union of projectivized joint eigenspaces;
    its Euler number is the sum of their dimensions.  Raises InputError if
    the chosen elements do not commute pairwise.
    """
    if subgroup is None:
        idxs = list(range(group.order))
    elif isinstance(subgroup, MatrixGroup):
        idxs = [group.index_of(e) for e in subgroup.elements]
    elif isinstance(subgroup, FieldMatrix):
        idxs = [group.index_of(subgroup)]
    elif isinstance(subgroup, int):
        idxs = [subgroup]
    else:
        idxs = list(subgroup)
    n = group.dimension
    if all(group.elements[i].is_diagonal() for i in idxs):
        # diagonal families commute outright, so skip the pairwise probe;
        # coordinates with equal weight vectors span one joint eigenspace each
        dims: dict[tuple, int] = {}
        for j in range(n):
            # raw coeffs are exact keys here: one group shares one conductor
            w = tuple(group.elements[i].entries[j][j].coeffs for i in idxs)
            dims[w] = dims.get(w, 0) + 1
        return sum(dims.values())
    for a in range(len(idxs)):
        for b in range(a + 1, len(idxs)):
            if group.product_index(idxs[a], idxs[b]) != group.product_index(
                idxs[b], idxs[a]
            ):
                raise InputError(
                    "projective fixed-locus formula needs a commuting family"
                )
    parts: list[tuple[Vector, ...]] = [
        span_echelon([axis_vector(n, j) for j in range(n)])
    ]
    for i in idxs:
        refined = []
        for _value, basis in group.eigen_decomposition(i):
            for part in parts:
                meet = subspace_intersection(part, basis)
                if meet:
                    refined.append(meet)
        parts = refined
    return sum(len(p) for p in parts)
