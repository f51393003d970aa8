"""Toric description of abelian quotient singularities.

C^n modulo a finite diagonal group is the affine toric variety of the
first orthant in the overlattice N = Z^n + sum_g Z * (weights(g)/ord(g)).
This module builds that lattice (via Hermite reduction), enumerates the
box of the cone (via Smith reduction of the index matrix), grades points
by the Gorenstein height functional, and handles fans: plain-text
round-tripping, validation, and per-cone multiplicity data.

All lattice points are handled in integer coordinates with respect to a
fixed basis of N; the basis itself is a matrix of rationals over Z^n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence, Union

from .errors import InputError, InternalConsistencyError
from .exact_linalg import (
    IntMatrix,
    discrete_root_exponent,
    frac_inverse,
    hermite_normal_form,
    int_det,
    int_inverse_unimodular,
    smith_normal_form,
)
from .group_engine import (
    CANONICAL_NOT_TERMINAL,
    NOT_CANONICAL,
    NOT_GORENSTEIN,
    TERMINAL,
    MatrixGroup,
)

FracRows = tuple[tuple[Fraction, ...], ...]
IntVec = tuple[int, ...]


def _primitive(v: Sequence[int]) -> IntVec:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise InputError("zero vector has no primitive multiple")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class BoxPoint:
    """A lattice point of the half-open unit box of a cone."""

    lattice: IntVec  # coordinates in the fixed basis of N
    standard: tuple[Fraction, ...]  # coordinates in the ambient C^n weights
    height: Fraction  # value of the all-ones functional


@dataclass(frozen=True)
class QuotientCone:
    """The orthant cone of C^n / (abelian diagonal group) in its lattice N."""

    dimension: int
    weights: tuple[tuple[int, tuple[int, ...]], ...]  # (order, exponents) per generator
    basis: FracRows  # rows span N inside Q^n
    basis_inv: FracRows
    rays: tuple[IntVec, ...]  # primitive generators of the axis rays, N-coords
    lattice_index: int  # |N / Z^n|, the effective group order
    multiplicity: int  # index of the ray-span in N (= lattice_index for SL)
    height_vector: tuple[Fraction, ...]  # all-ones functional in N-coords
    gorenstein: bool

    def height(self, point: Sequence[int]) -> Fraction:
        return sum(
            (Fraction(u) * h for u, h in zip(point, self.height_vector)),
            Fraction(0),
        )

    def to_lattice(self, standard: Sequence[Union[int, Fraction]]) -> Optional[IntVec]:
        """Lattice coordinates of a standard-coordinate point, or None."""
        out = []
        for j in range(self.dimension):
            acc = Fraction(0)
            for i, x in enumerate(standard):
                acc += Fraction(x) * self.basis_inv[i][j]
            if acc.denominator != 1:
                return None
            out.append(int(acc))
        return tuple(out)

    def to_standard(self, lattice: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(
            sum(
                (Fraction(u) * self.basis[i][j] for i, u in enumerate(lattice)),
                Fraction(0),
            )
            for j in range(self.dimension)
        )


def quotient_cone(
    weights: Union[tuple[int, Sequence[int]], Sequence[tuple[int, Sequence[int]]]]
) -> QuotientCone:
    """Build the toric data of C^n modulo the given diagonal weights.

    `weights` is one (d, exponents) pair or a list of them; the lattice is
    Z^n extended by exponents/d for each pair.  Exponents are reduced mod
    d; the effective group order is the lattice index |N : Z^n|, which
    divides the product of the d's and can be smaller (non-faithful input).
    """
    if weights and isinstance(weights[0], int):
        weights = [weights]  # single (d, exps) pair
    pairs = []
    n = None
    for d, exps in weights:
        if not isinstance(d, int) or d < 1:
            raise InputError(f"weight denominator must be a positive integer, got {d}")
        exps = tuple(int(a) % d for a in exps)
        if n is None:
            n = len(exps)
        elif len(exps) != n:
            raise InputError("all weight vectors must have the same length")
        pairs.append((d, exps))
    if n is None or n == 0:
        raise InputError("weights must name at least one coordinate")

    big = 1
    for d, _ in pairs:
        big = lcm(big, d)
    rows = [[big if i == j else 0 for j in range(n)] for i in range(n)]
    for d, exps in pairs:
        rows.append([(big // d) * a for a in exps])
    h, _u = hermite_normal_form(IntMatrix(rows))
    nonzero = [r for r in h.entries if any(r)]
    if len(nonzero) != n:
        raise InternalConsistencyError("lattice basis is not full rank")
    basis = tuple(tuple(Fraction(x, big) for x in r) for r in nonzero)
    basis_inv = frac_inverse(basis)
    ray_rows = []
    for i in range(n):
        row = [basis_inv[i][j] for j in range(n)]
        if any(x.denominator != 1 for x in row):
            raise InternalConsistencyError("standard basis vector left the lattice")
        ray_rows.append([int(x) for x in row])
    index = abs(int_det(IntMatrix(ray_rows)))
    rays = tuple(_primitive(r) for r in ray_rows)
    multiplicity = abs(int_det(IntMatrix([list(r) for r in rays])))
    heights = tuple(sum(row, Fraction(0)) for row in basis)
    return QuotientCone(
        dimension=n,
        weights=tuple(pairs),
        basis=basis,
        basis_inv=basis_inv,
        rays=rays,
        lattice_index=index,
        multiplicity=multiplicity,
        height_vector=heights,
        gorenstein=all(h.denominator == 1 for h in heights),
    )


def abelianize(group: MatrixGroup) -> QuotientCone:
    """Toric data of C^n/G for an abelian G, diagonalizing if necessary.

    A non-diagonal abelian group is rewritten in a joint eigenbasis; the
    quotient variety only depends on the weights, so the cone is the same.
    """
    if not group.is_abelian():
        raise InputError("toric reduction needs an abelian group")
    weights = []
    if group.is_diagonal():
        for i in group.generator_indices:
            g = group.elements[i]
            r = group.element_order(i)
            exps = []
            for j in range(group.dimension):
                e = discrete_root_exponent(g.entries[j][j], r)
                if e is None:
                    raise InternalConsistencyError("diagonal entry not a root of unity")
                exps.append(e)
            weights.append((r, tuple(exps)))
    else:
        for i in group.generator_indices:
            entry = _joint_weights(group, i)
            weights.append(entry)
    return quotient_cone(weights)


def _joint_weights(group: MatrixGroup, i: int) -> tuple[int, tuple[int, ...]]:
    # weights of element i on a joint eigenbasis of the abelian group;
    # the basis is computed by refining eigenspaces through the generators
    from .exact_linalg import span_echelon, subspace_intersection
    from .group_engine import axis_vector

    n = group.dimension
    parts = [span_echelon([axis_vector(n, j) for j in range(n)])]
    for gi in group.generator_indices:
        refined = []
        for _v, basis in group.eigen_decomposition(gi):
            for part in parts:
                meet = subspace_intersection(part, basis)
                if meet:
                    refined.append(meet)
        parts = refined
    vectors = [v for part in parts for v in part]
    if len(vectors) != n:
        raise InternalConsistencyError("joint eigenbasis has wrong size")
    r = group.element_order(i)
    g = group.elements[i]
    from .group_engine import _apply

    exps = []
    for v in vectors:
        w = _apply(g, v)
        lead = next(j for j, x in enumerate(v) if not x.is_zero())
        ratio = w[lead] * v[lead].inverse()
        e = discrete_root_exponent(ratio, r)
        if e is None:
            raise InternalConsistencyError("joint eigenvalue not a root of unity")
        exps.append(e)
    return (r, tuple(exps))


# ---------------------------------------------------------------------------
# box enumeration
# ---------------------------------------------------------------------------


def sublattice_box(rows: Sequence[Sequence[int]]) -> tuple[IntVec, ...]:
    """All integer points in {sum t_i row_i : 0 <= t_i < 1}.

    The rows must be linearly independent; the number of points equals
    |det|.  Enumeration goes through the Smith form of the row matrix, one
    point per residue class of Z^n modulo the row span.
    """
    m = IntMatrix([list(r) for r in rows])
    n = m.cols
    if m.rows != n:
        raise InputError("box enumeration needs a square generator matrix")
    vol = abs(int_det(m))
    if vol == 0:
        raise InputError("box generators are linearly dependent")
    d, _u, v = smith_normal_form(m)
    v_inv = int_inverse_unimodular(v)
    inv_rows = frac_inverse(tuple(tuple(Fraction(x) for x in r) for r in m.entries))
    diag = [d.entries[i][i] for i in range(n)]
    points = []
    idx = [0] * n
    while True:
        u = [
            sum(idx[i] * v_inv.entries[i][j] for i in range(n)) for j in range(n)
        ]
        # shift u into the fundamental box: subtract floor(u * M^-1) * M
        t = [
            sum(Fraction(u[i]) * inv_rows[i][j] for i in range(n)) for j in range(n)
        ]
        shifted = [
            u[j]
            - sum(
                (t[i].numerator // t[i].denominator) * m.entries[i][j]
                for i in range(n)
            )
            for j in range(n)
        ]
        points.append(tuple(shifted))
        # odometer over the Smith residues
        for pos in range(n):
            idx[pos] += 1
            if idx[pos] < diag[pos]:
                break
            idx[pos] = 0
        else:
            break
    if len(points) != vol or len(set(points)) != vol:
        raise InternalConsistencyError(
            f"box enumeration found {len(set(points))} points, expected {vol}"
        )
    return tuple(sorted(points))


def box_points(cone: QuotientCone) -> tuple[BoxPoint, ...]:
    """Lattice points of the half-open unit cube of C^n, zero included.

    These biject with N / Z^n, hence with the elements of the (effective)
    group, and their heights are the element ages.  The cube is spanned by
    the coordinate vectors e_i, which for a non-Gorenstein cone may be
    imprimitive in N; the primitive-ray box would then be strictly smaller.
    """
    n = cone.dimension
    axis_rows = [[int(cone.basis_inv[i][j]) for j in range(n)] for i in range(n)]
    out = []
    for u in sublattice_box(axis_rows):
        std = cone.to_standard(u)
        if any(x < 0 or x >= 1 for x in std):
            raise InternalConsistencyError("box point left the unit cube")
        out.append(BoxPoint(lattice=u, standard=std, height=cone.height(u)))
    return tuple(sorted(out, key=lambda b: b.standard))


def junior_points(cone: QuotientCone) -> tuple[BoxPoint, ...]:
    """Box points of height exactly one (the crepant-divisor candidates)."""
    return tuple(b for b in box_points(cone) if b.height == 1)


def classify_cone(cone: QuotientCone) -> str:
    """Terminal/canonical classification by box heights (matches the age test)."""
    if not cone.gorenstein:
        return NOT_GORENSTEIN
    heights = [b.height for b in box_points(cone) if any(b.lattice)]
    if any(h < 1 for h in heights):
        return NOT_CANONICAL
    if all(h > 1 for h in heights):
        return TERMINAL
    return CANONICAL_NOT_TERMINAL


# ---------------------------------------------------------------------------
# fans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fan:
    """Rays and maximal cones in the lattice coordinates of a QuotientCone."""

    dimension: int
    rays: tuple[IntVec, ...]
    cones: tuple[tuple[int, ...], ...]

    def cone_matrix(self, c: int) -> IntMatrix:
        return IntMatrix([list(self.rays[i]) for i in self.cones[c]])


def validate_fan(fan: Fan) -> None:
    """Cheap structural checks: index ranges, ray shapes, independence."""
    n = fan.dimension
    if n < 1:
        raise InputError("fan dimension must be positive")
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            raise InputError(f"ray {i} has {len(r)} coordinates, expected {n}")
        if not any(r):
            raise InputError(f"ray {i} is zero")
    for ci, cone in enumerate(fan.cones):
        if len(set(cone)) != len(cone):
            raise InputError(f"cone {ci} repeats a ray")
        for i in cone:
            if not 0 <= i < len(fan.rays):
                raise InputError(f"cone {ci} references unknown ray {i}")
        if len(cone) == n:
            if int_det(IntMatrix([list(fan.rays[i]) for i in cone])) == 0:
                raise InputError(f"cone {ci} is degenerate")
        elif len(cone) > n:
            raise InputError(f"cone {ci} has more than {n} rays")


def format_fan(fan: Fan) -> str:
    lines = [f"lattice n={fan.dimension}"]
    for i, r in enumerate(fan.rays):
        lines.append(f"ray {i}: " + " ".join(str(x) for x in r))
    for cone in fan.cones:
        lines.append("cone: " + " ".join(str(i) for i in cone))
    return "\n".join(lines) + "\n"


def parse_fan(text: str) -> Fan:
    """Inverse of format_fan; whitespace tolerant, order preserving."""
    dimension = None
    rays: list[IntVec] = []
    cones: list[tuple[int, ...]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("lattice"):
            m = re.match(r"^lattice\s+n\s*=\s*(\d+)$", line)
            if not m:
                raise InputError(f"line {ln}: malformed lattice header")
            if dimension is not None:
                raise InputError(f"line {ln}: duplicate lattice header")
            dimension = int(m.group(1))
        elif line.startswith("ray"):
            m = re.match(r"^ray\s+(\d+)\s*:\s*(.+)$", line)
            if not m:
                raise InputError(f"line {ln}: malformed ray")
            if int(m.group(1)) != len(rays):
                raise InputError(
                    f"line {ln}: ray index {m.group(1)}, expected {len(rays)}"
                )
            try:
                rays.append(tuple(int(x) for x in m.group(2).split()))
            except ValueError as exc:
                raise InputError(f"line {ln}: bad ray coordinate: {exc}") from exc
        elif line.startswith("cone"):
            m = re.match(r"^cone\s*:\s*(.+)$", line)
            if not m:
                raise InputError(f"line {ln}: malformed cone")
            try:
                cones.append(tuple(int(x) for x in m.group(1).split()))
            except ValueError as exc:
                raise InputError(f"line {ln}: bad cone index: {exc}") from exc
        else:
            raise InputError(f"line {ln}: unrecognized directive: {line.split()[0]}")
    if dimension is None:
        raise InputError("fan text has no lattice header")
    fan = Fan(dimension=dimension, rays=tuple(rays), cones=tuple(cones))
    validate_fan(fan)
    return fan


def fan_multiplicities(fan: Fan) -> tuple[int, ...]:
    """|det| of each maximal cone (all cones must be full-dimensional)."""
    out = []
    for c in range(len(fan.cones)):
        if len(fan.cones[c]) != fan.dimension:
            raise InputError("multiplicity needs full-dimensional cones")
        out.append(abs(int_det(fan.cone_matrix(c))))
    return tuple(out)


def fan_orbifold_euler(fan: Fan) -> int:
    """Sum of cone multiplicities: the class-count Euler number chart by chart.

    Each full-dimensional cone of multiplicity m is a chart C^n/A with A
    abelian of order m, contributing m; a unimodular fan gives the plain
    topological Euler number (= number of cones).
    """
    return sum(fan_multiplicities(fan))
