"""Crepant terminalization of abelian quotient cones.

The orthant cone is subdivided stellarly at every height-one box point
(in lexicographic order of their fractional coordinates).  Height-one
points are exactly the candidate crepant divisors, and once they are all
rays, no cone of the subdivision can contain one in the interior of its
box, so every chart is terminal.  Subdivision preserves total volume,
which is checked, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InternalConsistencyError, NotCanonicalError
from .exact_linalg import IntMatrix, frac_inverse, int_det
from .toric_kernel import (
    BoxPoint,
    Fan,
    IntVec,
    QuotientCone,
    box_points,
    classify_cone,
    fan_multiplicities,
    junior_points,
    sublattice_box,
    validate_fan,
    NOT_CANONICAL,
)


def stellar_subdivide(fan: Fan, point: IntVec) -> Fan:
    """Subdivide every full-dimensional cone containing the point.

    A cone with barycentric coefficients lambda for the point is replaced
    by one copy per strictly positive coefficient, with that ray swapped
    for the point.  Cones not containing the point are kept as they are.
    """
    if len(point) != fan.dimension:
        raise InputError("subdivision point has the wrong dimension")
    rays = list(fan.rays)
    if point in rays:
        point_index = rays.index(point)
    else:
        point_index = len(rays)
        rays.append(tuple(point))
    new_cones: list[tuple[int, ...]] = []
    touched = False
    for cone in fan.cones:
        if len(cone) != fan.dimension:
            raise InputError("stellar subdivision expects full-dimensional cones")
        m = tuple(tuple(Fraction(x) for x in fan.rays[i]) for i in cone)
        inv = frac_inverse(m)
        coeffs = [
            sum((Fraction(point[i]) * inv[i][j] for i in range(len(point))), Fraction(0))
            for j in range(len(cone))
        ]
        if any(c < 0 for c in coeffs):
            new_cones.append(cone)
            continue
        touched = True
        if point_index in cone:
            new_cones.append(cone)  # the point is already a ray here: no-op
            continue
        for pos, c in enumerate(coeffs):
            if c > 0:
                replaced = tuple(
                    point_index if k == pos else cone[k] for k in range(len(cone))
                )
                new_cones.append(replaced)
    if not touched:
        raise InputError("subdivision point lies in no cone of the fan")
    return Fan(dimension=fan.dimension, rays=tuple(rays), cones=tuple(new_cones))


@dataclass(frozen=True)
class Terminalization:
    """A crepant, terminal subdivision of a quotient cone, with its receipts."""

    cone: QuotientCone
    fan: Fan
    juniors: tuple[BoxPoint, ...]
    multiplicities: tuple[int, ...]
    multiplicity_sum: int
    crepant: bool
    terminal: bool
    smooth: bool

    @property
    def ray_count(self) -> int:
        return len(self.fan.rays)

    @property
    def cone_count(self) -> int:
        return len(self.fan.cones)


def terminalize(cone: QuotientCone) -> Terminalization:
    """Stellar subdivision at all height-one box points, lex order.

    Raises InputError on non-Gorenstein input and NotCanonicalError when a
    box point has height below one (impossible for Gorenstein cones).
    """
    if not cone.gorenstein:
        raise InputError(
            "terminalization needs a Gorenstein cone (integral height functional)"
        )
    if classify_cone(cone) == NOT_CANONICAL:
        raise NotCanonicalError(
            "cone has a box point below height one; no crepant terminalization"
        )
    juniors = junior_points(cone)
    fan = Fan(
        dimension=cone.dimension,
        rays=cone.rays,
        cones=(tuple(range(cone.dimension)),),
    )
    for b in juniors:
        fan = stellar_subdivide(fan, b.lattice)
    validate_fan(fan)
    mults = fan_multiplicities(fan)
    total = sum(mults)
    if not verify_volume_conservation(cone, fan):
        raise InternalConsistencyError(
            f"subdivision changed total volume: {total} != {cone.multiplicity}"
        )
    return Terminalization(
        cone=cone,
        fan=fan,
        juniors=juniors,
        multiplicities=mults,
        multiplicity_sum=total,
        crepant=verify_crepant(cone, fan),
        terminal=verify_terminal(cone, fan),
        smooth=smoothness_check(fan),
    )


def verify_crepant(cone: QuotientCone, fan: Fan) -> bool:
    """Every ray sits at height one, so no discrepancy is introduced."""
    return all(cone.height(r) == 1 for r in fan.rays)


def verify_terminal(cone: QuotientCone, fan: Fan) -> bool:
    """No full-dimensional cone keeps a box point of height one or less."""
    for c in range(len(fan.cones)):
        rows = [list(fan.rays[i]) for i in fan.cones[c]]
        for u in sublattice_box(rows):
            if any(u) and cone.height(u) <= 1:
                return False
    return True


def verify_volume_conservation(cone: QuotientCone, fan: Fan) -> bool:
    return sum(fan_multiplicities(fan)) == cone.multiplicity


def smoothness_check(fan: Fan) -> bool:
    """Unimodularity of every maximal cone."""
    return all(m == 1 for m in fan_multiplicities(fan))
