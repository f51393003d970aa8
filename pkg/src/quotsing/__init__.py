"""Exact-arithmetic analysis of finite linear quotient singularities.

Subpackages and modules:

- ``exact_linalg``: rationals, cyclotomic scalars, integer/field matrices,
  Hermite and Smith normal forms.
- ``group_engine``: finite matrix groups, conjugacy, ages, singularity
  classification, isotypic decomposition.
- ``toric_kernel``: quotient lattices, cones, box points, fans.
- ``crepant_resolver``: stellar subdivision and crepant terminalization.
- ``euler_lab``: executable consistency checks for orbifold Euler counts.
- ``cli``: the ``quotsing`` command line front end.
"""

__version__ = "0.1.0"
