"""Exact scalar and matrix arithmetic: rationals, cyclotomics, lattices."""

from .cyclotomic import (
    CyclotomicScalar,
    Rational,
    cyclotomic_polynomial,
    discrete_root_exponent,
    divisors,
    euler_phi,
    prime_factors,
)
from .matrices import (
    FieldMatrix,
    IntMatrix,
    frac_inverse,
    hermite_normal_form,
    in_span,
    int_det,
    int_inverse_unimodular,
    kernel,
    matrix_from_columns,
    matrix_from_rows_of,
    rank,
    rref,
    smith_normal_form,
    solve_linear,
    span_echelon,
    subspace_dim,
    subspace_intersection,
)

__all__ = [
    "CyclotomicScalar",
    "FieldMatrix",
    "IntMatrix",
    "Rational",
    "cyclotomic_polynomial",
    "discrete_root_exponent",
    "divisors",
    "euler_phi",
    "frac_inverse",
    "hermite_normal_form",
    "in_span",
    "int_det",
    "int_inverse_unimodular",
    "kernel",
    "matrix_from_columns",
    "matrix_from_rows_of",
    "prime_factors",
    "rank",
    "rref",
    "smith_normal_form",
    "solve_linear",
    "span_echelon",
    "subspace_dim",
    "subspace_intersection",
]
