"""Exact combinatorial calculus of exploded fibration bases.

Pure-Python, exact-arithmetic tooling for stratified integral affine
complexes and the constructions living on them: coordinate-chart
explosion, integral subdivision and refinement, tropical curve balancing
and realization, genus-0 moduli strata, and fiber products of bases.
"""

__version__ = "0.1.0"

from .lattice import (
    IntegerMatrix,
    IntegralAffineMap,
    Lattice,
    LinearSolution,
    extend_to_unimodular_basis,
    hermite_normal_form,
    is_integral_basis_of_saturated_subspace,
    is_primitive,
    smith_normal_form,
    solve_rational_linear,
)

__all__ = [
    "IntegerMatrix",
    "IntegralAffineMap",
    "Lattice",
    "LinearSolution",
    "extend_to_unimodular_basis",
    "hermite_normal_form",
    "is_integral_basis_of_saturated_subspace",
    "is_primitive",
    "smith_normal_form",
    "solve_rational_linear",
]
