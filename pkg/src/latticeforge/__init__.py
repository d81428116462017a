"""Exact lattice-polytope workbench.

Convex hulls and normalized volumes over the integers, missed-volume
constructions in the corner-simplex family, integer hulls of balls and
paraboloids, equal-volume polytope families and value-set gap searches.
"""

from .errors import (BudgetExceededError, DomainError, InvariantViolation,
                     LatticeForgeError, OutOfRangeError, TheoremViolation,
                     UnsupportedDimensionError)
from .polytope import (ConvexLatticePolytope, apply_unimodular, canonical_form,
                       convex_hull, edges, in_family, normalized_volume)
from .decomposition import AdmissiblePolynomial, decompose, decompose_general
from .construction import construct_missed, thin_cut
from .regions import lattice_points
from .hull_lab import integer_hull

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError", "DomainError", "InvariantViolation", "LatticeForgeError",
    "OutOfRangeError", "TheoremViolation", "UnsupportedDimensionError",
    "ConvexLatticePolytope", "apply_unimodular", "canonical_form", "convex_hull", "edges",
    "in_family", "normalized_volume", "AdmissiblePolynomial", "decompose",
    "decompose_general", "construct_missed", "thin_cut", "lattice_points", "integer_hull",
]
