"""Exact combinatorics of quiver mutation, translation quivers and their
spatial symmetries, with cluster-variable bookkeeping over Z."""

from .quiver import (
    Arrow,
    Quiver,
    QuiverMap,
    Walk,
    find_anti_isomorphisms,
    find_isomorphisms,
    is_quiver_with_length,
    is_symmetric_quiver,
    make_quiver,
    opposite,
    walk_length,
)
from .algebra import (
    LaurentPolynomial,
    Polynomial,
    RationalExpr,
    arithmetic,
    laurent_form,
    substitute,
    variables,
)

__all__ = [
    "Arrow",
    "Quiver",
    "QuiverMap",
    "Walk",
    "find_anti_isomorphisms",
    "find_isomorphisms",
    "is_quiver_with_length",
    "is_symmetric_quiver",
    "make_quiver",
    "opposite",
    "walk_length",
    "LaurentPolynomial",
    "Polynomial",
    "RationalExpr",
    "arithmetic",
    "laurent_form",
    "substitute",
    "variables",
]
