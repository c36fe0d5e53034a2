"""Marked groups, their Cayley graphs, and exact and anchor-driven colorings."""

__version__ = "0.1.0"

from .cayley import Ball, Cycle, FiniteGraph, Segment, build, free_product_ball
from .errors import BudgetExhausted, ConsistencyError, ContractViolation, DomainError, ResourceError
from .groups import Family, MarkedGroupSpec
from .solver import AnchorSet, Coloring, chromatic_number, greedy_maximal_discrete, is_proper

__all__ = [
    "AnchorSet", "Ball", "BudgetExhausted", "Coloring", "ConsistencyError", "ContractViolation",
    "Cycle", "DomainError", "Family", "FiniteGraph", "MarkedGroupSpec", "ResourceError", "Segment",
    "build", "chromatic_number", "free_product_ball", "greedy_maximal_discrete", "is_proper",
]
