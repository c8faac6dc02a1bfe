"""Exact LP solving with lazily generated spanning-tree and matroid-rank rows."""

from .polytopes import (BasePolytope, ExplicitPolytope, Polytope, SpanningTreePolytope,
                        materialized_system, solve_over)
from .simplex import (INFEASIBLE, OPTIMAL, UNBOUNDED, ConstraintSystem, LPSolution, Row,
                      certificate_problems, solve)
from .spanning import SeparationResult, chain_rows, separate_spanning_tree, solve_chain_lp

__all__ = [
    "BasePolytope", "ConstraintSystem", "ExplicitPolytope", "INFEASIBLE", "LPSolution",
    "OPTIMAL", "Polytope", "Row", "SeparationResult", "SpanningTreePolytope", "UNBOUNDED",
    "certificate_problems", "chain_rows", "materialized_system", "separate_spanning_tree",
    "solve", "solve_chain_lp", "solve_over",
]
