"""Chain-constrained spanning trees by Lagrangian rounding, with exact certificates.

Also provides the generic reduction from weighted to unweighted packing
problems and a budgeted matroid basis solver built on it.
"""

from .budget import BudgetedInstance, kbudget_solve
from .decomposition import laminar_decomposition
from .instance import Chain, Edge, FractionalPoint, Graph, Instance, Tree, validate_instance
from .lp import solve_chain_lp
from .rainbow import make_rainbow_free
from .rounding import face_preserving_round, mcst_pipeline

__all__ = [
    "BudgetedInstance",
    "Chain",
    "Edge",
    "FractionalPoint",
    "Graph",
    "Instance",
    "Tree",
    "face_preserving_round",
    "kbudget_solve",
    "laminar_decomposition",
    "make_rainbow_free",
    "mcst_pipeline",
    "solve_chain_lp",
    "validate_instance",
]
