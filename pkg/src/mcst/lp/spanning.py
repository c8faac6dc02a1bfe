"""The chain-constrained spanning-tree LP and spanning-tree separation."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from ..instance import Graph, Instance
from .polytopes import SpanningTreePolytope, solve_over
from .simplex import LPSolution, Row


@dataclass(frozen=True)
class SeparationResult:
    violated: frozenset | None = None
    violation: Fraction = Fraction(0)

    @property
    def satisfied(self) -> bool:
        return self.violated is None


def separate_spanning_tree(x: Mapping[str, Fraction], graph: Graph) -> SeparationResult:
    """Most violated ``x(E(S)) <= |S|-1`` over proper subsets (smallest, then lexicographic)."""
    poly = SpanningTreePolytope(graph)
    row = poly.separate(x)
    if row is None:
        return SeparationResult()
    return SeparationResult(row.meta, row.activity(x) - row.rhs)


def degree_tag(i: int) -> str:
    return f"deg[{i}]"


def chain_rows(instance: Instance, lam: Fraction) -> list[Row]:
    g, ch = instance.graph, instance.chain
    return [Row({e: 1 for e in g.cut_edges(s)}, "<=", Fraction(lam) * b, degree_tag(i), i)
            for i, (s, b) in enumerate(zip(ch.sets, ch.bounds))]


def solve_chain_lp(instance: Instance, lam, max_bits: int | None = None
                   ) -> tuple[LPSolution, Fraction | None]:
    """Solve the LP with degree bounds inflated by ``lam`` (``lam >= 1``)."""
    lam = Fraction(lam)
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    poly = SpanningTreePolytope(instance.graph)
    sol = solve_over(poly, instance.graph.costs, chain_rows(instance, lam), max_bits=max_bits)
    return sol, sol.value
