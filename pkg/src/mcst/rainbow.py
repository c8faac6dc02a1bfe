"""Rainbow detection and conversion to a rainbow-free decomposition.

Two support edges of one piece form a rainbow when the chain sets one of them
crosses are contained in (or equal to) those the other crosses. The fix solves
a potential LP that keeps the decomposition tight, never increases any chain
cut, and prefers edges crossing few chain sets; its optimal vertices carry no
rainbows.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .decomposition import LaminarDecomposition, laminar_decomposition
from .errors import InternalInvariant
from .instance import Chain, FractionalPoint, Graph, Instance, chain_sets_crossed, cut_value
from .lp.polytopes import SpanningTreePolytope, solve_over
from .lp.simplex import Row

_ZERO = Fraction(0)


@dataclass(frozen=True)
class RainbowReport:
    piece: frozenset
    pair: tuple[str, str]
    relation: str  # "subset", "superset" or "equal": crossing set of pair[0] vs pair[1]

    def to_json(self, graph: Graph) -> dict:
        return {"piece": list(graph.sort_nodes(self.piece)), "pair": list(self.pair),
                "relation": self.relation}


def find_rainbows(x: Mapping[str, Fraction], decomposition: LaminarDecomposition,
                  chain: Chain) -> list[RainbowReport]:
    graph = decomposition.graph
    crossed = {e: chain_sets_crossed(e, graph, chain) for e in graph.edge_ids}
    out = []
    for L in decomposition.family:
        support = [e for e in decomposition.pieces[L].edges if x.get(e, _ZERO) > 0]
        for i, e in enumerate(support):
            for f in support[i + 1:]:
                se, sf = crossed[e], crossed[f]
                if se == sf:
                    out.append(RainbowReport(L, (e, f), "equal"))
                elif se < sf:
                    out.append(RainbowReport(L, (e, f), "subset"))
                elif sf < se:
                    out.append(RainbowReport(L, (e, f), "superset"))
    return out


def potential_weights(x: Mapping[str, Fraction], graph: Graph, chain: Chain) -> dict[str, int]:
    """Weights 1, 2, ... over the support ordered by number of crossed chain sets."""
    support = [e for e in graph.edge_ids if x.get(e, _ZERO) > 0]
    order = sorted(support, key=lambda e: (len(chain_sets_crossed(e, graph, chain)),
                                           graph.edge_index(e)))
    return {e: i + 1 for i, e in enumerate(order)}


def make_rainbow_free(x: Mapping[str, Fraction], decomposition: LaminarDecomposition,
                      instance: Instance, max_bits: int | None = None
                      ) -> tuple[FractionalPoint, LaminarDecomposition]:
    graph, chain = instance.graph, instance.chain
    weights = potential_weights(x, graph, chain)
    sub = graph.subgraph(weights)
    poly = SpanningTreePolytope(sub)

    rows = []
    for i, s in enumerate(chain.sets):
        coeffs = {e: 1 for e in sub.cut_edges(s)}
        rows.append(Row(coeffs, "<=", cut_value(x, graph, s), f"cut[{i}]", i))
    full = frozenset(graph.nodes)
    for L in decomposition.family:
        if len(L) >= 2 and L != full:
            rows.append(Row({e: 1 for e in sub.induced_edges(L)}, "=", len(L) - 1,
                            "fix" + poly.set_tag(L), L))
    sol = solve_over(poly, weights, rows, max_bits=max_bits)
    if not sol.optimal:
        raise InternalInvariant(f"potential LP is {sol.status}; x itself is feasible")

    xp = FractionalPoint({e: sol.primal.get(e, _ZERO) for e in graph.edge_ids})
    dec = laminar_decomposition(xp, graph, seed=decomposition.family)

    problems = lemma1_problems(x, decomposition, xp, dec, chain)
    if problems:
        raise InternalInvariant("rainbow-free conversion failed", problems=problems)
    return xp, dec


def lemma1_problems(x, decomposition, xp, dec, chain) -> list[str]:
    graph = decomposition.graph
    out = []
    supp = {e for e in graph.edge_ids if x.get(e, _ZERO) > 0}
    if not {e for e in graph.edge_ids if xp.get(e, _ZERO) > 0} <= supp:
        out.append("support grew")
    if not set(decomposition.family) <= set(dec.family):
        out.append("family not refined")
    for i, s in enumerate(chain.sets):
        if cut_value(xp, graph, s) > cut_value(x, graph, s):
            out.append(f"cut of chain set {i} increased")
    if find_rainbows(xp, dec, chain):
        out.append("rainbows remain")
    return out
