"""Laminar decompositions of fractional spanning trees and their contracted pieces."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInPolytope, UnknownPiece
from .instance import FractionalPoint, Graph
from .lp.polytopes import SpanningTreePolytope

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Piece:
    """``G_L``: the graph on ``L`` with the children of ``L`` contracted.

    ``nodes`` are the contracted children; a singleton ``L`` has no children
    and is represented by the one node ``L`` itself.
    """

    set: frozenset
    nodes: tuple[frozenset, ...]
    edges: tuple[str, ...]

    def endpoints(self, graph: Graph) -> list[tuple[int, int]]:
        where = {}
        for k, child in enumerate(self.nodes):
            for v in child:
                where[v] = k
        out = []
        for eid in self.edges:
            e = graph.edge(eid)
            out.append((where[e.u], where[e.v]))
        return out


@dataclass(frozen=True)
class LaminarDecomposition:
    graph: Graph
    point: FractionalPoint
    family: tuple[frozenset, ...]
    pieces: Mapping[frozenset, Piece]

    def piece(self, L) -> Piece:
        try:
            return self.pieces[frozenset(L)]
        except KeyError:
            raise UnknownPiece(f"{sorted(L)} is not in the family") from None

    def to_json(self) -> dict:
        g = self.graph
        return {
            "family": [list(g.sort_nodes(s)) for s in self.family],
            "pieces": {
                ",".join(g.sort_nodes(s)): {
                    "nodes": [list(g.sort_nodes(c)) for c in p.nodes],
                    "edges": list(p.edges),
                }
                for s, p in self.pieces.items()
            },
        }


def is_laminar(sets: Iterable[frozenset]) -> bool:
    sets = list(sets)
    return all(_compatible(a, b) for i, a in enumerate(sets) for b in sets[i + 1:])


def _compatible(a: frozenset, b: frozenset) -> bool:
    return a <= b or b <= a or not (a & b)


def _ordered(graph: Graph, sets: Iterable[frozenset]) -> list[frozenset]:
    return sorted(set(sets), key=lambda s: (len(s), graph.node_key(s)))


def tight_sets(x: Mapping[str, Fraction], graph: Graph) -> list[frozenset]:
    """Every nonempty ``A`` with ``x(E(A)) = |A| - 1``, ordered by size then nodes."""
    poly = SpanningTreePolytope(graph)
    if not poly.contains(x):
        raise NotInPolytope("point is not a fractional spanning tree")
    return _ordered(graph, poly.tight_sets(x))


def build_pieces(graph: Graph, family: Sequence[frozenset]) -> dict[frozenset, Piece]:
    pieces = {}
    for L in family:
        inside = [A for A in family if A < L]
        children = [A for A in inside if not any(A < B for B in inside)]
        children = _ordered(graph, children)
        covered = set().union(*children) if children else set()
        # uncovered nodes cannot occur once all singletons are present, but stay total
        nodes = tuple(children) + tuple(frozenset({v}) for v in graph.sort_nodes(L - covered))
        if not children and len(L) == 1:
            nodes = (L,)
        where = {v: k for k, c in enumerate(nodes) for v in c}
        edges = tuple(e.id for e in graph.edges
                      if e.u in L and e.v in L and where[e.u] != where[e.v])
        pieces[L] = Piece(L, nodes, edges)
    return pieces


def laminar_decomposition(x: Mapping[str, Fraction], graph: Graph,
                          seed: Iterable[frozenset] = ()) -> LaminarDecomposition:
    """Greedy maximal laminar family of tight sets.

    ``seed`` sets are placed first (they must be tight and mutually laminar);
    the remaining tight sets are considered by size, then node order.
    """
    point = x if isinstance(x, FractionalPoint) else FractionalPoint(x)
    tight = tight_sets(point, graph)
    tight_lookup = set(tight)
    family: list[frozenset] = []
    for s in _ordered(graph, seed):
        if s not in tight_lookup:
            raise NotInPolytope(f"seed set {sorted(s)} is not tight")
        if not all(_compatible(s, t) for t in family):
            raise ValueError("seed family is not laminar")
        family.append(s)
    chosen = set(family)
    for s in tight:
        if s in chosen:
            continue
        if all(_compatible(s, t) for t in family):
            family.append(s)
            chosen.add(s)
    family = _ordered(graph, family)
    return LaminarDecomposition(graph, point, tuple(family), build_pieces(graph, family))


def restrict(x: Mapping[str, Fraction], decomposition: LaminarDecomposition, L) -> dict:
    """``x`` on the piece-edges of ``L``; checks it is a fractional spanning tree there."""
    piece = decomposition.piece(L)
    xl = {e: Fraction(x.get(e, _ZERO)) for e in piece.edges}
    if sum(xl.values(), _ZERO) != len(piece.nodes) - 1:
        raise NotInPolytope(f"restriction to {sorted(L)} has the wrong total mass")
    return xl
