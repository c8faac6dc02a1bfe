"""Brute-force references: every spanning tree, every basis, every LP vertex."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import TooLarge
from .graphs import graph_arrays, spanning_trees
from .instance import Graph, Instance, Tree
from .lp.linalg import determinant

MAX_TREE_NODES = 12
MAX_BASIS_GROUND = 14


@dataclass
class OracleReport:
    count: int
    value: Fraction | None
    witness: object = None
    table: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        from .serialize import jsonify

        w = self.witness
        if isinstance(w, Tree):
            w = sorted(w.edges)
        elif isinstance(w, frozenset):
            w = sorted(w)
        return jsonify({"count": self.count, "value": self.value, "witness": w,
                        "table": self.table})


def all_spanning_trees(graph: Graph, limit: int = MAX_TREE_NODES) -> list[Tree]:
    """Every spanning tree once, lexicographic in edge declaration order."""
    if len(graph.nodes) > limit:
        raise TooLarge(f"|V|={len(graph.nodes)} exceeds the guard of {limit}")
    n, ends = graph_arrays(graph)
    ids = graph.edge_ids
    return [Tree(frozenset(ids[i] for i in t)) for t in spanning_trees(n, ends)]


def spanning_tree_count(graph: Graph) -> int:
    """Kirchhoff: any cofactor of the Laplacian, in exact arithmetic."""
    n = len(graph.nodes)
    if n == 1:
        return 1
    lap = [[Fraction(0)] * n for _ in range(n)]
    for e in graph.edges:
        a, b = graph.node_index(e.u), graph.node_index(e.v)
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    minor = [row[1:] for row in lap[1:]]
    det = determinant(minor)
    assert det.denominator == 1
    return int(det)


def integral_opt(instance: Instance, with_table: bool = False) -> OracleReport:
    """Cheapest spanning tree meeting every chain bound, or ``value=None``."""
    g, chain = instance.graph, instance.chain
    best, best_tree, count = None, None, 0
    table = []
    cut = [set(g.cut_edges(s)) for s in chain.sets]
    for tree in all_spanning_trees(g):
        count += 1
        crossing = [len(tree.edges & c) for c in cut]
        ok = all(x <= b for x, b in zip(crossing, chain.bounds))
        cost = sum((g.edge(e).cost for e in tree.edges), Fraction(0))
        if with_table:
            table.append({"tree": tree.sorted(g), "cost": cost, "crossing": crossing,
                          "feasible": ok})
        if ok and (best is None or cost < best):
            best, best_tree = cost, tree
    return OracleReport(count, best, best_tree, table)


def all_bases(matroid, limit: int = MAX_BASIS_GROUND) -> list[frozenset]:
    if len(matroid.ground) > limit:
        raise TooLarge(f"|U|={len(matroid.ground)} exceeds the guard of {limit}")
    return list(matroid.bases())


def kbudget_feasible_bases(inst) -> OracleReport:
    """Bases within every budget; ``value`` is the least objective length among them."""
    table = []
    count = 0
    best, witness = None, None
    for b in all_bases(inst.matroid):
        count += 1
        lengths = inst.lengths(b)
        if all(l <= B for l, B in zip(lengths, inst.B)):
            table.append({"basis": inst.matroid.sort(b), "lengths": lengths})
            v = lengths[inst.objective]
            if best is None or v < best:
                best, witness = v, b
    return OracleReport(count, best, witness, table)


def lp_vertices(polytope, extra_rows=()) -> list[dict]:
    """Vertices of the polytope cut by extra rows, by active-set enumeration."""
    from .lp.vertices import enumerate_vertices

    rows = list(polytope.all_rows()) + list(extra_rows)
    return list(enumerate_vertices(polytope.variables, rows))


def lp_value_by_vertices(polytope, objective: Mapping[str, Fraction], extra_rows=()):
    """``(value, vertex)`` minimizing the objective over enumerated vertices."""
    best = None
    for v in lp_vertices(polytope, extra_rows):
        val = sum((Fraction(objective.get(k, 0)) * x for k, x in v.items()), Fraction(0))
        if best is None or val < best[0]:
            best = (val, v)
    return best if best is not None else (None, None)
