"""Small multigraph utilities shared by the LP, rounding and oracle layers."""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction


class DisjointSet:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True

    def copy(self) -> DisjointSet:
        out = DisjointSet.__new__(DisjointSet)
        out.parent = list(self.parent)
        return out


def connected(n: int, ends: Sequence[tuple[int, int]]) -> bool:
    if n <= 1:
        return True
    ds = DisjointSet(n)
    comps = n
    for a, b in ends:
        if ds.union(a, b):
            comps -= 1
            if comps == 1:
                return True
    return comps == 1


def spanning_trees(n: int, ends: Sequence[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
    """Yield every spanning tree of a multigraph as sorted edge positions.

    Trees come out in lexicographic order of their position tuples.
    """
    m = len(ends)
    need = n - 1
    if need < 0:
        return
    if need == 0:
        yield ()
        return

    def rec(i, ds, chosen):
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if m - i < need - len(chosen):
            return
        a, b = ends[i]
        ra, rb = ds.find(a), ds.find(b)
        if ra != rb:
            nd = ds.copy()
            nd.parent[ra] = rb
            chosen.append(i)
            yield from rec(i + 1, nd, chosen)
            chosen.pop()
        # excluding edge i is useful only if the rest can still connect
        rest = [ends[j] for j in chosen] + list(ends[i + 1:])
        if connected(n, rest):
            yield from rec(i + 1, ds, chosen)

    yield from rec(0, DisjointSet(n), [])


def minimum_spanning_tree(n: int, ends: Sequence[tuple[int, int]],
                          weights: Sequence[Fraction]) -> tuple[int, ...] | None:
    """Kruskal with ties broken by edge position; ``None`` if disconnected."""
    order = sorted(range(len(ends)), key=lambda i: (weights[i], i))
    ds = DisjointSet(n)
    chosen = []
    for i in order:
        if ds.union(*ends[i]):
            chosen.append(i)
    if len(chosen) != max(n - 1, 0):
        return None
    return tuple(sorted(chosen))


def graph_arrays(graph) -> tuple[int, list[tuple[int, int]]]:
    """Node count and endpoint index pairs of an :class:`~mcst.instance.Graph`."""
    idx = {v: i for i, v in enumerate(graph.nodes)}
    return len(graph.nodes), [(idx[e.u], idx[e.v]) for e in graph.edges]


def mask_nodes(mask: int, nodes: Sequence[str]) -> frozenset:
    return frozenset(nodes[i] for i in range(len(nodes)) if mask >> i & 1)


def nodes_mask(subset, index: Mapping[str, int]) -> int:
    m = 0
    for v in subset:
        m |= 1 << index[v]
    return m
