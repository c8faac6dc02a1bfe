"""Matroid oracles: graphic, uniform, partition, and minors of any of them."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction

from .errors import DependentContraction, TooLarge, ValidationFailed
from .graphs import DisjointSet
from .instance import Graph, graph_from_json, graph_to_json

MAX_BASES_GROUND = 14


class Matroid:
    """Independence oracle over an ordered ground set; ``rank`` is greedy and cached."""

    kind = "abstract"
    ground: tuple[str, ...]

    def is_independent(self, items: Iterable[str]) -> bool:
        raise NotImplementedError

    def _setup(self, ground: Sequence[str]):
        self.ground = tuple(ground)
        if len(set(self.ground)) != len(self.ground):
            raise ValidationFailed(["duplicate ground-set elements"])
        self._order = {e: i for i, e in enumerate(self.ground)}
        self._rank_cache: dict[frozenset, int] = {}

    def _unknown(self, items) -> list[str]:
        return [e for e in items if e not in self._order]

    def rank(self, items: Iterable[str] = None) -> int:
        s = frozenset(self.ground if items is None else items)
        hit = self._rank_cache.get(s)
        if hit is not None:
            return hit
        chosen: list[str] = []
        for e in sorted(s, key=self._order.__getitem__):
            if self.is_independent(chosen + [e]):
                chosen.append(e)
        self._rank_cache[s] = len(chosen)
        return len(chosen)

    def is_basis(self, items: Iterable[str]) -> bool:
        s = list(items)
        return len(set(s)) == len(s) == self.rank() and self.is_independent(s)

    def min_weight_basis(self, weights: Mapping[str, Fraction]) -> frozenset:
        order = sorted(self.ground, key=lambda e: (Fraction(weights.get(e, 0)), self._order[e]))
        chosen: list[str] = []
        for e in order:
            if self.is_independent(chosen + [e]):
                chosen.append(e)
        return frozenset(chosen)

    def bases(self) -> Iterator[frozenset]:
        """All bases, lexicographic in ground order."""
        if len(self.ground) > MAX_BASES_GROUND:
            raise TooLarge(f"|U|={len(self.ground)} exceeds the guard of {MAX_BASES_GROUND}")
        r = self.rank()
        for combo in itertools.combinations(self.ground, r):
            if self.is_independent(combo):
                yield frozenset(combo)

    def minor(self, contract: Iterable[str] = (), delete: Iterable[str] = ()) -> Matroid:
        return Minor(self, contract, delete)

    def sort(self, items: Iterable[str]) -> list[str]:
        return sorted(items, key=self._order.__getitem__)

    def to_json(self) -> dict:
        raise NotImplementedError


class GraphicMatroid(Matroid):
    kind = "graphic"

    def __init__(self, graph: Graph):
        self.graph = graph
        self._setup(graph.edge_ids)
        self._ends = [(graph.node_index(e.u), graph.node_index(e.v)) for e in graph.edges]

    def is_independent(self, items):
        ds = DisjointSet(len(self.graph.nodes))
        for e in items:
            a, b = self._ends[self.graph.edge_index(e)]
            if not ds.union(a, b):
                return False
        return True

    def to_json(self):
        return {"kind": "graphic", "graph": graph_to_json(self.graph)}


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, n: int, r: int, ground: Sequence[str] | None = None):
        ground = [f"u{i + 1}" for i in range(n)] if ground is None else list(ground)
        if len(ground) != n or not 0 <= r <= n:
            raise ValidationFailed([f"uniform matroid needs 0 <= r <= n with n={n} elements"])
        self.r = r
        self._setup(ground)

    def is_independent(self, items):
        s = set(items)
        if self._unknown(s):
            return False
        return len(s) <= self.r

    def to_json(self):
        return {"kind": "uniform", "n": len(self.ground), "r": self.r, "ground": list(self.ground)}


class PartitionMatroid(Matroid):
    kind = "partition"

    def __init__(self, blocks: Sequence[Sequence[str]], caps: Sequence[int]):
        if len(blocks) != len(caps) or any(c < 0 for c in caps):
            raise ValidationFailed(["partition matroid needs one nonnegative cap per block"])
        self.blocks = tuple(tuple(b) for b in blocks)
        self.caps = tuple(int(c) for c in caps)
        self._setup([e for b in self.blocks for e in b])
        self._block_of = {e: i for i, b in enumerate(self.blocks) for e in b}

    def is_independent(self, items):
        used = [0] * len(self.blocks)
        for e in set(items):
            i = self._block_of.get(e)
            if i is None:
                return False
            used[i] += 1
            if used[i] > self.caps[i]:
                return False
        return True

    def to_json(self):
        return {"kind": "partition", "blocks": [list(b) for b in self.blocks],
                "caps": list(self.caps)}


class Minor(Matroid):
    """``M / contract \\ delete``: ``S`` is independent iff ``S + contract`` is in ``M``."""

    kind = "minor"

    def __init__(self, base: Matroid, contract: Iterable[str] = (), delete: Iterable[str] = ()):
        self.base = base
        self.contracted = frozenset(contract)
        self.deleted = frozenset(delete)
        problems = [f"unknown element {e}" for e in
                    base._unknown(self.contracted | self.deleted)]
        if self.contracted & self.deleted:
            problems.append("contract and delete sets overlap")
        if problems:
            raise ValidationFailed(problems)
        if not base.is_independent(self.contracted):
            raise DependentContraction("contracted set is dependent",
                                       contract=base.sort(self.contracted))
        self._setup([e for e in base.ground if e not in self.contracted | self.deleted])

    def is_independent(self, items):
        s = set(items)
        if self._unknown(s):
            return False
        return self.base.is_independent(s | self.contracted)

    def to_json(self):
        return {"kind": "minor", "of": self.base.to_json(),
                "contract": self.base.sort(self.contracted),
                "delete": self.base.sort(self.deleted)}


def matroid_from_json(raw: Mapping) -> Matroid:
    kind = raw.get("kind")
    if kind == "graphic":
        return GraphicMatroid(graph_from_json(raw["graph"]))
    if kind == "uniform":
        return UniformMatroid(int(raw["n"]), int(raw["r"]), raw.get("ground"))
    if kind == "partition":
        return PartitionMatroid(raw["blocks"], raw["caps"])
    if kind == "minor":
        return Minor(matroid_from_json(raw["of"]), raw.get("contract", ()), raw.get("delete", ()))
    raise ValidationFailed([f"unknown matroid kind {kind!r}"])
