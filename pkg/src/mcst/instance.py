"""Graphs, chains, instances and fractional points, with JSON (de)serialization."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnknownEdge, ValidationFailed
from .rational import fraction_to_json, to_fraction


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    cost: Fraction = Fraction(0)


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph. Node and edge order is the declaration order."""

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    _node_index: dict = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(
            self,
            "edges",
            tuple(Edge(e.id, e.u, e.v, Fraction(e.cost)) for e in self.edges),
        )
        problems = self.structural_problems()
        if problems:
            raise ValidationFailed(problems)
        object.__setattr__(self, "_node_index", {v: i for i, v in enumerate(self.nodes)})
        object.__setattr__(self, "_edge_index", {e.id: i for i, e in enumerate(self.edges)})

    @classmethod
    def from_tuples(cls, nodes: Iterable[str], edges: Iterable[tuple]) -> Graph:
        return cls(tuple(nodes), tuple(Edge(i, u, v, to_fraction(c)) for i, u, v, c in edges))

    def structural_problems(self) -> list[str]:
        problems = []
        if len(set(self.nodes)) != len(self.nodes):
            problems.append("duplicate node identifiers")
        if not self.nodes:
            problems.append("graph has no nodes")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            problems.append("duplicate edge identifiers")
        known = set(self.nodes)
        for e in self.edges:
            if e.u not in known or e.v not in known:
                problems.append(f"edge {e.id} has an unknown endpoint")
            elif e.u == e.v:
                problems.append(f"edge {e.id} is a self-loop")
            if e.cost < 0:
                problems.append(f"edge {e.id} has negative cost")
        return problems

    # -- lookups ---------------------------------------------------------
    def node_index(self, v: str) -> int:
        return self._node_index[v]

    def edge_index(self, edge_id: str) -> int:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise UnknownEdge(f"unknown edge {edge_id!r}", edge=edge_id) from None

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self.edge_index(edge_id)]

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def costs(self) -> dict[str, Fraction]:
        return {e.id: e.cost for e in self.edges}

    def sort_nodes(self, nodes: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(nodes, key=self._node_index.__getitem__))

    def node_key(self, nodes: Iterable[str]) -> tuple[int, ...]:
        """Sort key for node sets: sorted declaration indices."""
        return tuple(sorted(self._node_index[v] for v in nodes))

    # -- structure -------------------------------------------------------
    def induced_edges(self, nodes: Iterable[str]) -> list[str]:
        s = set(nodes)
        return [e.id for e in self.edges if e.u in s and e.v in s]

    def cut_edges(self, nodes: Iterable[str]) -> list[str]:
        s = set(nodes)
        return [e.id for e in self.edges if (e.u in s) != (e.v in s)]

    def is_connected(self, edge_ids: Iterable[str] | None = None) -> bool:
        if not self.nodes:
            return False
        chosen = self.edges if edge_ids is None else [self.edge(i) for i in edge_ids]
        parent = {v: v for v in self.nodes}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        comps = len(self.nodes)
        for e in chosen:
            ru, rv = find(e.u), find(e.v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        return comps == 1

    def is_spanning_tree(self, edge_ids: Iterable[str]) -> bool:
        ids = list(edge_ids)
        if len(set(ids)) != len(ids) or len(ids) != len(self.nodes) - 1:
            return False
        return self.is_connected(ids)

    def subgraph(self, edge_ids: Iterable[str]) -> Graph:
        keep = set(edge_ids)
        return Graph(self.nodes, tuple(e for e in self.edges if e.id in keep))


@dataclass(frozen=True)
class Chain:
    """Nested node sets S_1 ⊊ S_2 ⊊ ... with integer degree bounds."""

    sets: tuple[frozenset, ...]
    bounds: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        object.__setattr__(self, "bounds", tuple(self.bounds))

    def __len__(self):
        return len(self.sets)

    def problems(self, nodes: Iterable[str]) -> list[str]:
        out = []
        universe = frozenset(nodes)
        if len(self.sets) != len(self.bounds):
            out.append("chain sets and bounds differ in length")
        for i, s in enumerate(self.sets):
            if not s:
                out.append(f"chain set {i} is empty")
            if not s <= universe:
                out.append(f"chain set {i} is not a subset of the node set")
            elif s == universe:
                out.append(f"chain set {i} equals V")
        for i in range(1, len(self.sets)):
            if not self.sets[i - 1] < self.sets[i]:
                out.append(f"chain is non-nested at sets {i - 1} and {i}")
        for i, b in enumerate(self.bounds):
            if isinstance(b, bool) or not isinstance(b, int):
                out.append(f"bound {i} is not an integer")
            elif b < 1:
                out.append(f"bound {i} must be a positive integer")
        return out


@dataclass(frozen=True)
class Instance:
    graph: Graph
    chain: Chain
    lam: Fraction = Fraction(2)

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        problems = instance_problems(self.graph, self.chain, self.lam)
        if problems:
            raise ValidationFailed(problems)

    def with_lambda(self, lam) -> Instance:
        return Instance(self.graph, self.chain, to_fraction(lam))


def instance_problems(graph: Graph, chain: Chain, lam: Fraction) -> list[str]:
    problems = []
    if not graph.is_connected():
        problems.append("graph is disconnected")
    problems.extend(chain.problems(graph.nodes))
    if lam <= 1:
        problems.append("lambda must exceed 1")
    return problems


class FractionalPoint(Mapping):
    """Immutable rational vector over edge identifiers, each value in [0, 1]."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, object]):
        vals = {k: to_fraction(v) for k, v in values.items()}
        bad = [k for k, v in vals.items() if v < 0 or v > 1]
        if bad:
            raise ValidationFailed([f"value of {k} outside [0,1]" for k in bad])
        self._values = vals

    def __getitem__(self, key):
        return self._values.get(key, Fraction(0))

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        inner = ", ".join(f"{k}: {v}" for k, v in self._values.items())
        return f"FractionalPoint({{{inner}}})"

    def __eq__(self, other):
        if not isinstance(other, Mapping):
            return NotImplemented
        keys = set(self) | set(other)
        return all(self[k] == other.get(k, Fraction(0)) for k in keys)

    def __hash__(self):
        return hash(frozenset((k, v) for k, v in self._values.items() if v))

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, v in self._values.items() if v > 0)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._values.values())

    @classmethod
    def from_tree(cls, graph: Graph, tree: Iterable[str]) -> FractionalPoint:
        chosen = set(tree)
        return cls({e.id: Fraction(int(e.id in chosen)) for e in graph.edges})


@dataclass(frozen=True)
class Tree:
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))

    def check(self, graph: Graph) -> None:
        if not graph.is_spanning_tree(self.edges):
            raise ValidationFailed(["edge set is not a spanning tree"])

    def sorted(self, graph: Graph) -> list[str]:
        return sorted(self.edges, key=graph.edge_index)


# -- set functions -------------------------------------------------------

def chain_sets_crossed(edge_id: str, graph: Graph, chain: Chain) -> frozenset:
    """Indices of chain sets having exactly one endpoint of the edge inside."""
    e = graph.edge(edge_id)
    return frozenset(i for i, s in enumerate(chain.sets) if (e.u in s) != (e.v in s))


def cut_value(x: Mapping[str, Fraction], graph: Graph, nodes: Iterable[str]) -> Fraction:
    return sum((x.get(e, Fraction(0)) for e in graph.cut_edges(nodes)), Fraction(0))


def induced_value(x: Mapping[str, Fraction], graph: Graph, nodes: Iterable[str]) -> Fraction:
    return sum((x.get(e, Fraction(0)) for e in graph.induced_edges(nodes)), Fraction(0))


def crossing_count(tree: Iterable[str], graph: Graph, nodes: Iterable[str]) -> int:
    t = set(tree)
    return sum(1 for e in graph.cut_edges(nodes) if e in t)


# -- JSON ----------------------------------------------------------------

def validate_instance(raw: Mapping) -> Instance:
    """Build an Instance from its JSON form, reporting every violation at once."""
    violations: list[str] = []
    if not isinstance(raw, Mapping):
        raise ValidationFailed(["instance must be a JSON object"])
    nodes = raw.get("nodes")
    if not isinstance(nodes, list) or not all(isinstance(v, str) for v in nodes):
        violations.append("nodes must be a list of strings")
        nodes = []
    edges = []
    for k, item in enumerate(raw.get("edges") or []):
        try:
            edges.append(Edge(str(item["id"]), str(item["u"]), str(item["v"]),
                              to_fraction(item.get("cost", 0))))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            violations.append(f"edge {k} malformed: {exc}")
    sets, bounds = [], []
    for k, item in enumerate(raw.get("chain") or []):
        try:
            sets.append(frozenset(str(v) for v in item["set"]))
            bounds.append(item["bound"])
        except (KeyError, TypeError) as exc:
            violations.append(f"chain entry {k} malformed: {exc}")
    try:
        lam = to_fraction(raw.get("lambda", 2))
    except (TypeError, ValueError, ZeroDivisionError):
        violations.append("lambda is not a rational")
        lam = Fraction(2)

    graph = None
    try:
        graph = Graph(tuple(nodes), tuple(edges))
    except ValidationFailed as exc:
        violations.extend(exc.violations)
    chain = Chain(tuple(sets), tuple(bounds))
    if graph is not None:
        violations.extend(instance_problems(graph, chain, lam))
    else:
        violations.extend(chain.problems(nodes))
        if lam <= 1:
            violations.append("lambda must exceed 1")
    if violations:
        raise ValidationFailed(violations)
    return Instance(graph, chain, lam)


def graph_to_json(graph: Graph) -> dict:
    return {
        "nodes": list(graph.nodes),
        "edges": [{"id": e.id, "u": e.u, "v": e.v, "cost": fraction_to_json(e.cost)}
                  for e in graph.edges],
    }


def graph_from_json(raw: Mapping) -> Graph:
    return Graph(tuple(raw["nodes"]),
                 tuple(Edge(str(e["id"]), str(e["u"]), str(e["v"]), to_fraction(e.get("cost", 0)))
                       for e in raw["edges"]))


def instance_to_json(instance: Instance) -> dict:
    out = graph_to_json(instance.graph)
    out["chain"] = [{"set": list(instance.graph.sort_nodes(s)), "bound": b}
                    for s, b in zip(instance.chain.sets, instance.chain.bounds)]
    out["lambda"] = fraction_to_json(instance.lam)
    return out


def point_to_json(x: Mapping[str, Fraction]) -> dict:
    return {k: fraction_to_json(v) for k, v in x.items()}


def point_from_json(raw: Mapping) -> FractionalPoint:
    return FractionalPoint({str(k): to_fraction(v) for k, v in raw.items()})
