"""Seeded random instance generators (desk scale)."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import TooLarge
from .instance import Chain, Edge, Graph, Instance, crossing_count

MAX_NODES = 12


def gen_random(seed: int, n_nodes: int = 6, n_chain: int = 3, slack: int = 1,
               edge_prob: float = 0.35, max_cost: int = 20, lam=2) -> Instance:
    """Connected graph, random nested chain, bounds met by a planted spanning tree.

    Bounds are the planted tree's crossing counts plus a random slack in
    ``[0, slack]``, so the instance is always feasible.
    """
    if n_nodes > MAX_NODES:
        raise TooLarge(f"n_nodes={n_nodes} exceeds the guard of {MAX_NODES}")
    if n_nodes < 2:
        raise ValueError("need at least two nodes")
    rng = random.Random(seed)
    nodes = [f"v{i + 1}" for i in range(n_nodes)]
    order = nodes[:]
    rng.shuffle(order)

    pairs = set()
    planted = []
    for i in range(1, n_nodes):
        a, b = order[i], order[rng.randrange(i)]
        pairs.add(frozenset((a, b)))
        planted.append((a, b))
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            p = frozenset((nodes[i], nodes[j]))
            if p not in pairs and rng.random() < edge_prob:
                pairs.add(p)

    def cost():
        c = Fraction(rng.randint(0, max_cost))
        if rng.random() < 0.25:
            c += Fraction(1, 2)
        return c

    edges = []
    planted_ids = []
    idx = {v: i for i, v in enumerate(nodes)}
    for p in sorted(pairs, key=lambda q: sorted(idx[v] for v in q)):
        u, v = sorted(p, key=idx.__getitem__)
        eid = f"e{u[1:]}_{v[1:]}"
        edges.append(Edge(eid, u, v, cost()))
        if (u, v) in planted or (v, u) in planted:
            planted_ids.append(eid)
    graph = Graph(tuple(nodes), tuple(edges))

    ell = max(0, min(n_chain, n_nodes - 1))
    sizes = sorted(rng.sample(range(1, n_nodes), ell))
    perm = nodes[:]
    rng.shuffle(perm)
    sets = [frozenset(perm[:s]) for s in sizes]
    bounds = [crossing_count(planted_ids, graph, s) + rng.randint(0, slack) for s in sets]
    return Instance(graph, Chain(tuple(sets), tuple(bounds)), Fraction(lam))

