"""Small named instances used in examples, tests and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .instance import Chain, Graph, Instance


def e1(lam=2, bound: int = 1) -> Instance:
    """Triangle with costs 1, 2, 4 and one degree bound on ``v1``."""
    g = Graph.from_tuples(["v1", "v2", "v3"],
                          [("e12", "v1", "v2", 1), ("e13", "v1", "v3", 2), ("e23", "v2", "v3", 4)])
    return Instance(g, Chain((frozenset({"v1"}),), (bound,)), Fraction(lam))


def e2(lam=2) -> Instance:
    """Path ``v1 - v2 - v3``: the unique spanning tree."""
    g = Graph.from_tuples(["v1", "v2", "v3"], [("e12", "v1", "v2", 1), ("e23", "v2", "v3", 2)])
    return Instance(g, Chain((frozenset({"v1"}),), (1,)), Fraction(lam))


def e3(lam=2) -> Instance:
    """Unit-cost 4-cycle with chain ``{v1} < {v1, v2}``."""
    g = Graph.from_tuples(["v1", "v2", "v3", "v4"],
                          [("e12", "v1", "v2", 1), ("e23", "v2", "v3", 1),
                           ("e34", "v3", "v4", 1), ("e14", "v1", "v4", 1)])
    return Instance(g, Chain((frozenset({"v1"}), frozenset({"v1", "v2"})), (1, 1)),
                    Fraction(lam))


def infeasible(lam=Fraction(3, 2)) -> Instance:
    """The 4-cycle without ``e23``: ``v1`` must have degree 2 but its bound allows 3/2."""
    g = Graph.from_tuples(["v1", "v2", "v3", "v4"],
                          [("e12", "v1", "v2", 1), ("e34", "v3", "v4", 1), ("e14", "v1", "v4", 1)])
    return Instance(g, Chain((frozenset({"v1"}), frozenset({"v1", "v2"})), (1, 1)),
                    Fraction(lam))
