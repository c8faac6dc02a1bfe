from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import random_instance
from mcst.decomposition import (is_laminar, laminar_decomposition, restrict,
                                tight_sets)
from mcst.errors import NotInPolytope, UnknownPiece
from mcst.instance import induced_value
from mcst.lp import solve_chain_lp


def fs(*names):
    return frozenset(names)


def pt(e12, e13, e23):
    return {"e12": F(e12), "e13": F(e13), "e23": F(e23)}


SINGLES = {fs("v1"), fs("v2"), fs("v3")}
V = fs("v1", "v2", "v3")


@pytest.mark.parametrize("x,extra", [
    (pt(1, 0, 1), {fs("v1", "v2"), fs("v2", "v3")}),
    (pt(1, 1, 0), {fs("v1", "v2"), fs("v1", "v3")}),
    (pt(F(1, 2), F(1, 2), 1), {fs("v2", "v3")}),
])
def test_tight_sets_e1(e1, x, extra):
    assert set(tight_sets(x, e1.graph)) == SINGLES | extra | {V}


def test_uniform_point_is_inside(e1):
    # each pair induces one edge, so 2/3 everywhere is a fractional spanning tree
    assert set(tight_sets(pt(F(2, 3), F(2, 3), F(2, 3)), e1.graph)) == SINGLES | {V}


def test_tight_sets_rejects_outside(e1):
    with pytest.raises(NotInPolytope):
        tight_sets(pt(1, 1, 1), e1.graph)


def test_greedy_family(e1):
    dec = laminar_decomposition(pt(1, 0, 1), e1.graph)
    assert set(dec.family) == SINGLES | {fs("v1", "v2"), V}
    dec = laminar_decomposition(pt(F(1, 2), F(1, 2), 1), e1.graph)
    assert set(dec.family) == SINGLES | {fs("v2", "v3"), V}


def test_path_family(e2):
    dec = laminar_decomposition({"e12": F(1), "e23": F(1)}, e2.graph)
    assert fs("v1", "v2") in dec.family and SINGLES <= set(dec.family)


def test_restrict(e1):
    x = pt(1, 0, 1)
    dec = laminar_decomposition(x, e1.graph)
    assert restrict(x, dec, V) == {"e13": 0, "e23": 1}
    assert restrict(x, dec, fs("v1", "v2")) == {"e12": 1}
    assert restrict(x, dec, fs("v3")) == {}
    assert dec.piece(fs("v3")).nodes == (fs("v3"),)
    with pytest.raises(UnknownPiece):
        restrict(x, dec, fs("v1", "v3"))


def test_json_shape(e1):
    out = laminar_decomposition(pt(1, 0, 1), e1.graph).to_json()
    assert ["v1", "v2"] in out["family"] and "v1,v2,v3" in out["pieces"]


@given(st.integers(0, 10_000))
def test_decomposition_invariants(seed):
    inst = random_instance(seed, hi=7)
    sol, _ = solve_chain_lp(inst, 2)
    x, g = sol.primal, inst.graph
    dec = laminar_decomposition(x, g)
    fam = set(dec.family)
    assert is_laminar(dec.family)
    assert frozenset(g.nodes) in fam and all(fs(v) in fam for v in g.nodes)
    for L in dec.family:
        assert induced_value(x, g, L) == len(L) - 1
    # pieces partition the edges and each restriction is a fractional spanning tree
    edges = [e for p in dec.pieces.values() for e in p.edges]
    assert sorted(edges) == sorted(g.edge_ids)
    for L, p in dec.pieces.items():
        assert sum(x[e] for e in p.edges) == len(p.nodes) - 1
    # maximality
    for A in tight_sets(x, g):
        if A not in fam:
            assert not is_laminar(list(fam) + [A])
    assert laminar_decomposition(x, g).family == dec.family


def test_is_laminar():
    assert is_laminar([fs("a"), fs("a", "b"), fs("c")])
    assert not is_laminar([fs("a", "b"), fs("b", "c")])
    sets = [frozenset(c) for k in (1, 2) for c in combinations("abc", k)]
    assert not is_laminar(sets)
