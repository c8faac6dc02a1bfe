from fractions import Fraction as F

from hypothesis import given, strategies as st

from conftest import random_instance
from mcst.decomposition import LaminarDecomposition, build_pieces, laminar_decomposition
from mcst.instance import cut_value
from mcst.lp import solve_chain_lp
from mcst.lp.polytopes import SpanningTreePolytope
from mcst.lp.simplex import Row
from mcst.oracle import lp_value_by_vertices
from mcst.rainbow import (find_rainbows, lemma1_problems, make_rainbow_free,
                          potential_weights)


def all_quarter(e3):
    g = e3.graph
    x = {e: F(3, 4) for e in g.edge_ids}
    fam = tuple(frozenset({v}) for v in g.nodes) + (frozenset(g.nodes),)
    return x, LaminarDecomposition(g, x, fam, build_pieces(g, fam))


def test_no_rainbows_on_tree(e1):
    x = {"e12": F(1), "e13": F(0), "e23": F(1)}
    assert find_rainbows(x, laminar_decomposition(x, e1.graph), e1.chain) == []


def test_e3_rainbows(e3):
    x, dec = all_quarter(e3)
    pairs = {frozenset(r.pair) for r in find_rainbows(x, dec, e3.chain)}
    assert frozenset({"e34", "e12"}) in pairs
    assert frozenset({"e12", "e14"}) in pairs
    assert frozenset({"e12", "e23"}) not in pairs


def test_weights_increasing(e3):
    x, _ = all_quarter(e3)
    w = potential_weights(x, e3.graph, e3.chain)
    assert w == {"e34": 1, "e12": 2, "e23": 3, "e14": 4}


def test_e1_unchanged(e1):
    x = {"e12": F(1), "e13": F(0), "e23": F(1)}
    dec = laminar_decomposition(x, e1.graph)
    xp, decp = make_rainbow_free(x, dec, e1)
    assert dict(xp) == x and set(dec.family) <= set(decp.family)


def test_e3_matches_vertex_brute_force(e3):
    x, dec = all_quarter(e3)
    g = e3.graph
    xp, decp = make_rainbow_free(x, dec, e3)
    assert find_rainbows(xp, decp, e3.chain) == []
    assert lemma1_problems(x, dec, xp, decp, e3.chain) == []
    w = potential_weights(x, g, e3.chain)
    rows = [Row({e: 1 for e in g.cut_edges(s)}, "<=", cut_value(x, g, s), f"c{i}")
            for i, s in enumerate(e3.chain.sets)]
    best, _ = lp_value_by_vertices(SpanningTreePolytope(g), w, rows)
    assert sum(w[e] * xp[e] for e in g.edge_ids) == best
    assert len(xp.support) <= 4


@given(st.integers(0, 10_000))
def test_lemma1_properties(seed):
    inst = random_instance(seed, hi=7)
    sol, _ = solve_chain_lp(inst, 2)
    x = sol.primal
    dec = laminar_decomposition(x, inst.graph)
    xp, decp = make_rainbow_free(x, dec, inst)
    g = inst.graph
    assert xp.support <= {e for e in g.edge_ids if x[e] > 0}
    assert set(dec.family) <= set(decp.family)
    for s in inst.chain.sets:
        assert cut_value(xp, g, s) <= cut_value(x, g, s)
    assert find_rainbows(xp, decp, inst.chain) == []
    # idempotence: a second pass finds nothing better under its own weights
    xpp, decpp = make_rainbow_free(xp, decp, inst)
    w = potential_weights(xp, g, inst.chain)
    assert sum(w[e] * xpp[e] for e in w) == sum(w[e] * xp[e] for e in w)
    assert find_rainbows(xpp, decpp, inst.chain) == []
