from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import random_instance
from mcst import fixtures
from mcst.decomposition import laminar_decomposition
from mcst.errors import InfeasibleLP, InternalInvariant, SearchBudgetExceeded
from mcst.instance import cut_value
from mcst.oracle import integral_opt
from mcst.rainbow import make_rainbow_free
from mcst.rounding import (CONTRACT_FACTOR, face_preserving_round, is_on_minimal_face,
                           mcst_pipeline)
from mcst.verify import verify_pipeline_certificate

E1_TREE = {"e12": F(1), "e13": F(0), "e23": F(1)}


def test_round_e1_lambda2(e1):
    x = {"e12": F(1), "e13": F(1), "e23": F(0)}
    tree = face_preserving_round(x, laminar_decomposition(x, e1.graph), e1.chain)
    assert tree.edges == {"e12", "e13"}


def test_round_e1_lambda1(e1):
    tree = face_preserving_round(E1_TREE, laminar_decomposition(E1_TREE, e1.graph), e1.chain)
    assert tree.edges == {"e12", "e23"}


def test_round_unique_tree(e2):
    x = {"e12": F(1), "e23": F(1)}
    tree = face_preserving_round(x, laminar_decomposition(x, e2.graph), e2.chain)
    assert tree.edges == {"e12", "e23"}


def test_rejects_rainbows(e3):
    x = {e: F(3, 4) for e in e3.graph.edge_ids}
    with pytest.raises(InternalInvariant):
        face_preserving_round(x, laminar_decomposition(x, e3.graph), e3.chain)


def test_search_budget(e3):
    x = {e: F(3, 4) for e in e3.graph.edge_ids}
    dec = laminar_decomposition(x, e3.graph)
    with pytest.raises(SearchBudgetExceeded):
        face_preserving_round(x, dec, e3.chain, budget=1, check_rainbows=False)


def test_minimal_face_examples(e1):
    assert is_on_minimal_face(E1_TREE, {"e12", "e23"}, e1.graph)
    assert not is_on_minimal_face(E1_TREE, {"e13", "e23"}, e1.graph)
    half = {"e12": F(1, 2), "e13": F(1, 2), "e23": F(1)}
    assert is_on_minimal_face(half, {"e12", "e23"}, e1.graph)


def test_pipeline_e1(e1):
    cert = mcst_pipeline(e1, 2)
    assert cert.tree.edges == {"e12", "e13"} and cert.cost == 3
    assert cert.opt1 == 5 and cert.opt_lam == 3 and cert.crossing == [2]
    assert cert.ok
    assert verify_pipeline_certificate(e1, cert.to_json())["ok"]


def test_pipeline_e2(e2):
    cert = mcst_pipeline(e2, 2)
    assert cert.tree.edges == {"e12", "e23"} and cert.ok


def test_pipeline_infeasible():
    with pytest.raises(InfeasibleLP):
        mcst_pipeline(fixtures.infeasible())


def test_pipeline_rejects_small_lambda(e1):
    with pytest.raises(ValueError):
        mcst_pipeline(e1, 1)


def test_tamper_detected(e1):
    raw = mcst_pipeline(e1, 2).to_json()
    raw["cost"] = "2"
    assert not verify_pipeline_certificate(e1, raw)["ok"]
    raw = mcst_pipeline(e1, 2).to_json()
    raw["duals"]["y"]["0"] = "3"
    assert not verify_pipeline_certificate(e1, raw)["ok"]


def test_search_is_optimal_on_e3(e3):
    cert = mcst_pipeline(e3, 2)
    g = e3.graph
    best = cert.reports["lemma1"]
    assert best["rainbows_after"] == 0
    # brute force over every tree inside the support on the face
    x = cert.x_prime
    dec = laminar_decomposition(x, g, seed=cert.family_prime)
    denom = [cut_value(x, g, s) for s in e3.chain.sets]
    achieved = max(F(c) / d for c, d in zip(cert.crossing, denom) if d)
    from mcst.oracle import all_spanning_trees
    for t in all_spanning_trees(g):
        if is_on_minimal_face(x, t.edges, g):
            cr = [len(t.edges & set(g.cut_edges(s))) for s in e3.chain.sets]
            assert achieved <= max(F(c) / d for c, d in zip(cr, denom) if d)


@pytest.mark.slow
def test_jobs_match_serial():
    inst = random_instance(11, lo=7, hi=8)
    a = mcst_pipeline(inst, 2)
    b = mcst_pipeline(inst, 2, jobs=2)
    assert a.tree == b.tree


@given(st.integers(0, 10_000), st.sampled_from([F(3, 2), F(2), F(4)]))
def test_pipeline_random(seed, lam):
    inst = random_instance(seed, hi=7)
    cert = mcst_pipeline(inst, lam)
    assert cert.ok, cert.flags
    opt = integral_opt(inst)
    if opt.feasible:
        assert cert.cost <= lam / (lam - 1) * opt.value
    for c, b in zip(cert.crossing, inst.chain.bounds):
        assert c <= CONTRACT_FACTOR * lam * b
    assert verify_pipeline_certificate(inst, cert.to_json())["ok"]
