from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import random_instance
from mcst.decomposition import laminar_decomposition
from mcst.errors import LemmaViolation
from mcst.lagrangian import (dual_objective, extract_duals, lagrangian_objective,
                             lagrangian_value, perturbed_costs, verify_lemma3,
                             verify_lemma4, verify_lemma6)
from mcst.lp import chain_rows, solve_chain_lp
from mcst.lp.polytopes import SpanningTreePolytope, materialized_system
from mcst.lp.simplex import ConstraintSystem, solve
from mcst.oracle import all_spanning_trees


def test_perturbed_costs(e1, e3):
    assert perturbed_costs(e1.graph, e1.chain, {0: F(3)}) == {"e12": 4, "e13": 5, "e23": 4}
    assert perturbed_costs(e1.graph, e1.chain, {}) == e1.graph.costs
    assert perturbed_costs(e3.graph, e3.chain, {0: F(1), 1: F(2)})["e14"] == 1 + 3


def test_lagrangian_value(e1):
    assert lagrangian_value(e1, 1, {0: F(3)}) == 5
    assert lagrangian_value(e1, 2, {0: F(0)}) == 3


def test_e1_duals(e1):
    sol, v = solve_chain_lp(e1, 1)
    cert = extract_duals(sol, e1, 1)
    assert dual_objective(cert, e1) == v == 5
    verify_lemma3(e1, 1, sol.primal, cert, v)
    sol, v = solve_chain_lp(e1, 2)
    cert = extract_duals(sol, e1, 2)
    assert cert.y[0] == 0
    assert verify_lemma3(e1, 2, sol.primal, cert, v)["g"] == 3


def test_spec_certificate_also_optimal(e1):
    # the alternative certificate mu_V = -4, y = 3 gives the same dual value
    assert lagrangian_value(e1, 1, {0: F(3)}) == 5
    cy = perturbed_costs(e1.graph, e1.chain, {0: F(3)})
    assert all(v >= 4 for v in cy.values())


def test_e2_zero_duals(e2):
    sol, v = solve_chain_lp(e2, 2)
    assert all(y == 0 for y in extract_duals(sol, e2, 2).y.values())


def test_lemma4_on_e1(e1):
    sol, _ = solve_chain_lp(e1, 1)
    cert = extract_duals(sol, e1, 1)
    dec = laminar_decomposition(sol.primal, e1.graph)
    verify_lemma4(sol.primal, dec, perturbed_costs(e1.graph, e1.chain, cert.y))


def test_lemma4_detects_mismatch(e1):
    x = {"e12": F(1, 2), "e13": F(1, 2), "e23": F(1)}
    dec = laminar_decomposition(x, e1.graph)
    with pytest.raises(LemmaViolation):
        verify_lemma4(x, dec, e1.graph.costs)


def test_lemma6_e1(e1):
    rep = verify_lemma6(F(5), F(3), 2, {0: F(0)}, e1.chain.bounds)
    assert rep["lhs"] == 0 and rep["rhs"] == 2
    with pytest.raises(LemmaViolation):
        verify_lemma6(F(5), F(3), 2, {0: F(3)}, e1.chain.bounds)


def _check_all(inst, sol, lam, opt1):
    cert = extract_duals(sol, inst, lam)
    x = sol.primal
    verify_lemma3(inst, lam, x, cert, sol.value)
    dec = laminar_decomposition(x, inst.graph)
    verify_lemma4(x, dec, perturbed_costs(inst.graph, inst.chain, cert.y))
    verify_lemma6(opt1, sol.value, lam, cert.y, inst.chain.bounds)
    assert dual_objective(cert, inst) == sol.value
    return cert


@given(st.integers(0, 10_000), st.sampled_from([F(3, 2), F(2), F(4)]))
def test_lemmas_random(seed, lam):
    inst = random_instance(seed, hi=7)
    s1, opt1 = solve_chain_lp(inst, 1)
    sol, _ = solve_chain_lp(inst, lam)
    if not s1.optimal:
        return
    _check_all(inst, sol, lam, opt1)
    # a second certificate: every row written out, in reversed order
    full = materialized_system(SpanningTreePolytope(inst.graph), inst.graph.costs,
                               chain_rows(inst, lam))
    again = solve(ConstraintSystem(full.variables, tuple(reversed(full.rows)), full.objective))
    _check_all(inst, again, lam, opt1)


@given(st.integers(0, 10_000), st.lists(st.fractions(0, 5), min_size=4, max_size=4))
def test_weak_duality_and_mst(seed, ys):
    inst = random_instance(seed, hi=6)
    y = {i: ys[i] for i in range(len(inst.chain))}
    g_val = lagrangian_value(inst, 2, y)
    brute = min(lagrangian_objective(inst, 2, y, {e: F(1) for e in t.edges})
                for t in all_spanning_trees(inst.graph))
    assert g_val == brute
    _, opt = solve_chain_lp(inst, 2)
    assert g_val <= opt
    cy = perturbed_costs(inst.graph, inst.chain, y)
    assert all(cy[e] >= inst.graph.costs[e] for e in cy)
