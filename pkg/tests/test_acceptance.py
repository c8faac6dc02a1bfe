"""The ten acceptance criteria, one test each.

Every criterion prints ``criterion N: PASS`` or ``criterion N: FAIL (...)``;
the lines are repeated in pytest's terminal summary. Run this file directly
(``python3 tests/test_acceptance.py``) for the lines alone.
"""

import os
import random
import sys
import time
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mcst import fixtures  # noqa: E402
from mcst.budget import (BnFpra, budgeted_additive_solve, gen_matroid_instance,  # noqa: E402
                         kbudget_solve, m1, to_problem)
from mcst.decomposition import laminar_decomposition  # noqa: E402
from mcst.errors import McstError  # noqa: E402
from mcst.generate import gen_random  # noqa: E402
from mcst.instance import cut_value  # noqa: E402
from mcst.lagrangian import lagrangian_objective, lagrangian_value, perturbed_costs  # noqa: E402
from mcst.lp import chain_rows, solve_chain_lp  # noqa: E402
from mcst.lp.polytopes import SpanningTreePolytope, materialized_system  # noqa: E402
from mcst.lp.simplex import solve  # noqa: E402
from mcst.oracle import all_spanning_trees, integral_opt, kbudget_feasible_bases, spanning_tree_count  # noqa: E402,E501
from mcst.rainbow import find_rainbows  # noqa: E402
from mcst.reduction import McstFpra, mcst_problem, reduce_additive, reduce_weighted  # noqa: E402
from mcst.rounding import CONTRACT_FACTOR, is_on_minimal_face, mcst_pipeline  # noqa: E402

LAMBDAS = (F(2), F(3, 2), F(4))
TIME_LIMIT = 10.0
RESULTS: dict[int, str] = {}


def suite_instances():
    out = [("E1", fixtures.e1()), ("E2", fixtures.e2()), ("E3", fixtures.e3())]
    for k in range(50):
        seed = 1000 + k
        rng = random.Random(seed)
        out.append((f"seed{seed}", gen_random(seed, n_nodes=rng.randint(4, 9),
                                              n_chain=rng.randint(1, 4))))
    return out


def run_suite():
    runs = []
    for name, inst in suite_instances():
        for lam in LAMBDAS:
            t0 = time.perf_counter()
            try:
                cert, err = mcst_pipeline(inst, lam), None
            except McstError as exc:
                cert, err = None, exc
            runs.append({"name": name, "inst": inst, "lam": lam, "cert": cert, "error": err,
                         "seconds": time.perf_counter() - t0})
    return runs


def _label(run):
    return f"{run['name']}@{run['lam']}"


def _completed(runs, failures):
    for run in runs:
        if run["cert"] is None:
            failures.append(f"{_label(run)}: {run['error']!r}")
        else:
            yield run


# -- criteria ---------------------------------------------------------------

def criterion_1(runs):
    failures = []
    for run in _completed(runs, failures):
        cert, inst, lam = run["cert"], run["inst"], run["lam"]
        if cert.opt1 is None:
            failures.append(f"{_label(run)}: LP at lambda=1 infeasible")
        elif not cert.cost <= lam / (lam - 1) * cert.opt1:
            failures.append(f"{_label(run)}: cost {cert.cost} above {lam / (lam - 1) * cert.opt1}")
        if not inst.graph.is_spanning_tree(cert.tree.edges):
            failures.append(f"{_label(run)}: not a spanning tree")
        for s, b in zip(inst.chain.sets, inst.chain.bounds):
            c = len(cert.tree.edges & set(inst.graph.cut_edges(s)))
            if not c <= CONTRACT_FACTOR * lam * b:
                failures.append(f"{_label(run)}: crossing {c} above {CONTRACT_FACTOR * lam * b}")
        if run["seconds"] >= TIME_LIMIT:
            failures.append(f"{_label(run)}: took {run['seconds']:.1f}s")
    return failures


def criterion_2(runs):
    failures = []
    for run in _completed(runs, failures):
        cert, inst, lam = run["cert"], run["inst"], run["lam"]
        y = dict(cert.duals.y)
        g = lagrangian_value(inst, lam, y)
        psi = lagrangian_objective(inst, lam, y, cert.x_star)
        if not g == psi == cert.opt_lam:
            failures.append(f"{_label(run)}: g={g} psi={psi} opt={cert.opt_lam}")
    return failures


def criterion_3(runs):
    failures = []
    for run in _completed(runs, failures):
        cert, inst = run["cert"], run["inst"]
        cy = perturbed_costs(inst.graph, inst.chain, cert.duals.y)
        dec = laminar_decomposition(cert.x_star, inst.graph)
        for L, piece in dec.pieces.items():
            values = {cy[e] for e in piece.edges if cert.x_star[e] > 0}
            if len(values) > 1:
                failures.append(f"{_label(run)}: piece {sorted(L)} has {sorted(values)}")
    return failures


def criterion_4(runs):
    failures = []
    for run in _completed(runs, failures):
        cert, inst, lam = run["cert"], run["inst"], run["lam"]
        lhs = sum((b * cert.duals.y[i] for i, b in enumerate(inst.chain.bounds)), F(0))
        rhs = (cert.opt1 - cert.opt_lam) / (lam - 1)
        if not lhs <= rhs:
            failures.append(f"{_label(run)}: {lhs} > {rhs}")
        if run["name"] == "E1" and lam == 2 and (lhs, rhs) != (0, 2):
            failures.append(f"E1@2: sides are {lhs}, {rhs}; expected 0, 2")
    return failures


def criterion_5(runs):
    failures = []
    for run in _completed(runs, failures):
        cert, inst = run["cert"], run["inst"]
        g, x, xp = inst.graph, cert.x_star, cert.x_prime
        if not xp.support <= x.support:
            failures.append(f"{_label(run)}: support grew")
        if not set(cert.family) <= set(cert.family_prime):
            failures.append(f"{_label(run)}: family not refined")
        for i, s in enumerate(inst.chain.sets):
            if cut_value(xp, g, s) > cut_value(x, g, s):
                failures.append(f"{_label(run)}: cut {i} increased")
        dec = laminar_decomposition(xp, g, seed=cert.family_prime)
        if dec.family != cert.family_prime or find_rainbows(xp, dec, inst.chain):
            failures.append(f"{_label(run)}: rainbows remain")
    return failures


def criterion_6(runs):
    failures = []
    for run in _completed(runs, failures):
        if not is_on_minimal_face(run["cert"].x_prime, run["cert"].tree, run["inst"].graph):
            failures.append(f"{_label(run)}: tree leaves the minimal face of x'")
    for run in runs:
        if run["cert"] is None:
            continue
        inst, lam = run["inst"], run["lam"]
        try:
            xhat, rc = reduce_weighted(mcst_problem(inst), lam, McstFpra(inst), strict=False)
        except McstError as exc:
            failures.append(f"{_label(run)}: reduce_weighted raised {exc!r}")
            continue
        face = rc.checks["face_identity"]
        if not face["holds"]:
            failures.append(f"{_label(run)}: {face['lhs']} != {face['rhs']}")
        if {e for e, v in xhat.items() if v} != run["cert"].tree.edges:
            failures.append(f"{_label(run)}: reduction and pipeline trees differ")
    return failures


def criterion_7(runs):
    failures = []
    e1 = fixtures.e1()
    _, opt1 = solve_chain_lp(e1, 1)
    _, opt2 = solve_chain_lp(e1, 2)
    brute = integral_opt(e1)
    brute2 = integral_opt(fixtures.e1(bound=2))
    if (opt1, opt2) != (5, 3):
        failures.append(f"LP values {opt1}, {opt2}")
    if brute.value != 5 or brute.witness.edges != {"e12", "e23"} or brute2.value != 3:
        failures.append(f"oracle gives {brute.value} and {brute2.value}")
    run = next(r for r in runs if r["name"] == "E1" and r["lam"] == 2)
    cert = run["cert"]
    if cert is None or cert.cost != 3 or cert.crossing != [2] or cert.opt1 != brute.value:
        failures.append("pipeline at lambda=2 does not give cost 3 with crossing 2")
    return failures


def matroid_suite(count=25):
    out = [("M1", m1())]
    seed = 0
    while len(out) < count + 1:
        inst = gen_matroid_instance(seed, n=10, k=2 + seed % 2)
        seed += 1
        if _relaxation_feasible(inst):
            out.append((f"matroid{seed - 1}", inst))
    return out


def _relaxation_feasible(inst):
    from mcst.reduction import solve_relaxation

    return solve_relaxation(to_problem(inst), delta=[0] * (inst.k - 1)).feasible


def criterion_8():
    failures = []
    for name, inst in matroid_suite():
        fpra = BnFpra(inst)
        try:
            _, cert = reduce_additive(to_problem(inst), fpra.delta, fpra, strict=False)
        except McstError as exc:
            failures.append(f"{name}: {exc!r}")
            continue
        for key in ("cost", "packing", "dual_function_equals_lagrangian",
                    "lagrangian_equals_opt", "dual_mass"):
            if not cert.checks[key]["holds"]:
                failures.append(f"{name}: {key} fails")
    res = budgeted_additive_solve(m1())
    if not res.feasible:
        failures.append("M1: additive solve reports infeasible")
    return failures


def criterion_9(count=60):
    failures = []
    eps = F(1, 2)
    seen = {"feasible": 0, "infeasible": 0}
    for seed in range(count):
        inst = gen_matroid_instance(5000 + seed, n=10, k=2 + seed % 2)
        oracle = kbudget_feasible_bases(inst)
        seen["feasible" if oracle.feasible else "infeasible"] += 1
        res = kbudget_solve(inst, eps, 1)
        if res.feasible:
            lengths = inst.lengths(res.basis)
            ok = inst.matroid.is_basis(res.basis) and lengths[inst.objective] <= \
                inst.B[inst.objective] and all(lengths[i] <= (1 + eps) * inst.B[i]
                                               for i in inst.packing)
            if not ok:
                failures.append(f"seed {5000 + seed}: returned basis violates the bounds")
        elif oracle.feasible:
            failures.append(f"seed {5000 + seed}: feasible instance reported infeasible")
    res = kbudget_solve(m1(), eps, 1)
    if not (res.feasible and m1().within(res.basis, eps)):
        failures.append("M1: no verified basis")
    if not all(seen.values()):
        failures.append(f"suite lacks variety: {seen}")
    return failures


def criterion_10():
    failures = []
    for name, inst in suite_instances():
        g = inst.graph
        sol1, v1 = solve_chain_lp(inst, 1)
        brute = integral_opt(inst)
        if brute.feasible and not (v1 is not None and v1 <= brute.value):
            failures.append(f"{name}: LP {v1} above integral {brute.value}")
        if len(all_spanning_trees(g)) != spanning_tree_count(g):
            failures.append(f"{name}: tree count mismatch")
        for lam in (F(1), F(2)):
            _, cut = solve_chain_lp(inst, lam)
            full = solve(materialized_system(SpanningTreePolytope(g), g.costs,
                                             chain_rows(inst, lam)))
            if full.value != cut:
                failures.append(f"{name}@{lam}: cutting plane {cut} vs materialized {full.value}")
    return failures


# -- pytest wiring ----------------------------------------------------------

def _report(n, failures):
    line = f"criterion {n}: PASS" if not failures else \
        f"criterion {n}: FAIL ({len(failures)} problems; first: {failures[0]})"
    RESULTS[n] = line
    print(line)
    return line


@pytest.fixture(scope="module")
def runs():
    return run_suite()


@pytest.mark.parametrize("n", range(1, 8))
def test_pipeline_criteria(runs, n):
    failures = globals()[f"criterion_{n}"](runs)
    _report(n, failures)
    assert not failures, failures[:5]


@pytest.mark.parametrize("n", range(8, 11))
def test_standalone_criteria(n):
    failures = globals()[f"criterion_{n}"]()
    _report(n, failures)
    assert not failures, failures[:5]


if __name__ == "__main__":
    suite = run_suite()
    bad = False
    for n in range(1, 11):
        fn = globals()[f"criterion_{n}"]
        failures = fn(suite) if n <= 7 else fn()
        _report(n, failures)
        bad |= bool(failures)
    sys.exit(1 if bad else 0)
