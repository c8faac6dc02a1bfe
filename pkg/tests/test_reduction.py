from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import random_instance
from mcst.errors import AdditiveViolation, P1Violation, ValidationFailed
from mcst.lp.polytopes import ExplicitPolytope
from mcst.lp.simplex import Row
from mcst.reduction import (Fpra, McstFpra, OracleFpra, PackingProblem, dual_function,
                            mcst_problem, problem_from_json, reduce_additive,
                            reduce_two_sided, reduce_weighted, solve_relaxation)
from mcst.rounding import mcst_pipeline


def toy():
    poly = ExplicitPolytope(["x1", "x2"], [Row({"x1": 1, "x2": 1}, "=", 1, "sum")])
    return PackingProblem(poly, [{"x1": 1}], [F(1, 4)], {"x1": 1, "x2": 2})


class Fixed(Fpra):
    beta = F(1)

    def __init__(self, point):
        self.point = point

    def round(self, problem, x, rhs):
        return self.point


def test_toy_relaxation():
    rel = solve_relaxation(toy(), lam=2)
    assert rel.x == {"x1": F(1, 2), "x2": F(1, 2)} and rel.value == F(3, 2)
    assert solve_relaxation(toy(), lam=1).value == F(7, 4)
    assert solve_relaxation(toy(), delta=[0]).value == F(7, 4)


def test_toy_weighted():
    fpra = OracleFpra("ratio")
    xhat, cert = reduce_weighted(toy(), 2, fpra)
    assert cert.ok and fpra.candidates == 2
    assert xhat in ({"x1": 1, "x2": 0}, {"x1": 0, "x2": 1})
    assert cert.checks["face_identity"]["holds"]


def test_toy_two_sided():
    xhat, cert = reduce_two_sided(toy(), 2, 2, OracleFpra("two-sided", alpha=2))
    assert xhat == {"x1": 1, "x2": 0} and cert.ok
    assert cert.values["cost"] <= cert.values["opt1"]


def test_toy_additive_lemmas():
    p = toy()
    rel0 = solve_relaxation(p, delta=[0])
    rel = solve_relaxation(p, delta=[F(1, 8)])
    assert rel.value <= rel0.value
    assert rel.y[0] * F(1, 8) <= rel0.value - rel.value
    assert dual_function(p, rel.y, rel.rhs) == rel.value
    with pytest.raises(AdditiveViolation):
        reduce_additive(p, [F(1, 8)], OracleFpra("additive", delta=[F(1, 8)]))


def test_toy_additive_integral():
    xt, cert = reduce_additive(toy(), [1], OracleFpra("additive", delta=[1]))
    assert xt == {"x1": 1, "x2": 0} and cert.ok


def test_p1_violation():
    with pytest.raises(P1Violation):
        reduce_additive(toy(), [1], Fixed({"x1": F(0), "x2": F(1)}))


def test_validation():
    poly = ExplicitPolytope(["x1", "x2"], [Row({"x1": 1, "x2": 1}, "=", 1, "sum")])
    with pytest.raises(ValidationFailed):
        PackingProblem(poly, [{"x1": -1}], [1], {"x1": 1})
    with pytest.raises(ValidationFailed):
        PackingProblem(poly, [{"x9": 1}], [1], {"x1": 1})
    with pytest.raises(ValidationFailed):
        PackingProblem(ExplicitPolytope(["x1"], []), [{"x1": 1}], [1], {"x1": 1})


def test_from_json():
    p = problem_from_json({"variables": ["x1", "x2"],
                           "rows": [{"coeffs": {"x1": 1, "x2": 1}, "sense": "=", "rhs": 1}],
                           "A": [[1, 0]], "b": ["1/4"], "c": [1, 2]})
    assert solve_relaxation(p, lam=2).value == F(3, 2)


def test_mcst_e1(e1):
    xhat, cert = reduce_weighted(mcst_problem(e1), 2, McstFpra(e1))
    assert {e for e, v in xhat.items() if v} == {"e12", "e13"}
    assert cert.values["cost"] == 3 and cert.ok
    assert cert.checks["face_identity"]["lhs"] == 3


@given(st.integers(0, 10_000))
def test_mcst_consistent_with_pipeline(seed):
    inst = random_instance(seed, hi=7)
    xhat, cert = reduce_weighted(mcst_problem(inst), 2, McstFpra(inst))
    assert cert.ok
    tree = mcst_pipeline(inst, 2).tree.edges
    assert {e for e, v in xhat.items() if v} == tree


@given(st.integers(0, 10_000), st.sampled_from([F(3, 2), F(2), F(4)]))
def test_weighted_oracle_on_random(seed, lam):
    inst = random_instance(seed, lo=4, hi=5)
    _, cert = reduce_weighted(mcst_problem(inst), lam, OracleFpra("ratio"))
    assert cert.ok
