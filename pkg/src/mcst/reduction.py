"""Cost minimization over a polytope with packing rows, reduced to face-preserving rounding.

A ``PackingProblem`` asks for a vertex ``x`` of ``P`` with ``Ax <= b`` minimizing
``c x``. Three drivers solve a relaxation once, hand its optimal vertex to a
rounding procedure once, and certify the outcome exactly:

* ``reduce_weighted``: inflate ``b`` by ``lam``; the rounder keeps ``Ax_hat <= beta Ax``.
* ``reduce_two_sided``: inflate by ``alpha``; the rounder also keeps tight rows
  from dropping below ``1/alpha`` of their value.
* ``reduce_additive``: relax ``b`` to ``b + delta``; the rounder moves every row by
  at most ``delta``.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (AdditiveViolation, CertFailed, Infeasible, P1Violation, P3Violation,
                     ValidationFailed)
from .lp.polytopes import Polytope, solve_over
from .lp.simplex import LPSolution, Row
from .serialize import jsonify

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _dot(row: Mapping[str, Fraction], x: Mapping[str, Fraction]) -> Fraction:
    return sum((Fraction(a) * Fraction(x.get(v, _ZERO)) for v, a in row.items()), _ZERO)


@dataclass
class PackingProblem:
    polytope: Polytope
    A: Sequence[Mapping[str, Fraction]]
    b: Sequence[Fraction]
    c: Mapping[str, Fraction]
    row_tags: Sequence[str] | None = None
    row_meta: Sequence | None = None
    check_bounded: bool = True

    def __post_init__(self):
        self.A = [{v: Fraction(a) for v, a in row.items() if a} for row in self.A]
        self.b = [Fraction(v) for v in self.b]
        self.c = {v: Fraction(self.c.get(v, 0)) for v in self.polytope.variables}
        if self.row_tags is None:
            self.row_tags = [f"pack[{i}]" for i in range(len(self.A))]
        if self.row_meta is None:
            self.row_meta = [("pack", i) for i in range(len(self.A))]
        problems = self.problems()
        if problems:
            raise ValidationFailed(problems)

    def problems(self) -> list[str]:
        out = []
        known = set(self.polytope.variables)
        if len(self.A) != len(self.b):
            out.append("A and b have different lengths")
        for i, row in enumerate(self.A):
            if any(v not in known for v in row):
                out.append(f"packing row {i} references an unknown variable")
            if any(a < 0 for a in row.values()):
                out.append(f"packing row {i} has a negative coefficient")
        if any(v < 0 for v in self.b):
            out.append("b has a negative entry")
        if any(v < 0 for v in self.c.values()):
            out.append("c has a negative entry")
        if not out and self.check_bounded:
            sol = solve_over(self.polytope, {v: -1 for v in self.polytope.variables})
            if sol.status == "unbounded":
                out.append("polytope is unbounded")
        return out

    @property
    def m(self) -> int:
        return len(self.A)

    def activity(self, x: Mapping[str, Fraction]) -> list[Fraction]:
        return [_dot(row, x) for row in self.A]

    def cost(self, x: Mapping[str, Fraction]) -> Fraction:
        return _dot(self.c, x)

    def packing_rows(self, rhs: Sequence[Fraction]) -> list[Row]:
        return [Row(row, "<=", r, tag, meta)
                for row, r, tag, meta in zip(self.A, rhs, self.row_tags, self.row_meta)]

    def perturbed_costs(self, y: Sequence[Fraction]) -> dict[str, Fraction]:
        """``c + A^T y``."""
        out = dict(self.c)
        for yi, row in zip(y, self.A):
            if yi:
                for v, a in row.items():
                    out[v] += yi * a
        return out


@dataclass
class Relaxation:
    solution: LPSolution
    rhs: list[Fraction]
    x: dict[str, Fraction] | None
    y: list[Fraction] | None
    value: Fraction | None

    @property
    def feasible(self) -> bool:
        return self.solution.optimal


def solve_relaxation(problem: PackingProblem, lam=None, delta: Sequence | None = None,
                     max_bits: int | None = None) -> Relaxation:
    """``min c x`` over ``P`` with ``Ax <= lam b`` or ``Ax <= b + delta`` (exactly one given)."""
    if (lam is None) == (delta is None):
        raise ValueError("give exactly one of lam and delta")
    if lam is not None:
        rhs = [Fraction(lam) * v for v in problem.b]
    else:
        if len(delta) != problem.m or any(Fraction(d) < 0 for d in delta):
            raise ValidationFailed(["delta must be a nonnegative vector with one entry per row"])
        rhs = [v + Fraction(d) for v, d in zip(problem.b, delta)]
    rows = problem.packing_rows(rhs)
    sol = solve_over(problem.polytope, problem.c, rows, max_bits=max_bits)
    if not sol.optimal:
        return Relaxation(sol, rhs, None, None, None)
    # <= rows carry nonpositive duals in the solver's convention
    y = [-sol.dual.get(tag, _ZERO) for tag in problem.row_tags]
    x = {v: sol.primal.get(v, _ZERO) for v in problem.polytope.variables}
    return Relaxation(sol, rhs, x, y, sol.value)


# -- rounding procedures ----------------------------------------------------

class Fpra:
    """Maps a point of ``P`` to a vertex on its minimal face.

    ``beta`` bounds ``Ax_hat <= beta Ax``; ``alpha`` names the lower-bound
    factor on tight rows; ``delta`` bounds ``|A(x_hat - x)|``. Unset means the
    procedure makes no such promise.
    """

    beta: Fraction | None = None
    alpha: Fraction | None = None
    delta: list[Fraction] | None = None

    def round(self, problem: PackingProblem, x: Mapping[str, Fraction],
              rhs: Sequence[Fraction]) -> dict[str, Fraction]:
        raise NotImplementedError


def _ratio_score(problem, xhat, ax):
    worst = _ZERO
    for a, row in zip(ax, problem.A):
        v = _dot(row, xhat)
        if v == 0:
            continue
        if a == 0:
            return None
        worst = max(worst, v / a)
    return worst


def _deviation_score(problem, xhat, ax, delta):
    worst = _ZERO
    for a, row, d in zip(ax, problem.A, delta):
        dev = abs(_dot(row, xhat) - a)
        if dev == 0:
            continue
        if d == 0:
            return None
        worst = max(worst, dev / d)
    return worst


class OracleFpra(Fpra):
    """Exhaustive rounder over the vertices of the minimal face.

    ``mode`` picks what to minimize: ``"ratio"`` (worst ``A_i x_hat / A_i x``),
    ``"two-sided"`` (the same, among vertices meeting the tight-row lower
    bound for ``alpha``), or ``"additive"`` (worst ``|A_i(x_hat - x)| / delta_i``).
    Ties keep the first vertex in enumeration order. When no promise is
    declared, the achieved value is recorded in ``achieved``.
    """

    def __init__(self, mode: str = "ratio", beta=None, alpha=None, delta=None):
        if mode not in ("ratio", "two-sided", "additive"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "additive" and delta is None:
            raise ValueError("additive mode needs a delta vector")
        self.mode = mode
        self.beta = None if beta is None else Fraction(beta)
        self.alpha = None if alpha is None else Fraction(alpha)
        self.delta = None if delta is None else [Fraction(d) for d in delta]
        self.achieved: Fraction | None = None
        self.candidates = 0

    def round(self, problem, x, rhs):
        ax = problem.activity(x)
        best, best_score = None, None
        self.candidates = 0
        for v in problem.polytope.face_vertices(x):
            self.candidates += 1
            if self.mode == "additive":
                score = _deviation_score(problem, v, ax, self.delta)
            else:
                score = _ratio_score(problem, v, ax)
                if self.mode == "two-sided" and score is not None:
                    if p3_problems(problem, x, v, self.alpha, rhs):
                        score = None
            if score is None:
                if best is None:
                    best = v
                continue
            if best_score is None or score < best_score:
                best, best_score = v, score
        if best is None:
            raise P1Violation("minimal face has no vertex")
        self.achieved = best_score
        return best


def p3_problems(problem, x, xhat, alpha, rhs=None) -> list[dict]:
    """Rows with ``A_i x = alpha b_i`` where ``A_i x_hat < A_i x / alpha``."""
    alpha = Fraction(alpha)
    out = []
    for i, row in enumerate(problem.A):
        ax = _dot(row, x)
        if ax == alpha * problem.b[i] and _dot(row, xhat) < ax / alpha:
            out.append({"row": problem.row_tags[i], "rounded": _dot(row, xhat),
                        "needed": ax / alpha})
    return out


# -- certificates -----------------------------------------------------------

@dataclass
class ReductionCertificate:
    mode: str
    x: dict
    xhat: dict
    y: list
    values: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c["holds"] for c in self.checks.values())

    def check(self, name: str, lhs, rhs, relation: str = "<="):
        holds = {"<=": lhs <= rhs, "==": lhs == rhs, ">=": lhs >= rhs}[relation]
        self.checks[name] = {"lhs": lhs, "rhs": rhs, "relation": relation, "holds": holds}
        return holds

    def check_rows(self, name: str, lhs: Sequence, rhs: Sequence, relation: str = "<="):
        ok = all({"<=": a <= b, ">=": a >= b}[relation] for a, b in zip(lhs, rhs))
        self.checks[name] = {"lhs": list(lhs), "rhs": list(rhs), "relation": relation,
                             "holds": ok}
        return ok

    def raise_failures(self):
        bad = {k: v for k, v in self.checks.items() if not v["holds"]}
        if bad:
            raise CertFailed("certificate check failed: " + ", ".join(bad),
                             failed=jsonify(bad))

    def to_json(self) -> dict:
        return jsonify({"mode": self.mode, "x_star": self.x, "x_hat": self.xhat, "y": self.y,
                        "values": self.values, "checks": self.checks, "ok": self.ok})


def _round_once(problem, fpra, rel):
    xhat = fpra.round(problem, rel.x, rel.rhs)
    xhat = {v: Fraction(xhat.get(v, _ZERO)) for v in problem.polytope.variables}
    if not problem.polytope.on_minimal_face(rel.x, xhat):
        raise P1Violation("rounded point left the minimal face of the relaxation optimum")
    if not problem.polytope.is_vertex(xhat):
        raise P1Violation("rounded point is not a vertex of the polytope")
    return xhat


def _face_identity(problem, cert, rel, xhat, bound_rhs):
    """``c^y x_hat = c^y x* = c x* + y A x* = OPT + y rhs``."""
    cy = problem.perturbed_costs(rel.y)
    a = _dot(cy, xhat)
    b = _dot(cy, rel.x)
    c = problem.cost(rel.x) + sum((yi * ai for yi, ai in zip(rel.y, problem.activity(rel.x))),
                                  _ZERO)
    d = rel.value + sum((yi * r for yi, r in zip(rel.y, bound_rhs)), _ZERO)
    cert.values["perturbed_rounded"] = a
    cert.values["perturbed_relaxed"] = b
    cert.check("face_identity", a, b, "==")
    cert.check("complementary_identity", c, d, "==")
    cert.check("perturbed_expansion", b, c, "==")


def _require(rel: Relaxation, what: str):
    if not rel.feasible:
        raise Infeasible(f"{what} is {rel.solution.status}", status=rel.solution.status)


def reduce_weighted(problem: PackingProblem, lam, fpra: Fpra, strict: bool = True):
    """One relaxation at ``lam b``, one rounding, cost and packing certificate."""
    lam = Fraction(lam)
    if lam <= 1:
        raise ValidationFailed(["lambda must exceed 1"])
    rel = solve_relaxation(problem, lam=lam)
    _require(rel, "the inflated relaxation")
    rel1 = solve_relaxation(problem, lam=1)
    xhat = _round_once(problem, fpra, rel)
    beta = fpra.beta if fpra.beta is not None else getattr(fpra, "achieved", None)
    if beta is None:
        raise CertFailed("rounder declared no multiplicative factor")

    cert = ReductionCertificate("lambda", rel.x, xhat, rel.y)
    cert.values.update(lam=lam, beta=beta, opt_lambda=rel.value,
                       opt1=rel1.value, cost=problem.cost(xhat))
    _face_identity(problem, cert, rel, xhat, rel.rhs)
    ax, axh = problem.activity(rel.x), problem.activity(xhat)
    cert.check_rows("p2", axh, [beta * v for v in ax])
    cert.check_rows("packing", axh, [beta * lam * v for v in problem.b])
    if rel1.feasible:
        yb = sum((yi * bi for yi, bi in zip(rel.y, problem.b)), _ZERO)
        cert.check("dual_mass", yb, (rel1.value - rel.value) / (lam - 1))
        cert.check("cost", problem.cost(xhat), lam / (lam - 1) * rel1.value)
    if strict:
        cert.raise_failures()
    return xhat, cert


def reduce_two_sided(problem: PackingProblem, alpha, beta, fpra: Fpra, strict: bool = True):
    """Relaxation at ``alpha b``; the rounder's lower bound on tight rows pays for the inflation."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha < 1 or beta < 1:
        raise ValidationFailed(["alpha and beta must be at least 1"])
    rel = solve_relaxation(problem, lam=alpha)
    _require(rel, "the inflated relaxation")
    rel1 = rel if alpha == 1 else solve_relaxation(problem, lam=1)
    _require(rel1, "the relaxation")
    xhat = _round_once(problem, fpra, rel)

    bad = p3_problems(problem, rel.x, xhat, alpha)
    if bad:
        raise P3Violation("a tight row dropped too far", rows=jsonify(bad))

    cert = ReductionCertificate("two-sided", rel.x, xhat, rel.y)
    cert.values.update(alpha=alpha, beta=beta, opt_alpha=rel.value, opt1=rel1.value,
                       cost=problem.cost(xhat))
    _face_identity(problem, cert, rel, xhat, rel.rhs)
    ax, axh = problem.activity(rel.x), problem.activity(xhat)
    cert.check_rows("p2", axh, [beta * v for v in ax])
    cert.check_rows("packing", axh, [alpha * beta * v for v in problem.b])
    yb = sum((yi * bi for yi, bi in zip(rel.y, problem.b)), _ZERO)
    # c x_hat <= OPT(alpha) + (alpha - 1) y b, and the dual mass is at most the value gap
    cert.check("cost_via_duals", problem.cost(xhat), rel.value + (alpha - 1) * yb)
    if alpha > 1:
        cert.check("dual_mass", yb, (rel1.value - rel.value) / (alpha - 1))
    cert.check("cost", problem.cost(xhat), rel1.value)
    if strict:
        cert.raise_failures()
    return xhat, cert


def dual_function(problem: PackingProblem, y: Sequence[Fraction], rhs: Sequence[Fraction]):
    """``min over P of c x + y (Ax - rhs)``, attained at a vertex."""
    value, _ = problem.polytope.minimize(problem.perturbed_costs(y))
    return value - sum((yi * r for yi, r in zip(y, rhs)), _ZERO)


def reduce_additive(problem: PackingProblem, delta: Sequence, fpra: Fpra, strict: bool = True):
    """Relaxation at ``b + delta``; a rounder moving each row by at most ``delta``.

    Certifies ``c x_tilde <= OPT(0)`` and ``A x_tilde <= b + 2 delta``.
    """
    delta = [Fraction(d) for d in delta]
    rel0 = solve_relaxation(problem, delta=[_ZERO] * problem.m)
    _require(rel0, "the relaxation")
    rel = solve_relaxation(problem, delta=delta)
    _require(rel, "the relaxed problem")
    xt = _round_once(problem, fpra, rel)

    ax, axt = problem.activity(rel.x), problem.activity(xt)
    moved = [abs(a - b) for a, b in zip(axt, ax)]
    if any(mv > d for mv, d in zip(moved, delta)):
        raise AdditiveViolation("rounding moved a row by more than delta",
                                moved=moved, delta=delta)

    cert = ReductionCertificate("additive", rel.x, xt, rel.y)
    phi = dual_function(problem, rel.y, rel.rhs)
    lagr = problem.cost(rel.x) + sum((yi * (a - r) for yi, a, r in zip(rel.y, ax, rel.rhs)),
                                     _ZERO)
    cert.values.update(delta=delta, opt0=rel0.value, opt_delta=rel.value,
                       dual_function=phi, lagrangian=lagr, cost=problem.cost(xt), moved=moved)
    cert.check("dual_function_equals_lagrangian", phi, lagr, "==")
    cert.check("lagrangian_equals_opt", lagr, rel.value, "==")
    yd = sum((yi * d for yi, d in zip(rel.y, delta)), _ZERO)
    cert.check("dual_mass", yd, rel0.value - rel.value)
    _face_identity(problem, cert, rel, xt, rel.rhs)
    cert.check("cost", problem.cost(xt), rel0.value)
    cert.check_rows("packing", axt, [b + 2 * d for b, d in zip(problem.b, delta)])
    if strict:
        cert.raise_failures()
    return xt, cert


# -- the spanning-tree instance in this framework ---------------------------

class McstFpra(Fpra):
    """Decompose, remove rainbows, pick the best per-piece trees."""

    beta = Fraction(9)

    def __init__(self, instance, budget: int | None = None, jobs: int = 1):
        self.instance = instance
        self.budget = budget
        self.jobs = jobs
        self.achieved = None

    def round(self, problem, x, rhs):
        from .decomposition import laminar_decomposition
        from .instance import FractionalPoint
        from .rainbow import make_rainbow_free
        from .rounding import DEFAULT_BUDGET, face_preserving_round

        g = self.instance.graph
        point = FractionalPoint(x)
        dec = laminar_decomposition(point, g)
        xp, decp = make_rainbow_free(point, dec, self.instance)
        tree = face_preserving_round(xp, decp, self.instance.chain,
                                     budget=self.budget or DEFAULT_BUDGET, jobs=self.jobs)
        return dict(FractionalPoint.from_tree(g, tree.edges).items())


def mcst_problem(instance) -> PackingProblem:
    """Chain-constrained spanning trees as a packing problem (same rows as the chain LP)."""
    from .lp.polytopes import SpanningTreePolytope
    from .lp.spanning import degree_tag

    g, ch = instance.graph, instance.chain
    return PackingProblem(
        SpanningTreePolytope(g),
        [{e: 1 for e in g.cut_edges(s)} for s in ch.sets],
        list(ch.bounds),
        g.costs,
        row_tags=[degree_tag(i) for i in range(len(ch))],
        row_meta=list(range(len(ch))),
        check_bounded=False,
    )


def problem_from_json(raw: Mapping) -> PackingProblem:
    """``{"variables", "rows": [{"coeffs", "sense", "rhs", "tag"}], "A", "b", "c"}``."""
    from .lp.polytopes import ExplicitPolytope
    from .rational import to_fraction

    variables = list(raw["variables"])
    rows = [Row({k: to_fraction(v) for k, v in r["coeffs"].items()}, r.get("sense", "<="),
                to_fraction(r["rhs"]), r.get("tag", f"row[{i}]"))
            for i, r in enumerate(raw.get("rows", []))]
    A = raw["A"]
    if A and isinstance(A[0], list):
        A = [dict(zip(variables, row)) for row in A]
    A = [{k: to_fraction(v) for k, v in row.items()} for row in A]
    c = raw["c"]
    if isinstance(c, list):
        c = dict(zip(variables, c))
    return PackingProblem(ExplicitPolytope(variables, rows), A,
                          [to_fraction(v) for v in raw["b"]],
                          {k: to_fraction(v) for k, v in c.items()})
