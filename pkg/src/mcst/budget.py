"""Bases of a matroid under several length budgets.

One budget is treated as the objective. ``budgeted_additive_solve`` runs the
additive reduction with a rounder that picks, among the bases on the minimal
face of the LP optimum, the one deviating least from it on every budget row.
``kbudget_solve`` guesses the heavy elements of a solution, contracts them,
and calls the additive solver on what is left.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractExceeded, Infeasible, ValidationFailed
from .instance import Graph
from .lp.polytopes import BasePolytope
from .matroid import (GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid,
                      matroid_from_json)
from .rational import fraction_to_json, sqrt_upper, to_fraction
from .reduction import OracleFpra, PackingProblem, reduce_additive, solve_relaxation

log = logging.getLogger(__name__)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class BudgetedInstance:
    """``d[i][e]`` lengths and budgets ``B[i]``; ``objective`` is a 0-based index into them."""

    matroid: Matroid
    d: tuple
    B: tuple
    objective: int

    def __post_init__(self):
        d = tuple({e: Fraction(row.get(e, 0)) for e in self.matroid.ground} for row in self.d)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "B", tuple(Fraction(b) for b in self.B))
        problems = []
        if not d:
            problems.append("need at least one budget")
        if len(d) != len(self.B):
            problems.append("one budget per length function")
        if not 0 <= self.objective < len(d):
            problems.append("objective index out of range")
        if any(v < 0 for row in d for v in row.values()):
            problems.append("lengths must be nonnegative")
        if any(b < 0 for b in self.B):
            problems.append("budgets must be nonnegative")
        if problems:
            raise ValidationFailed(problems)

    @property
    def k(self) -> int:
        return len(self.d)

    @property
    def packing(self) -> list[int]:
        return [i for i in range(self.k) if i != self.objective]

    def lengths(self, items) -> list[Fraction]:
        return [sum((row[e] for e in items), _ZERO) for row in self.d]

    def within(self, items, epsilon=0) -> bool:
        """Objective budget exact, the others relaxed by ``1 + epsilon``."""
        ls = self.lengths(items)
        return all(ls[i] <= (self.B[i] if i == self.objective else (1 + Fraction(epsilon))
                             * self.B[i]) for i in range(self.k))

    def restrict(self, matroid: Matroid, budgets: Sequence[Fraction]) -> BudgetedInstance:
        return BudgetedInstance(matroid, tuple({e: row[e] for e in matroid.ground}
                                               for row in self.d), tuple(budgets), self.objective)

    def to_json(self) -> dict:
        return {"matroid": self.matroid.to_json(),
                "d": [[fraction_to_json(row[e]) for e in self.matroid.ground] for row in self.d],
                "B": [fraction_to_json(b) for b in self.B],
                "objective_index": self.objective + 1}


def budgeted_from_json(raw: Mapping) -> BudgetedInstance:
    m = matroid_from_json(raw["matroid"])
    d = []
    for row in raw["d"]:
        if isinstance(row, Mapping):
            d.append({k: to_fraction(v) for k, v in row.items()})
        else:
            if len(row) != len(m.ground):
                raise ValidationFailed(["length vector size differs from the ground set"])
            d.append({e: to_fraction(v) for e, v in zip(m.ground, row)})
    k = int(raw.get("objective_index", len(d)))
    return BudgetedInstance(m, tuple(d), tuple(to_fraction(b) for b in raw["B"]), k - 1)


def delta_vector(inst: BudgetedInstance) -> list[Fraction]:
    """Largest single length per packing budget."""
    return [max(inst.d[i].values(), default=_ZERO) for i in inst.packing]


def to_problem(inst: BudgetedInstance) -> PackingProblem:
    return PackingProblem(BasePolytope(inst.matroid), [inst.d[i] for i in inst.packing],
                          [inst.B[i] for i in inst.packing], inst.d[inst.objective],
                          row_tags=[f"budget[{i + 1}]" for i in inst.packing],
                          check_bounded=False)


def basis_lp(inst: BudgetedInstance):
    """Relaxation over the base polytope; raises ``Infeasible`` when empty."""
    rel = solve_relaxation(to_problem(inst), delta=[_ZERO] * (inst.k - 1))
    if not rel.feasible:
        raise Infeasible("base polytope has no point within the budgets")
    return rel


class BnFpra(OracleFpra):
    """Least-deviation basis on the minimal face, held to ``nu * sqrt(k) * Delta``."""

    def __init__(self, inst: BudgetedInstance, nu=1):
        self.inst = inst
        self.nu = Fraction(nu)
        self.root_k = sqrt_upper(inst.k)
        base = delta_vector(inst)
        super().__init__("additive", delta=[self.nu * self.root_k * d for d in base])
        self.base_delta = base
        self.deviation: list[Fraction] | None = None

    def round(self, problem, x, rhs):
        xhat = super().round(problem, x, rhs)
        ax, axh = problem.activity(x), problem.activity(xhat)
        self.deviation = [abs(a - b) for a, b in zip(axh, ax)]
        if any(dev > lim for dev, lim in zip(self.deviation, self.delta)):
            raise ContractExceeded("least-deviation basis exceeds nu*sqrt(k)*Delta",
                                   deviation=self.deviation, limit=self.delta)
        return xhat


def bn_round(x: Mapping[str, Fraction], inst: BudgetedInstance, nu=1):
    """Returns ``(basis, deviation vector)`` for a point of the base polytope."""
    fpra = BnFpra(inst, nu)
    problem = to_problem(inst)
    xhat = fpra.round(problem, x, problem.b)
    return frozenset(e for e, v in xhat.items() if v), fpra.deviation


@dataclass
class BudgetResult:
    status: str
    basis: frozenset | None = None
    lengths: list | None = None
    certificate: object = None
    reason: str = ""
    log: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_json(self, matroid: Matroid | None = None) -> dict:
        from .serialize import jsonify

        out = {"status": self.status, "reason": self.reason}
        if self.basis is not None:
            out["basis"] = matroid.sort(self.basis) if matroid else sorted(self.basis)
            out["lengths"] = jsonify(self.lengths)
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.log:
            out["log"] = jsonify(self.log)
        return out


def budgeted_additive_solve(inst: BudgetedInstance, nu=1) -> BudgetResult:
    """Objective budget met exactly; budget ``i`` exceeded by at most ``2 nu sqrt(k) Delta_i``."""
    problem = to_problem(inst)
    rel0 = solve_relaxation(problem, delta=[_ZERO] * problem.m)
    if not rel0.feasible:
        return BudgetResult("infeasible", reason="relaxation is infeasible")
    if rel0.value > inst.B[inst.objective]:
        return BudgetResult("infeasible", reason="relaxation optimum exceeds the objective budget")
    fpra = BnFpra(inst, nu)
    xt, cert = reduce_additive(problem, fpra.delta, fpra)
    basis = frozenset(e for e, v in xt.items() if v)
    cert.values["bn_deviation"] = fpra.deviation
    return BudgetResult("feasible", basis, inst.lengths(basis), cert)


def heavy_elements(inst: BudgetedInstance, epsilon, nu=1) -> frozenset:
    """Elements above ``epsilon / (2 nu sqrt(k)) * B_i`` for some budget (sqrt rounded up)."""
    scale = Fraction(epsilon) / (2 * Fraction(nu) * sqrt_upper(inst.k))
    return frozenset(e for e in inst.matroid.ground
                     if any(row[e] > scale * b for row, b in zip(inst.d, inst.B)))


def heavy_cap(k: int, epsilon, nu=1) -> int:
    return math.floor(2 * Fraction(nu) * k * sqrt_upper(k) / Fraction(epsilon))


def _guesses(inst: BudgetedInstance, heavy, cap):
    ordered = inst.matroid.sort(heavy)
    for size in range(min(cap, len(ordered)) + 1):
        yield from itertools.combinations(ordered, size)


def _try_guess(inst: BudgetedInstance, guess, heavy, epsilon, nu):
    m = inst.matroid
    guess = frozenset(guess)
    if not m.is_independent(guess):
        return None, "guess is dependent"
    residual = [b - l for b, l in zip(inst.B, inst.lengths(guess))]
    if any(r < 0 for r in residual):
        return None, "guess exceeds a budget"
    minor = m.minor(contract=guess, delete=heavy - guess)
    sub = inst.restrict(minor, residual)
    res = budgeted_additive_solve(sub, nu)
    if not res.feasible:
        return None, res.reason
    basis = res.basis | guess
    if not m.is_basis(basis):
        return None, "extension is not a basis"
    if not inst.within(basis, epsilon):
        return None, "extension misses the relaxed budgets"
    return BudgetResult("feasible", basis, inst.lengths(basis), res.certificate), "ok"


def _try_many(inst, guesses, heavy, epsilon, nu):
    out = []
    for g in guesses:
        res, why = _try_guess(inst, g, heavy, epsilon, nu)
        out.append((g, res, why))
        if res is not None:
            break
    return out


def kbudget_solve(inst: BudgetedInstance, epsilon, nu=1, jobs: int = 1) -> BudgetResult:
    """First guess (by size, then ground order) whose extension passes every budget check."""
    epsilon, nu = Fraction(epsilon), Fraction(nu)
    if epsilon <= 0 or nu <= 0:
        raise ValidationFailed(["epsilon and nu must be positive"])
    heavy = heavy_elements(inst, epsilon, nu)
    guesses = list(_guesses(inst, heavy, heavy_cap(inst.k, epsilon, nu)))
    trail = []
    if jobs > 1 and len(guesses) > 1:
        step = max(1, -(-len(guesses) // (4 * jobs)))
        chunks = [guesses[i:i + step] for i in range(0, len(guesses), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_try_many, inst, c, heavy, epsilon, nu) for c in chunks]
            for fut in futures:
                part = fut.result()
                trail.extend(part)
                if part and part[-1][1] is not None:
                    for f in futures:
                        f.cancel()
                    break
    else:
        trail = _try_many(inst, guesses, heavy, epsilon, nu)

    entries = [{"guess": inst.matroid.sort(g), "outcome": why} for g, _, why in trail]
    for g, _, why in trail:
        if why != "ok":
            log.debug("skipped guess %s: %s", sorted(g), why)
    if trail and trail[-1][1] is not None:
        res = trail[-1][1]
        if not (inst.matroid.is_basis(res.basis) and inst.within(res.basis, epsilon)):
            raise RuntimeError("returned basis failed re-verification")
        res.log = entries
        return res
    return BudgetResult("infeasible", reason="no guess extends to a basis within the budgets",
                        log=entries)


# -- fixtures and random instances ------------------------------------------

def m1(B1=2, B2=6) -> BudgetedInstance:
    g = Graph.from_tuples(["v1", "v2", "v3"],
                          [("e12", "v1", "v2", 0), ("e13", "v1", "v3", 0), ("e23", "v2", "v3", 0)])
    d1 = {"e12": 3, "e13": 1, "e23": 1}
    d2 = {"e12": 1, "e13": 2, "e23": 4}
    return BudgetedInstance(GraphicMatroid(g), (d1, d2), (B1, B2), 1)


def gen_matroid_instance(seed: int, n: int = 8, k: int = 2, max_len: int = 10,
                         tight: float = 0.3) -> BudgetedInstance:
    """Random graphic, uniform or partition matroid with ``k`` random length functions.

    Budgets come from a random basis plus slack, except that with probability
    ``tight`` they are shrunk, which often makes the instance infeasible.
    """
    if n > 10:
        raise ValidationFailed(["random matroid instances are limited to 10 elements"])
    rng = random.Random(seed)
    kind = rng.choice(["graphic", "uniform", "partition"])
    if kind == "graphic":
        n_nodes = rng.randint(3, min(6, n))
        nodes = [f"v{i + 1}" for i in range(n_nodes)]
        pairs = [(nodes[i], nodes[rng.randrange(i)]) for i in range(1, n_nodes)]
        others = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]
                  if (b, a) not in pairs and (a, b) not in pairs]
        rng.shuffle(others)
        pairs += others[:max(0, n - len(pairs))]
        edges = [(f"e{a[1:]}_{b[1:]}", a, b, 0) for a, b in pairs]
        matroid: Matroid = GraphicMatroid(Graph.from_tuples(nodes, edges))
    elif kind == "uniform":
        matroid = UniformMatroid(n, rng.randint(1, n - 1))
    else:
        ground = [f"p{i + 1}" for i in range(n)]
        cuts = sorted(rng.sample(range(1, n), rng.randint(1, min(3, n - 1))))
        blocks = [ground[a:b] for a, b in zip([0] + cuts, cuts + [n])]
        matroid = PartitionMatroid(blocks, [rng.randint(1, len(b)) for b in blocks])

    def length():
        v = Fraction(rng.randint(0, max_len))
        return v + Fraction(1, 2) if rng.random() < 0.2 else v

    d = tuple({e: length() for e in matroid.ground} for _ in range(k))
    bases = list(matroid.bases())
    planted = bases[rng.randrange(len(bases))]
    B = []
    for row in d:
        base = sum((row[e] for e in planted), _ZERO)
        if rng.random() < tight:
            B.append(Fraction(math.floor(base * Fraction(rng.randint(3, 9), 10))))
        else:
            B.append(base + rng.randint(0, 3))
    return BudgetedInstance(matroid, d, tuple(B), k - 1)
