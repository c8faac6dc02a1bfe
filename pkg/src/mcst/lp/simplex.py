"""Exact rational two-phase simplex with Bland's rule and dual certificates.

All variables are nonnegative. The problem is always a minimization. Row
duals follow the convention ``reduced_cost_j = c_j - sum_i dual_i * a_ij >= 0``,
so ``<=`` rows carry nonpositive duals, ``>=`` rows nonnegative ones and
equality rows are free; strong duality reads ``c.x == sum_i dual_i * rhs_i``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InternalInvariant, NumericOverflow, ValidationFailed
from ..rational import fraction_to_json

SENSES = ("<=", "=", ">=")
OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"
_ZERO = Fraction(0)


@dataclass(frozen=True)
class Row:
    coeffs: Mapping[str, Fraction]
    sense: str
    rhs: Fraction
    tag: str
    meta: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"bad sense {self.sense!r}")
        object.__setattr__(self, "coeffs",
                           {k: Fraction(v) for k, v in self.coeffs.items() if v != 0})
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def activity(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((a * x.get(k, _ZERO) for k, a in self.coeffs.items()), _ZERO)

    def is_tight(self, x: Mapping[str, Fraction]) -> bool:
        return self.activity(x) == self.rhs

    def is_satisfied(self, x: Mapping[str, Fraction]) -> bool:
        act = self.activity(x)
        if self.sense == "<=":
            return act <= self.rhs
        if self.sense == ">=":
            return act >= self.rhs
        return act == self.rhs


@dataclass(frozen=True)
class ConstraintSystem:
    """``minimize objective.x`` subject to ``rows`` and ``x >= 0``."""

    variables: tuple[str, ...]
    rows: tuple[Row, ...]
    objective: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "objective", {k: Fraction(v) for k, v in self.objective.items()})
        problems = []
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            problems.append("duplicate variable identifiers")
        tags = [r.tag for r in self.rows]
        if len(set(tags)) != len(tags):
            problems.append("row tags are not unique")
        for r in self.rows:
            unknown = set(r.coeffs) - declared
            if unknown:
                problems.append(f"row {r.tag} references undeclared {sorted(unknown)}")
        if set(self.objective) - declared:
            problems.append("objective references undeclared variables")
        if problems:
            raise ValidationFailed(problems)

    def with_rows(self, rows: Iterable[Row]) -> ConstraintSystem:
        return ConstraintSystem(self.variables, tuple(rows), self.objective)

    def objective_value(self, x: Mapping[str, Fraction]) -> Fraction:
        return sum((c * x.get(k, _ZERO) for k, c in self.objective.items()), _ZERO)


@dataclass
class LPSolution:
    status: str
    primal: dict[str, Fraction] = field(default_factory=dict)
    dual: dict[str, Fraction] = field(default_factory=dict)
    value: Fraction | None = None
    is_vertex: bool = False
    rounds: int = 0
    system: ConstraintSystem | None = field(default=None, repr=False, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def reduced_costs(self) -> dict[str, Fraction]:
        sys = self.system
        red = {v: sys.objective.get(v, _ZERO) for v in sys.variables}
        for r in sys.rows:
            y = self.dual.get(r.tag, _ZERO)
            if y:
                for k, a in r.coeffs.items():
                    red[k] -= y * a
        return red

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "value": None if self.value is None else fraction_to_json(self.value),
            "primal": {k: fraction_to_json(v) for k, v in self.primal.items()},
            "dual": {k: fraction_to_json(v) for k, v in self.dual.items()},
        }


class _Tableau:
    """Sparse dict-of-rows tableau; column order fixes Bland's tie-breaking."""

    def __init__(self, rows, rhs, basis, ncols, max_bits):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.max_bits = max_bits
        self.d: dict[int, Fraction] = {}
        self.z = _ZERO

    def set_costs(self, cost: Mapping[int, Fraction]):
        d = {j: c for j, c in cost.items() if c}
        z = _ZERO
        for i, bcol in enumerate(self.basis):
            cb = cost.get(bcol, _ZERO)
            if cb:
                z += cb * self.rhs[i]
                for j, a in self.rows[i].items():
                    nv = d.get(j, _ZERO) - cb * a
                    if nv:
                        d[j] = nv
                    else:
                        d.pop(j, None)
        self.d, self.z = d, z

    def pivot(self, r: int, col: int):
        prow = self.rows[r]
        piv = prow[col]
        if piv != 1:
            prow = {j: a / piv for j, a in prow.items()}
            self.rows[r] = prow
            self.rhs[r] /= piv
        brow = self.rhs[r]
        if self.max_bits is not None:
            for a in (*prow.values(), brow):
                if max(a.numerator.bit_length(), a.denominator.bit_length()) > self.max_bits:
                    raise NumericOverflow("rational magnitude exceeds configured limit")
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(col)
            if f is None:
                continue
            for j, a in prow.items():
                nv = row.get(j, _ZERO) - f * a
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            self.rhs[i] -= f * brow
        f = self.d.get(col)
        if f is not None:
            for j, a in prow.items():
                nv = self.d.get(j, _ZERO) - f * a
                if nv:
                    self.d[j] = nv
                else:
                    self.d.pop(j, None)
            self.z += f * brow
        self.basis[r] = col

    def run(self, barred: set[int]) -> str:
        while True:
            entering = min((j for j, v in self.d.items() if v < 0 and j not in barred),
                           default=None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is None or a <= 0:
                    continue
                key = (self.rhs[i] / a, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def solve(system: ConstraintSystem, max_bits: int | None = None) -> LPSolution:
    """Solve exactly; the optimum returned is a basic (vertex) solution."""
    var_index = {v: j for j, v in enumerate(system.variables)}
    n = len(system.variables)
    m = len(system.rows)

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    flipped: list[bool] = []
    senses: list[str] = []
    for r in system.rows:
        coeffs = {var_index[k]: a for k, a in r.coeffs.items()}
        b, sense, flip = r.rhs, r.sense, False
        if b < 0:
            coeffs = {j: -a for j, a in coeffs.items()}
            b, flip = -b, True
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
        rows.append(coeffs)
        rhs.append(b)
        flipped.append(flip)
        senses.append(sense)

    col = n
    basis = [0] * m
    ident = [0] * m
    for i, s in enumerate(senses):
        if s == "<=":
            rows[i][col] = Fraction(1)
            basis[i] = ident[i] = col
            col += 1
        elif s == ">=":
            rows[i][col] = Fraction(-1)
            col += 1
    artificial = set()
    for i, s in enumerate(senses):
        if s != "<=":
            rows[i][col] = Fraction(1)
            basis[i] = ident[i] = col
            artificial.add(col)
            col += 1

    tab = _Tableau(rows, rhs, basis, col, max_bits)
    if artificial:
        tab.set_costs({j: Fraction(1) for j in artificial})
        tab.run(barred=set())
        if tab.z > 0:
            return LPSolution(INFEASIBLE, system=system)
        for i in range(m):
            if tab.basis[i] in artificial:
                repl = min((j for j in tab.rows[i] if j not in artificial), default=None)
                if repl is not None:
                    tab.pivot(i, repl)

    cost = {var_index[k]: c for k, c in system.objective.items() if c}
    tab.set_costs(cost)
    status = tab.run(barred=artificial)
    if status != OPTIMAL:
        return LPSolution(status, system=system)

    primal = {v: _ZERO for v in system.variables}
    for i, bcol in enumerate(tab.basis):
        if bcol < n:
            primal[system.variables[bcol]] = tab.rhs[i]
    dual = {}
    for i, r in enumerate(system.rows):
        y = -tab.d.get(ident[i], _ZERO)
        dual[r.tag] = -y if flipped[i] else y
    sol = LPSolution(OPTIMAL, primal, dual, system.objective_value(primal), True, system=system)
    problems = certificate_problems(sol)
    if problems:
        raise InternalInvariant("simplex certificate failed", problems=problems)
    return sol


def certificate_problems(sol: LPSolution) -> list[str]:
    """Exact primal/dual feasibility, strong duality and complementary slackness."""
    sys, x, y = sol.system, sol.primal, sol.dual
    out = []
    for v in sys.variables:
        if x.get(v, _ZERO) < 0:
            out.append(f"x[{v}] negative")
    for r in sys.rows:
        if not r.is_satisfied(x):
            out.append(f"row {r.tag} violated")
        yr = y.get(r.tag, _ZERO)
        if (r.sense == "<=" and yr > 0) or (r.sense == ">=" and yr < 0):
            out.append(f"dual of {r.tag} has wrong sign")
        if yr and not r.is_tight(x):
            out.append(f"row {r.tag} slack but dual nonzero")
    red = sol.reduced_costs()
    for v, d in red.items():
        if d < 0:
            out.append(f"reduced cost of {v} negative")
        if x.get(v, _ZERO) > 0 and d != 0:
            out.append(f"x[{v}] positive with nonzero reduced cost")
    dual_value = sum((y.get(r.tag, _ZERO) * r.rhs for r in sys.rows), _ZERO)
    if dual_value != sol.value:
        out.append(f"strong duality gap {sol.value} vs {dual_value}")
    return out
