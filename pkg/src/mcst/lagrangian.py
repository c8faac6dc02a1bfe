"""Perturbed costs, the Lagrangian dual of the inflated LP, and exact lemma checks."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .decomposition import LaminarDecomposition
from .errors import CSViolation, LemmaViolation
from .graphs import graph_arrays, minimum_spanning_tree
from .instance import Chain, Graph, Instance
from .lp.simplex import LPSolution

_ZERO = Fraction(0)


@dataclass(frozen=True)
class DualCertificate:
    """``y`` per chain-set index (>= 0) and ``mu`` per node set (>= 0 except for V)."""

    y: Mapping[int, Fraction]
    mu: Mapping[frozenset, Fraction]
    lam: Fraction

    def to_json(self, graph: Graph) -> dict:
        return {
            "lambda": str(self.lam),
            "y": {str(i): str(v) for i, v in sorted(self.y.items())},
            "mu": {",".join(graph.sort_nodes(s)): str(v) for s, v in self.mu.items() if v},
        }


def perturbed_costs(graph: Graph, chain: Chain, y: Mapping[int, Fraction],
                    costs: Mapping[str, Fraction] | None = None) -> dict[str, Fraction]:
    """``c_e`` plus ``y_S`` for every chain set ``S`` the edge crosses."""
    costs = graph.costs if costs is None else costs
    out = {}
    for e in graph.edges:
        total = Fraction(costs[e.id])
        for i, s in enumerate(chain.sets):
            if (e.u in s) != (e.v in s):
                total += Fraction(y.get(i, _ZERO))
        out[e.id] = total
    return out


def dualized_bound(instance: Instance, lam, y: Mapping[int, Fraction]) -> Fraction:
    return Fraction(lam) * sum((b * Fraction(y.get(i, _ZERO))
                                for i, b in enumerate(instance.chain.bounds)), _ZERO)


def lagrangian_objective(instance: Instance, lam, y, x: Mapping[str, Fraction]) -> Fraction:
    cy = perturbed_costs(instance.graph, instance.chain, y)
    return sum((cy[e] * Fraction(x.get(e, _ZERO)) for e in cy), _ZERO) \
        - dualized_bound(instance, lam, y)


def lagrangian_value(instance: Instance, lam, y: Mapping[int, Fraction]) -> Fraction:
    """Dual function value: minimum spanning tree under perturbed costs, minus the bound term.

    A linear function over the spanning-tree polytope is minimized at a tree.
    """
    g = instance.graph
    cy = perturbed_costs(g, instance.chain, y)
    n, ends = graph_arrays(g)
    w = [cy[e.id] for e in g.edges]
    tree = minimum_spanning_tree(n, ends, w)
    return sum((w[i] for i in tree), _ZERO) - dualized_bound(instance, lam, y)


def extract_duals(solution: LPSolution, instance: Instance, lam) -> DualCertificate:
    """Map LP row duals to ``(mu, y)`` and check complementary slackness exactly."""
    lam = Fraction(lam)
    g = instance.graph
    y = {i: _ZERO for i in range(len(instance.chain))}
    mu: dict[frozenset, Fraction] = {}
    rows_by_set = {}
    for row in solution.system.rows:
        d = solution.dual.get(row.tag, _ZERO)
        if isinstance(row.meta, int):
            y[row.meta] = -d
        elif isinstance(row.meta, frozenset):
            mu[row.meta] = -d
            rows_by_set[row.meta] = row
    x = solution.primal
    full = frozenset(g.nodes)
    problems = []
    for s, m in mu.items():
        if s != full and m < 0:
            problems.append(f"mu of {sorted(s)} negative")
        if m and not rows_by_set[s].is_tight(x):
            problems.append(f"mu of {sorted(s)} positive on a slack set")
    for i, v in y.items():
        if v < 0:
            problems.append(f"y[{i}] negative")
    cy = perturbed_costs(g, instance.chain, y)
    for e in g.edges:
        mu_sum = sum((m for s, m in mu.items() if e.u in s and e.v in s), _ZERO)
        if -mu_sum > cy[e.id]:
            problems.append(f"dual constraint of {e.id} violated")
        if x.get(e.id, _ZERO) > 0 and cy[e.id] != -mu_sum:
            problems.append(f"{e.id} in support but perturbed cost {cy[e.id]} != {-mu_sum}")
    if problems:
        raise CSViolation("complementary slackness failed", problems=problems)
    return DualCertificate(y, mu, lam)


def dual_objective(cert: DualCertificate, instance: Instance) -> Fraction:
    return (-sum(((len(s) - 1) * m for s, m in cert.mu.items()), _ZERO)
            - dualized_bound(instance, cert.lam, cert.y))


def verify_lemma3(instance: Instance, lam, x: Mapping[str, Fraction],
                  cert: DualCertificate, opt: Fraction) -> dict:
    g_val = lagrangian_value(instance, lam, cert.y)
    psi = lagrangian_objective(instance, lam, cert.y, x)
    report = {"g": g_val, "psi": psi, "opt": Fraction(opt), "holds": g_val == psi == opt}
    if not report["holds"]:
        raise LemmaViolation("dual function, Lagrangian objective and LP optimum differ",
                             **report)
    return report


def verify_lemma4(x: Mapping[str, Fraction], decomposition: LaminarDecomposition,
                  perturbed: Mapping[str, Fraction]) -> dict:
    """Every piece's support edges share one perturbed cost."""
    g = decomposition.graph
    values = {}
    bad = []
    for L in decomposition.family:
        support = [e for e in decomposition.pieces[L].edges if x.get(e, _ZERO) > 0]
        seen = {perturbed[e] for e in support}
        if len(seen) > 1:
            bad.append({"piece": list(g.sort_nodes(L)), "edges": support,
                        "values": sorted(seen)})
        if seen:
            values[",".join(g.sort_nodes(L))] = next(iter(seen))
    if bad:
        raise LemmaViolation("perturbed costs differ inside a piece", offending=bad)
    return {"piece_values": values, "holds": True}


def verify_lemma6(opt1: Fraction, opt_lam: Fraction, lam, y: Mapping[int, Fraction],
                  bounds) -> dict:
    lam = Fraction(lam)
    lhs = sum((b * Fraction(y.get(i, _ZERO)) for i, b in enumerate(bounds)), _ZERO)
    rhs = (Fraction(opt1) - Fraction(opt_lam)) / (lam - 1)
    report = {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}
    if not report["holds"]:
        raise LemmaViolation("weighted dual mass exceeds the value gap", **report)
    return report
