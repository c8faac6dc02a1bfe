"""Re-check a pipeline certificate using only its JSON and the instance JSON."""

from __future__ import annotations

import re
from collections.abc import Mapping
from fractions import Fraction

from .decomposition import build_pieces, is_laminar
from .instance import Instance, cut_value
from .lagrangian import lagrangian_value, perturbed_costs
from .lp.polytopes import SpanningTreePolytope
from .rainbow import find_rainbows
from .decomposition import LaminarDecomposition
from .rational import to_fraction

_ZERO = Fraction(0)
_SET_TAG = re.compile(r"^E\((.*)\)$")
_DEG_TAG = re.compile(r"^deg\[(\d+)\]$")


def _point(raw: Mapping, graph) -> dict[str, Fraction]:
    return {e: to_fraction(raw.get(e, 0)) for e in graph.edge_ids}


def lp_certificate_problems(instance: Instance, lam: Fraction, lp: Mapping) -> list[str]:
    """Primal feasibility in the full LP plus a feasible dual of equal value."""
    g, chain = instance.graph, instance.chain
    out = []
    if lp.get("status") != "optimal":
        return [f"LP status is {lp.get('status')}"]
    x = _point(lp["primal"], g)
    value = to_fraction(lp["value"])
    poly = SpanningTreePolytope(g)
    if not poly.contains(x):
        out.append("primal is not a fractional spanning tree")
    for i, (s, b) in enumerate(zip(chain.sets, chain.bounds)):
        if cut_value(x, g, s) > lam * b:
            out.append(f"primal violates degree bound {i}")
    if sum((g.edge(e).cost * x[e] for e in g.edge_ids), _ZERO) != value:
        out.append("primal cost differs from the stated value")

    full = frozenset(g.nodes)
    reduced = dict(g.costs)
    dual_value = _ZERO
    for tag, raw in lp["dual"].items():
        y = to_fraction(raw)
        if not y:
            continue
        m = _SET_TAG.match(tag)
        d = _DEG_TAG.match(tag)
        if m:
            nodes = frozenset(m.group(1).split(","))
            if nodes != full and y > 0:
                out.append(f"dual of {tag} has the wrong sign")
            for e in g.induced_edges(nodes):
                reduced[e] -= y
            dual_value += y * (len(nodes) - 1)
        elif d:
            i = int(d.group(1))
            if y > 0:
                out.append(f"dual of {tag} has the wrong sign")
            for e in g.cut_edges(chain.sets[i]):
                reduced[e] -= y
            dual_value += y * lam * chain.bounds[i]
        else:
            out.append(f"unrecognized row tag {tag}")
    if any(v < 0 for v in reduced.values()):
        out.append("dual is infeasible (negative reduced cost)")
    if dual_value != value:
        out.append(f"dual value {dual_value} differs from primal value {value}")
    return out


def verify_pipeline_certificate(instance: Instance, cert: Mapping) -> dict:
    """Returns ``{"ok": bool, "checks": {name: bool}, "problems": [...]}``."""
    g, chain = instance.graph, instance.chain
    lam = to_fraction(cert["lambda"])
    checks: dict[str, bool] = {}
    problems: list[str] = []

    lp_lam = lp_certificate_problems(instance, lam, cert["lp"]["lambda"])
    problems += [f"LP(lambda): {p}" for p in lp_lam]
    checks["lp_lambda_optimal"] = not lp_lam
    opt_lam = to_fraction(cert["opt_lambda"])
    checks["opt_lambda_matches"] = to_fraction(cert["lp"]["lambda"]["value"]) == opt_lam

    opt1 = None
    if cert.get("opt1") is not None:
        lp1 = lp_certificate_problems(instance, Fraction(1), cert["lp"]["one"])
        problems += [f"LP(1): {p}" for p in lp1]
        checks["lp_one_optimal"] = not lp1
        opt1 = to_fraction(cert["opt1"])

    tree = frozenset(cert["tree"])
    checks["spanning_tree"] = g.is_spanning_tree(tree)
    cost = sum((g.edge(e).cost for e in tree), _ZERO)
    checks["cost_matches"] = cost == to_fraction(cert["cost"])
    crossing = [len(tree & set(g.cut_edges(s))) for s in chain.sets]
    checks["crossing_matches"] = crossing == list(cert["crossing"])
    checks["degree_bound"] = all(c <= 9 * lam * b for c, b in zip(crossing, chain.bounds))
    if opt1 is not None:
        checks["cost_bound"] = cost <= lam / (lam - 1) * opt1

    x_star = _point(cert["x_star"], g)
    x_prime = _point(cert["x_prime"], g)
    checks["x_star_is_lp_primal"] = x_star == _point(cert["lp"]["lambda"]["primal"], g)
    y = {int(i): to_fraction(v) for i, v in cert["duals"]["y"].items()}
    checks["y_nonnegative"] = all(v >= 0 for v in y.values())
    cy = perturbed_costs(g, chain, y)
    bound_term = lam * sum((b * y.get(i, _ZERO) for i, b in enumerate(chain.bounds)), _ZERO)
    psi = sum((cy[e] * x_star[e] for e in g.edge_ids), _ZERO) - bound_term
    checks["lemma3"] = lagrangian_value(instance, lam, y) == psi == opt_lam
    if opt1 is not None:
        checks["lemma6"] = bound_term / lam <= (opt1 - opt_lam) / (lam - 1)

    family = [frozenset(s) for s in cert["family"]]
    family_prime = [frozenset(s) for s in cert["family_prime"]]
    poly = SpanningTreePolytope(g)
    tight = set(poly.tight_sets(x_star)) if poly.contains(x_star) else set()
    checks["family_tight_laminar"] = set(family) <= tight and is_laminar(family)
    pieces = build_pieces(g, family)
    lemma4 = True
    for L, piece in pieces.items():
        values = {cy[e] for e in piece.edges if x_star[e] > 0}
        lemma4 &= len(values) <= 1
    checks["lemma4"] = lemma4
    tree_cy = sum((cy[e] for e in tree), _ZERO)
    lp_cy = sum((cy[e] * x_star[e] for e in g.edge_ids), _ZERO)
    lp_c = sum((g.edge(e).cost * x_star[e] for e in g.edge_ids), _ZERO)
    checks["lemma5_identity"] = tree_cy == lp_cy == lp_c + bound_term
    checks["cost_below_perturbed"] = cost <= tree_cy
    checks["family_tight_at_tree"] = all(len(tree & set(g.induced_edges(L))) == len(L) - 1
                                         for L in family)

    checks["x_prime_in_polytope"] = poly.contains(x_prime)
    checks["lemma1_support"] = all(x_star[e] > 0 for e in g.edge_ids if x_prime[e] > 0)
    checks["lemma1_family"] = set(family) <= set(family_prime)
    checks["lemma1_cuts"] = all(cut_value(x_prime, g, s) <= cut_value(x_star, g, s)
                                for s in chain.sets)
    if checks["x_prime_in_polytope"]:
        tight_p = set(poly.tight_sets(x_prime))
        ok_family = set(family_prime) <= tight_p and is_laminar(family_prime)
        checks["family_prime_tight_laminar"] = ok_family
        dec = LaminarDecomposition(g, x_prime, tuple(family_prime), build_pieces(g, family_prime))
        checks["rainbow_free"] = ok_family and not find_rainbows(x_prime, dec, chain)
        tree_point = {e: Fraction(int(e in tree)) for e in g.edge_ids}
        checks["on_minimal_face_prime"] = poly.on_minimal_face(x_prime, tree_point)
    frac = [cut_value(x_prime, g, s) for s in chain.sets]
    checks["contract"] = all(c <= 9 * f for c, f in zip(crossing, frac))

    failed = [k for k, v in checks.items() if not v]
    problems += [f"check failed: {k}" for k in failed]
    return {"ok": not problems, "checks": checks, "problems": problems}
