"""Face-preserving rounding of rainbow-free decompositions and the end-to-end pipeline.

The rounder picks one spanning tree per piece from the piece's support and
returns the concatenation minimizing the worst ratio between a chain set's
tree crossings and its fractional cut. It searches exhaustively with
branch-and-bound, so it is meant for desk-scale instances.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .decomposition import LaminarDecomposition, laminar_decomposition
from .errors import ContractExceeded, InfeasibleLP, InternalInvariant, SearchBudgetExceeded
from .graphs import spanning_trees
from .instance import Chain, FractionalPoint, Graph, Instance, Tree, cut_value
from .lagrangian import (DualCertificate, extract_duals, perturbed_costs, verify_lemma3,
                         verify_lemma4, verify_lemma6)
from .lp.polytopes import SpanningTreePolytope
from .lp.spanning import solve_chain_lp
from .rainbow import find_rainbows, make_rainbow_free

CONTRACT_FACTOR = 9
DEFAULT_BUDGET = 10**7
_ZERO = Fraction(0)
_INF = math.inf


@dataclass
class _Candidate:
    edges: tuple[int, ...]
    counts: tuple[int, ...]


def _ratio(counts: Sequence[int], denom: Sequence[Fraction]):
    worst = _ZERO
    for c, d in zip(counts, denom):
        if c == 0:
            continue
        if d == 0:
            return _INF
        r = Fraction(c) / d
        if r > worst:
            worst = r
    return worst


def _search(pieces: list[list[_Candidate]], denom: list[Fraction], budget: int,
            first: range | None = None):
    """Exhaustive min-max search; returns (ratio, sorted edge tuple, nodes visited)."""
    k = len(denom)
    best = [None, None]
    visited = 0

    def rec(depth, counts, chosen):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise SearchBudgetExceeded("rounding search exceeded its node budget",
                                       budget=budget)
        ratio = _ratio(counts, denom)
        if best[0] is not None and ratio > best[0]:
            return
        if depth == len(pieces):
            key = tuple(sorted(chosen))
            if best[0] is None or ratio < best[0] or key < best[1]:
                best[0], best[1] = ratio, key
            return
        options = pieces[depth]
        idx = first if depth == 0 and first is not None else range(len(options))
        for j in idx:
            cand = options[j]
            rec(depth + 1, tuple(counts[t] + cand.counts[t] for t in range(k)),
                chosen + list(cand.edges))

    rec(0, (0,) * k, [])
    return best[0], best[1], visited


def _piece_candidates(x: Mapping[str, Fraction], dec: LaminarDecomposition, chain: Chain):
    graph = dec.graph
    out = []
    for L in dec.family:
        piece = dec.pieces[L]
        ends_all = piece.endpoints(graph)
        keep = [i for i, e in enumerate(piece.edges) if x.get(e, _ZERO) > 0]
        ends = [ends_all[i] for i in keep]
        cands = []
        for tree in spanning_trees(len(piece.nodes), ends):
            eids = [piece.edges[keep[i]] for i in tree]
            counts = tuple(sum(1 for eid in eids
                               if (graph.edge(eid).u in s) != (graph.edge(eid).v in s))
                           for s in chain.sets)
            cands.append(_Candidate(tuple(graph.edge_index(e) for e in eids), counts))
        if not cands:
            raise InternalInvariant(f"piece {sorted(L)} has no spanning tree in the support")
        out.append(cands)
    out.sort(key=len)
    return out


def face_preserving_round(x: Mapping[str, Fraction], decomposition: LaminarDecomposition,
                          chain: Chain, budget: int = DEFAULT_BUDGET, jobs: int = 1,
                          check_rainbows: bool = True) -> Tree:
    """Best concatenation of per-piece support trees (rainbow-free input expected)."""
    graph = decomposition.graph
    if check_rainbows and find_rainbows(x, decomposition, chain):
        raise InternalInvariant("decomposition is not rainbow-free")
    pieces = _piece_candidates(x, decomposition, chain)
    denom = [cut_value(x, graph, s) for s in chain.sets]

    if jobs > 1 and pieces and len(pieces[0]) > 1:
        n0 = len(pieces[0])
        step = -(-n0 // jobs)
        ranges = [range(a, min(a + step, n0)) for a in range(0, n0, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_search, [pieces] * len(ranges), [denom] * len(ranges),
                                  [budget] * len(ranges), ranges))
        ratio, key = min(((r, k) for r, k, _ in parts), key=lambda t: (t[0], t[1]))
    else:
        ratio, key, _ = _search(pieces, denom, budget)

    tree = Tree(frozenset(graph.edges[i].id for i in key))
    tree.check(graph)
    for i, s in enumerate(chain.sets):
        crossing = sum(1 for e in graph.cut_edges(s) if e in tree.edges)
        if crossing > CONTRACT_FACTOR * denom[i]:
            raise ContractExceeded(f"chain set {i}: {crossing} > 9 * {denom[i]}",
                                   chain_set=i, crossing=crossing, fractional=denom[i])
    return tree


def is_on_minimal_face(x: Mapping[str, Fraction], tree, graph: Graph) -> bool:
    edges = tree.edges if isinstance(tree, Tree) else frozenset(tree)
    poly = SpanningTreePolytope(graph)
    return poly.on_minimal_face(x, FractionalPoint.from_tree(graph, edges))


@dataclass
class RoundingCertificate:
    instance: Instance
    lam: Fraction
    tree: Tree
    cost: Fraction
    opt1: Fraction | None
    opt_lam: Fraction
    x_star: FractionalPoint
    x_prime: FractionalPoint
    family: tuple
    family_prime: tuple
    duals: DualCertificate
    crossing: list[int]
    fractional_cut: list[Fraction]
    ratios: list
    perturbed_tree_cost: Fraction
    perturbed_lp_cost: Fraction
    lemma5_rhs: Fraction
    flags: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    lp_solutions: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> dict:
        from .serialize import jsonify

        g = self.instance.graph
        return jsonify({
            "lambda": self.lam,
            "tree": self.tree.sorted(g),
            "cost": self.cost,
            "opt1": self.opt1,
            "opt_lambda": self.opt_lam,
            "cost_bound": None if self.opt1 is None else self.lam / (self.lam - 1) * self.opt1,
            "crossing": self.crossing,
            "degree_bound": [CONTRACT_FACTOR * self.lam * b for b in self.instance.chain.bounds],
            "fractional_cut_prime": self.fractional_cut,
            "violation_ratios": ["inf" if r == _INF else r for r in self.ratios],
            "achieved_max_ratio": max((r for r in self.ratios if r != _INF), default=0),
            "perturbed_tree_cost": self.perturbed_tree_cost,
            "perturbed_lp_cost": self.perturbed_lp_cost,
            "lemma5_rhs": self.lemma5_rhs,
            "x_star": dict(self.x_star.items()),
            "x_prime": dict(self.x_prime.items()),
            "family": [list(g.sort_nodes(s)) for s in self.family],
            "family_prime": [list(g.sort_nodes(s)) for s in self.family_prime],
            "duals": self.duals.to_json(g),
            "lp": {k: v.to_json() for k, v in self.lp_solutions.items()},
            "flags": self.flags,
            "reports": self.reports,
            "ok": self.ok,
        })


def mcst_pipeline(instance: Instance, lam=None, budget: int = DEFAULT_BUDGET,
                  jobs: int = 1) -> RoundingCertificate:
    """Solve the inflated LP, decompose, remove rainbows, round, and certify."""
    lam = instance.lam if lam is None else Fraction(lam)
    if lam <= 1:
        raise ValueError("lambda must exceed 1")
    g, chain = instance.graph, instance.chain

    sol, opt_lam = solve_chain_lp(instance, lam)
    if not sol.optimal:
        raise InfeasibleLP("no spanning tree satisfies the inflated degree bounds",
                           status=sol.status)
    sol1, opt1 = solve_chain_lp(instance, 1)
    if not sol1.optimal:
        opt1 = None

    x_star = FractionalPoint(sol.primal)
    dec = laminar_decomposition(x_star, g)
    duals = extract_duals(sol, instance, lam)
    cy = perturbed_costs(g, chain, duals.y)

    reports = {
        "lemma3": verify_lemma3(instance, lam, x_star, duals, opt_lam),
        "lemma4": verify_lemma4(x_star, dec, cy),
    }
    if opt1 is not None:
        reports["lemma6"] = verify_lemma6(opt1, opt_lam, lam, duals.y, chain.bounds)

    rainbows_before = find_rainbows(x_star, dec, chain)
    x_prime, dec_prime = make_rainbow_free(x_star, dec, instance)
    reports["lemma1"] = {
        "rainbows_before": len(rainbows_before),
        "rainbows_after": len(find_rainbows(x_prime, dec_prime, chain)),
        "support_subset": x_prime.support <= x_star.support,
        "family_refined": set(dec.family) <= set(dec_prime.family),
        "cuts_not_increased": all(cut_value(x_prime, g, s) <= cut_value(x_star, g, s)
                                  for s in chain.sets),
    }
    tree = face_preserving_round(x_prime, dec_prime, chain, budget=budget, jobs=jobs)

    cost = sum((g.edge(e).cost for e in tree.edges), _ZERO)
    crossing = [sum(1 for e in g.cut_edges(s) if e in tree.edges) for s in chain.sets]
    frac_cut = [cut_value(x_prime, g, s) for s in chain.sets]
    ratios = [(_INF if d == 0 and c else (Fraction(c) / d if d else _ZERO))
              for c, d in zip(crossing, frac_cut)]
    perturbed_tree = sum((cy[e] for e in tree.edges), _ZERO)
    perturbed_lp = sum((cy[e] * x_star[e] for e in g.edge_ids), _ZERO)
    lemma5_rhs = (sum((g.edge(e).cost * x_star[e] for e in g.edge_ids), _ZERO)
                  + lam * sum((b * duals.y[i] for i, b in enumerate(chain.bounds)), _ZERO))

    tree_point = FractionalPoint.from_tree(g, tree.edges)
    flags = {
        "spanning_tree": g.is_spanning_tree(tree.edges),
        "cost_bound": opt1 is None or cost <= lam / (lam - 1) * opt1,
        "degree_bound": all(c <= CONTRACT_FACTOR * lam * b
                            for c, b in zip(crossing, chain.bounds)),
        "contract": all(c <= CONTRACT_FACTOR * d for c, d in zip(crossing, frac_cut)),
        "lemma5_identity": perturbed_tree == perturbed_lp == lemma5_rhs,
        "cost_below_perturbed": cost <= perturbed_tree,
        "family_tight_at_tree": all(
            sum(tree_point[e] for e in g.induced_edges(L)) == len(L) - 1 for L in dec.family),
        "pieces_spanning": all(
            len([e for e in dec.pieces[L].edges if e in tree.edges])
            == len(dec.pieces[L].nodes) - 1 for L in dec.family),
        "on_minimal_face_prime": is_on_minimal_face(x_prime, tree, g),
        "lemma1": all(v if isinstance(v, bool) else v == 0
                      for k, v in reports["lemma1"].items() if k != "rainbows_before"),
    }
    return RoundingCertificate(
        instance=instance, lam=lam, tree=tree, cost=cost, opt1=opt1, opt_lam=opt_lam,
        x_star=x_star, x_prime=x_prime, family=dec.family, family_prime=dec_prime.family,
        duals=duals, crossing=crossing, fractional_cut=frac_cut, ratios=ratios,
        perturbed_tree_cost=perturbed_tree, perturbed_lp_cost=perturbed_lp,
        lemma5_rhs=lemma5_rhs, flags=flags, reports=reports,
        lp_solutions={"lambda": sol, "one": sol1},
    )
