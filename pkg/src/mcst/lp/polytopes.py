"""Polytopes given by (possibly exponential) row families, with exact separation.

Each polytope lives in the nonnegative orthant over ``variables``. Rows that
are not in ``base_rows`` are produced on demand by ``separate``; ``tight_rows``
and ``on_minimal_face`` enumerate the whole family, which is only sensible at
desk scale (subset enumeration over at most ``MAX_ENUM_BITS`` items).
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction

import numpy as np

from .. import kernels
from ..errors import TooLarge
from ..graphs import graph_arrays, mask_nodes, minimum_spanning_tree, spanning_trees
from .simplex import ConstraintSystem, Row, solve

MAX_ENUM_BITS = 18
_ZERO = Fraction(0)


def _lex_key(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


class Polytope:
    variables: tuple[str, ...]

    def base_rows(self) -> list[Row]:
        raise NotImplementedError

    def separate(self, x: Mapping[str, Fraction]) -> Row | None:
        return None

    def all_rows(self) -> Iterator[Row]:
        raise NotImplementedError

    def tight_rows(self, x: Mapping[str, Fraction]) -> list[Row]:
        return [r for r in self.all_rows() if r.is_tight(x)]

    def contains(self, x: Mapping[str, Fraction]) -> bool:
        if any(x.get(v, _ZERO) < 0 for v in self.variables):
            return False
        if any(not r.is_satisfied(x) for r in self.base_rows()):
            return False
        return self.separate(x) is None

    def on_minimal_face(self, x: Mapping[str, Fraction], xhat: Mapping[str, Fraction]) -> bool:
        """Every row tight at ``x`` (nonnegativity included) is tight at ``xhat``."""
        if not self.contains(xhat):
            return False
        for v in self.variables:
            if x.get(v, _ZERO) == 0 and xhat.get(v, _ZERO) != 0:
                return False
        return all(r.is_tight(xhat) for r in self.tight_rows(x))

    def minimize(self, weights: Mapping[str, Fraction]) -> tuple[Fraction, dict[str, Fraction]]:
        sol = solve_over(self, weights)
        return sol.value, sol.primal

    def vertices(self) -> Iterator[dict[str, Fraction]]:
        from .vertices import enumerate_vertices

        yield from enumerate_vertices(self.variables, list(self.all_rows()))

    def face_vertices(self, x: Mapping[str, Fraction]) -> Iterator[dict[str, Fraction]]:
        """Vertices on the minimal face containing ``x``, in enumeration order."""
        return (v for v in self.vertices() if self.on_minimal_face(x, v))

    def is_vertex(self, x: Mapping[str, Fraction]) -> bool:
        """Tight rows at ``x`` (nonnegativity included) have full column rank."""
        from .linalg import rank

        if not self.contains(x):
            return False
        mat = [[Fraction(r.coeffs.get(v, 0)) for v in self.variables] for r in self.tight_rows(x)]
        for j, v in enumerate(self.variables):
            if x.get(v, _ZERO) == 0:
                mat.append([Fraction(int(k == j)) for k in range(len(self.variables))])
        return rank(mat) == len(self.variables) if mat else not self.variables


class ExplicitPolytope(Polytope):
    def __init__(self, variables: Sequence[str], rows: Sequence[Row]):
        self.variables = tuple(variables)
        self.rows = tuple(rows)

    def base_rows(self) -> list[Row]:
        return list(self.rows)

    def all_rows(self) -> Iterator[Row]:
        return iter(self.rows)


class _SubsetFamily(Polytope):
    """Rows ``x(F(mask)) <= f(mask)`` over bitmasks of ``n`` items."""

    n: int

    def _check_size(self):
        if self.n > MAX_ENUM_BITS:
            raise TooLarge(f"subset enumeration over {self.n} items exceeds {MAX_ENUM_BITS}")

    def _sums(self, x) -> tuple[np.ndarray, int]:
        raise NotImplementedError

    def _limit(self) -> np.ndarray:
        raise NotImplementedError

    def _row(self, mask: int) -> Row:
        raise NotImplementedError

    def _candidate(self) -> np.ndarray:
        """Masks whose rows are part of the family and not trivially implied."""
        raise NotImplementedError

    def excess(self, x) -> tuple[np.ndarray, int]:
        sums, den = self._sums(x)
        return sums - self._limit() * den, den

    def separate(self, x):
        exc, den = self.excess(x)
        cand = self._candidate()
        exc = np.where(cand, exc, 0)
        top = exc.max()
        if top <= 0:
            return None
        masks = [int(m) for m in np.flatnonzero(exc == top)]
        pc = kernels.popcounts(self.n)
        best = min(masks, key=lambda m: (int(pc[m]), _lex_key(m)))
        return self._row(best)

    def violation(self, x, row: Row) -> Fraction:
        return row.activity(x) - row.rhs

    def tight_masks(self, x) -> list[int]:
        exc, _ = self.excess(x)
        idx = np.flatnonzero(exc == 0)
        return [int(m) for m in idx if m]

    def tight_rows(self, x):
        return [self._row(m) for m in self.tight_masks(x)]

    def all_rows(self):
        for m in range(1, 1 << self.n):
            yield self._row(m)

    def on_minimal_face(self, x, xhat):
        if not self.contains(xhat):
            return False
        for v in self.variables:
            if x.get(v, _ZERO) == 0 and xhat.get(v, _ZERO) != 0:
                return False
        exc, _ = self.excess(xhat)
        return all(exc[m] == 0 for m in self.tight_masks(x))

    def face_vertices(self, x):
        tight = self.tight_masks(x)
        zero = {v for v in self.variables if x.get(v, _ZERO) == 0}
        for v in self.vertices(support=[e for e in self.variables if e not in zero]):
            exc, _ = self.excess(v)
            if all(exc[m] == 0 for m in tight):
                yield v

    def is_vertex(self, x):
        # a 0/1 point of a polytope inside the unit cube is a vertex of the cube
        if all(x.get(v, _ZERO) in (0, 1) for v in self.variables):
            return self.contains(x)
        return super().is_vertex(x)


class SpanningTreePolytope(_SubsetFamily):
    """Convex hull of spanning trees: ``x(E(S)) <= |S|-1``, ``x(E) = |V|-1``."""

    def __init__(self, graph):
        self.graph = graph
        self.variables = graph.edge_ids
        self.n, self.ends = graph_arrays(graph)
        self._check_size()
        self._pc = kernels.popcounts(self.n)

    def set_tag(self, nodes) -> str:
        return "E(" + ",".join(self.graph.sort_nodes(nodes)) + ")"

    def _row(self, mask: int) -> Row:
        nodes = mask_nodes(mask, self.graph.nodes)
        coeffs = {self.graph.edges[i].id: 1 for i, (a, b) in enumerate(self.ends)
                  if mask >> a & 1 and mask >> b & 1}
        full = mask == (1 << self.n) - 1
        return Row(coeffs, "=" if full else "<=", len(nodes) - 1, self.set_tag(nodes), nodes)

    def row_for(self, nodes) -> Row:
        idx = {v: i for i, v in enumerate(self.graph.nodes)}
        return self._row(sum(1 << idx[v] for v in nodes))

    def base_rows(self) -> list[Row]:
        rows = [self._row((1 << self.n) - 1)]
        pairs = set()
        for a, b in self.ends:
            pairs.add((min(a, b), max(a, b)))
        if self.n > 2:
            rows.extend(self._row(1 << a | 1 << b) for a, b in sorted(pairs))
        return rows

    def _sums(self, x):
        ints, den = kernels.scale([Fraction(x.get(e, _ZERO)) for e in self.variables])
        return kernels.induced_sums(self.n, self.ends, ints), den

    def _limit(self):
        return self._pc - 1

    def _candidate(self):
        full = (1 << self.n) - 1
        cand = self._pc >= 2
        cand[full] = False
        return cand

    def tight_sets(self, x) -> list[frozenset]:
        return [mask_nodes(m, self.graph.nodes) for m in self.tight_masks(x)]

    def contains(self, x):
        if any(x.get(v, _ZERO) < 0 for v in self.variables):
            return False
        exc, _ = self.excess(x)
        full = (1 << self.n) - 1
        if exc[full] != 0:
            return False
        return bool((exc[1:full] <= 0).all()) if full > 1 else True

    def minimize(self, weights):
        w = [Fraction(weights.get(e, _ZERO)) for e in self.variables]
        tree = minimum_spanning_tree(self.n, self.ends, w)
        point = {e: _ZERO for e in self.variables}
        for i in tree:
            point[self.variables[i]] = Fraction(1)
        return sum((w[i] for i in tree), _ZERO), point

    def vertices(self, support=None):
        keep = list(range(len(self.variables))) if support is None else [
            i for i, e in enumerate(self.variables) if e in set(support)]
        for tree in spanning_trees(self.n, [self.ends[i] for i in keep]):
            chosen = {keep[i] for i in tree}
            yield {e: Fraction(int(i in chosen)) for i, e in enumerate(self.variables)}


class BasePolytope(_SubsetFamily):
    """Matroid base polytope: ``x(S) <= r(S)``, ``x(U) = r(U)``."""

    def __init__(self, matroid):
        self.matroid = matroid
        self.variables = tuple(matroid.ground)
        self.n = len(self.variables)
        self._check_size()
        self._pc = kernels.popcounts(self.n)
        self._ranks = None

    @property
    def ranks(self) -> np.ndarray:
        if self._ranks is None:
            self._ranks = np.array([self.matroid.rank(mask_nodes(m, self.variables))
                                    for m in range(1 << self.n)], dtype=np.int64)
        return self._ranks

    def set_tag(self, items) -> str:
        order = {e: i for i, e in enumerate(self.variables)}
        return "r(" + ",".join(sorted(items, key=order.__getitem__)) + ")"

    def _row(self, mask: int) -> Row:
        items = mask_nodes(mask, self.variables)
        full = mask == (1 << self.n) - 1
        return Row({e: 1 for e in items}, "=" if full else "<=",
                   int(self.ranks[mask]), self.set_tag(items), items)

    def base_rows(self) -> list[Row]:
        rows = [self._row((1 << self.n) - 1)] if self.n else [
            Row({}, "=", 0, "r()", frozenset())]
        if self.n > 1:
            rows.extend(self._row(1 << i) for i in range(self.n))
        return rows

    def _sums(self, x):
        ints, den = kernels.scale([Fraction(x.get(e, _ZERO)) for e in self.variables])
        return kernels.subset_sums(ints), den

    def _limit(self):
        return self.ranks

    def _candidate(self):
        cand = np.ones(1 << self.n, dtype=bool)
        cand[0] = False
        cand[(1 << self.n) - 1] = False
        return cand

    def contains(self, x):
        if any(x.get(v, _ZERO) < 0 for v in self.variables):
            return False
        exc, _ = self.excess(x)
        full = (1 << self.n) - 1
        if exc[full] != 0:
            return False
        return bool((exc <= 0).all())

    def minimize(self, weights):
        basis = self.matroid.min_weight_basis(weights)
        point = {e: Fraction(int(e in basis)) for e in self.variables}
        return sum((Fraction(weights.get(e, _ZERO)) for e in basis), _ZERO), point

    def vertices(self, support=None):
        allowed = set(self.variables if support is None else support)
        for b in self.matroid.bases():
            if b <= allowed:
                yield {e: Fraction(int(e in b)) for e in self.variables}


def solve_over(polytope: Polytope, objective: Mapping[str, Fraction],
               extra_rows: Sequence[Row] = (), max_bits: int | None = None,
               max_rounds: int | None = None):
    """Cutting-plane loop: solve with known rows, add the most violated row, repeat.

    The returned solution's ``system`` holds exactly the generated rows; any
    row never generated has dual 0.
    """
    base = list(polytope.base_rows()) + list(extra_rows)
    cuts: list[Row] = []
    rounds = 0
    while True:
        system = ConstraintSystem(polytope.variables, tuple(base + cuts), objective)
        sol = solve(system, max_bits=max_bits)
        rounds += 1
        if not sol.optimal:
            sol.rounds = rounds
            return sol
        row = polytope.separate(sol.primal)
        if row is None:
            sol.rounds = rounds
            return sol
        if any(r.tag == row.tag for r in cuts):
            raise RuntimeError(f"separation repeated row {row.tag}")
        cuts.append(row)
        if max_rounds is not None and rounds >= max_rounds:
            raise RuntimeError("cutting-plane round limit reached")


def materialized_system(polytope: Polytope, objective, extra_rows: Sequence[Row] = ()):
    """The same LP with every family row written out (desk scale only)."""
    seen = set()
    rows = []
    for r in itertools.chain(polytope.base_rows(), polytope.all_rows(), extra_rows):
        if r.tag in seen or not r.coeffs and r.sense == "<=" and r.rhs >= 0:
            continue
        seen.add(r.tag)
        rows.append(r)
    return ConstraintSystem(polytope.variables, tuple(rows), objective)


__all__ = [
    "BasePolytope",
    "ExplicitPolytope",
    "Polytope",
    "SpanningTreePolytope",
    "materialized_system",
    "solve",
    "solve_over",
]
