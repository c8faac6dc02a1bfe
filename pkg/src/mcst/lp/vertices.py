"""Brute-force vertex enumeration by active-constraint subsets (tiny systems only)."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from fractions import Fraction

from ..errors import TooLarge
from .linalg import solve_square
from .simplex import Row

MAX_COMBINATIONS = 2_000_000


def enumerate_vertices(variables: Sequence[str], rows: Sequence[Row]) -> Iterator[dict]:
    """Yield each vertex of ``{x >= 0} ∩ rows`` once, in first-found order."""
    n = len(variables)
    eq = [r for r in rows if r.sense == "="]
    ineq = [r for r in rows if r.sense != "="]
    # nonnegativity rows as (coefficient map, rhs)
    candidates = [(r.coeffs, r.rhs) for r in ineq]
    candidates += [({v: Fraction(1)}, Fraction(0)) for v in variables]
    fixed = [(r.coeffs, r.rhs) for r in eq]
    free = n - len(fixed)
    if n == 0:
        if all(r.is_satisfied({}) for r in rows):
            yield {}
        return
    if free < 0:
        free = 0
    total = 1
    for k in range(free):
        total = total * (len(candidates) - k) // (k + 1)
    if total > MAX_COMBINATIONS:
        raise TooLarge("too many active-set combinations")
    seen = set()
    for extra in itertools.combinations(range(len(candidates)), free):
        active = fixed + [candidates[i] for i in extra]
        # pick n independent rows from the active set
        if len(active) != n:
            # more equalities than variables: try every n-subset of them
            choices = itertools.combinations(range(len(active)), n)
        else:
            choices = [tuple(range(n))]
        for pick in choices:
            mat = [[coeffs.get(v, Fraction(0)) for v in variables] for coeffs, _ in
                   (active[i] for i in pick)]
            z = solve_square(mat, [active[i][1] for i in pick])
            if z is None:
                continue
            point = dict(zip(variables, z))
            key = tuple(z)
            if key in seen:
                break
            if all(v >= 0 for v in z) and all(r.is_satisfied(point) for r in rows):
                seen.add(key)
                yield point
            break
