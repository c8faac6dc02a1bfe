"""Subset-enumeration kernels over bitmasks.

Two interchangeable backends compute the same integer arrays: a numba path
(``@njit``) and a pure-numpy path. The backend is chosen once at import from
``MCST_BACKEND`` (``numba`` | ``numpy``); numba is used when importable and not
disabled. Values are exact: rationals are scaled to a common denominator and
summed as int64 when the magnitudes provably fit, otherwise as Python ints on
the numpy path (``dtype=object``).
"""

from __future__ import annotations

import math
import os
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from . import _numpy

_INT64_SAFE = 1 << 62


def _load_numba():
    try:
        from . import _numba
    except ImportError:  # numba not installed
        return None
    return _numba


_requested = os.environ.get("MCST_BACKEND", "numba").strip().lower()
_numba_mod = _load_numba() if _requested != "numpy" else None
BACKEND = "numba" if _numba_mod is not None else "numpy"


def backend() -> str:
    return BACKEND


def _impl(name: str, force: str | None):
    which = force or BACKEND
    if which == "numba":
        if _numba_mod is None:
            raise RuntimeError("numba backend unavailable")
        return getattr(_numba_mod, name)
    return getattr(_numpy, name)


def scale(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Return integer numerators over the least common denominator."""
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in values], den


def _fits_int64(ints: Sequence[int]) -> bool:
    return sum(abs(i) for i in ints) < _INT64_SAFE


def popcounts(n: int, force: str | None = None) -> np.ndarray:
    return _impl("popcounts", force)(n)


def subset_sums(ints: Sequence[int], force: str | None = None) -> np.ndarray:
    ints = [int(i) for i in ints]
    if _fits_int64(ints):
        return _impl("subset_sums", force)(np.asarray(ints, dtype=np.int64))
    return _numpy.subset_sums(np.asarray(list(ints), dtype=object))


def induced_sums(n: int, ends: Sequence[tuple[int, int]], ints: Sequence[int],
                 force: str | None = None) -> np.ndarray:
    """``out[mask]`` = total weight of edges with both endpoints in ``mask``."""
    ints = [int(i) for i in ints]
    big = not _fits_int64(ints)
    adj = np.zeros((n, n), dtype=object if big else np.int64)
    if big:
        adj[:, :] = 0
    for (a, b), w in zip(ends, ints):
        adj[a, b] += w
        adj[b, a] += w
    if big:
        return _numpy.induced_sums(adj)
    return _impl("induced_sums", force)(adj)
