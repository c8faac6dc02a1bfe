"""numba-compiled versions of the subset-sum kernels (int64 only)."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def subset_sums(w):
    n = w.shape[0]
    out = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        half = 1 << k
        for m in range(half):
            out[half + m] = out[m] + w[k]
    return out


@njit(cache=True)
def induced_sums(adj):
    n = adj.shape[0]
    out = np.zeros(1 << n, dtype=np.int64)
    row = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        # row[m] = weight from node k into the nodes of m (bits below k)
        half = 1 << k
        for j in range(k):
            step = 1 << j
            for m in range(step):
                row[step + m] = row[m] + adj[k, j]
        for m in range(half):
            out[half + m] = out[m] + row[m]
    return out


@njit(cache=True)
def popcounts(n):
    out = np.zeros(1 << n, dtype=np.int64)
    for mask in range(1, 1 << n):
        out[mask] = out[mask >> 1] + (mask & 1)
    return out
