"""Pure-numpy subset-sum kernels. Also handle ``dtype=object`` (exact big ints)."""

from __future__ import annotations

import numpy as np


def subset_sums(w: np.ndarray) -> np.ndarray:
    """``out[mask] = sum(w[j] for j in mask)`` for every mask over ``len(w)`` bits."""
    out = np.zeros(1, dtype=w.dtype)
    for j in range(len(w)):
        out = np.concatenate([out, out + w[j]])
    return out


def induced_sums(adj: np.ndarray) -> np.ndarray:
    """``out[mask] = sum(adj[i, j] for i < j both in mask)`` for a symmetric matrix."""
    n = adj.shape[0]
    out = np.zeros(1, dtype=adj.dtype)
    for k in range(n):
        # masks with top bit k extend masks over bits < k by the weight into k
        out = np.concatenate([out, out + subset_sums(adj[k, :k])])
    return out


def popcounts(n: int) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        out = np.concatenate([out, out + 1])
    return out
