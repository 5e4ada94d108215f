"""Numba kernels shared by the graph structures and the fast engine."""

from __future__ import annotations

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True)
def fill_adjacency(n, u, v):
    """Counting-sort CSR build for an undirected edge list.

    Returns (indptr, nbrs) with nbrs[indptr[x]:indptr[x+1]] = neighbours of x.
    Within a vertex's slice, neighbours reached via the u-side come first in
    edge order, then the v-side ones; order is deterministic.
    """
    m = u.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for i in range(m):
        deg[u[i]] += 1
        deg[v[i]] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    for x in range(n):
        indptr[x + 1] = indptr[x] + deg[x]
    nbrs = np.empty(2 * m, dtype=np.int32)
    pos = indptr[:n].copy()
    for i in range(m):
        a = u[i]
        b = v[i]
        nbrs[pos[a]] = b
        pos[a] += 1
    for i in range(m):
        a = u[i]
        b = v[i]
        nbrs[pos[b]] = a
        pos[b] += 1
    return indptr, nbrs
