"""Compiled union-find kernels for labeling large covers."""

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True)
def _union(parent, i, j):
    ri = _find(parent, i)
    rj = _find(parent, j)
    if ri < rj:
        parent[rj] = ri
    elif rj < ri:
        parent[ri] = rj


@njit(cache=True)
def union_shifts(parent, skeys, shifts):
    """Union ``i`` and ``j`` whenever ``skeys[j] == skeys[i] + s`` for a
    shift ``s`` (all shifts positive, ``skeys`` strictly increasing)."""
    n = skeys.shape[0]
    for s in shifts:
        j = 0
        for i in range(n):
            t = skeys[i] + s
            while j < n and skeys[j] < t:
                j += 1
            if j == n:
                break
            if skeys[j] == t:
                _union(parent, i, j)


@njit(cache=True)
def union_pairs(parent, a, b):
    for k in range(a.shape[0]):
        _union(parent, a[k], b[k])


@njit(cache=True)
def roots(parent):
    out = np.empty_like(parent)
    for i in range(parent.shape[0]):
        out[i] = _find(parent, i)
    return out
