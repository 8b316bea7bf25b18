"""Compiled single-candidate objectives used inside line searches."""

from __future__ import annotations

import numpy as np
from numba import njit

KIND_NORM = 0
KIND_VARIATION = 1


@njit(cache=True)
def maximal_single(ops, f):
    radii, n, _ = ops.shape
    out = np.empty(n)
    for v in range(n):
        best = 0.0
        for r in range(radii):
            s = 0.0
            for u in range(n):
                w = ops[r, v, u]
                if w != 0.0:
                    s += w * abs(f[u])
            if s > best:
                best = s
        out[v] = best
    return out


@njit(cache=True)
def ratio_single(ops, edges, f, p, kind):
    mf = maximal_single(ops, f)
    num = 0.0
    den = 0.0
    if kind == KIND_NORM:
        for v in range(f.shape[0]):
            num += mf[v] ** p
            den += abs(f[v]) ** p
    else:
        for e in range(edges.shape[0]):
            a = edges[e, 0]
            b = edges[e, 1]
            num += abs(mf[a] - mf[b]) ** p
            den += abs(f[a] - f[b]) ** p
    if den == 0.0:
        return -np.inf
    return (num / den) ** (1.0 / p)
