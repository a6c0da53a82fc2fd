"""numba-compiled kernels mirroring :mod:`.numpy_impl` element for element."""

import os

import numpy as np
from numba import config, njit, prange

# the bundled TBB is often too old and numba warns on every first launch
if "NUMBA_THREADING_LAYER" not in os.environ:
    config.THREADING_LAYER = "workqueue"

NAME = "numba"


@njit(cache=True, parallel=True)
def centered_mask(adj, q, pts):
    n, m = pts.shape
    out = np.empty(n, dtype=np.bool_)
    for r in prange(n):
        ok = True
        for i in range(m):
            s = 0
            for j in range(m):
                s += adj[i, j] * pts[r, j]
            s2 = 2 * s
            if s2 <= -q or s2 > q:
                ok = False
                break
        out[r] = ok
    return out


@njit(cache=True, parallel=True)
def level_step(A, prev, D):
    n, m = prev.shape
    k = D.shape[0]
    out = np.empty((n * k, m), dtype=np.int64)
    for i in prange(n):
        img = np.zeros(m, dtype=np.int64)
        for a in range(m):
            s = 0
            for b in range(m):
                s += A[a, b] * prev[i, b]
            img[a] = s
        for j in range(k):
            for a in range(m):
                out[i * k + j, a] = img[a] + D[j, a]
    return out


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def component_labels(keys, offsets):
    n = keys.shape[0]
    parent = np.arange(n)
    # keys are sorted, so keys[i] + o is increasing in i: one forward cursor per offset
    cursor = np.zeros(offsets.shape[0], dtype=np.int64)
    for i in range(n):
        for c in range(offsets.shape[0]):
            t = keys[i] + offsets[c]
            j = cursor[c]
            while j < n and keys[j] < t:
                j += 1
            cursor[c] = j
            if j < n and keys[j] == t:
                ra = _find(parent, i)
                rb = _find(parent, j)
                if ra < rb:
                    parent[rb] = ra
                elif rb < ra:
                    parent[ra] = rb
    for i in range(n):
        parent[i] = _find(parent, i)
    return parent


@njit(cache=True)
def prune_fixed_point(targets, alive):
    n, k = targets.shape
    alive = alive.copy()
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if not alive[i]:
                continue
            keep = False
            for j in range(k):
                t = targets[i, j]
                if t == -2 or (t >= 0 and alive[t]):
                    keep = True
                    break
            if not keep:
                alive[i] = False
                changed = True
    return alive


@njit(cache=True, parallel=True)
def bin_coords(X, scale, offset, denom, n):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in prange(X.shape[0]):
        b = (X[i] * scale - offset) // denom
        if b < 0:
            b = 0
        elif b > n - 1:
            b = n - 1
        out[i] = b
    return out
