"""Vectorised numpy kernels.

These also accept object-dtype arrays holding Python ints, which is how
callers get exact arithmetic once values outgrow int64.
"""

import numpy as np

NAME = "numpy"


def centered_mask(adj, q, pts):
    """Rows ``z`` with ``-q < 2 (adj @ z)_i <= q`` for every ``i``."""
    y2 = 2 * (pts @ adj.T)
    return np.all((y2 > -q) & (y2 <= q), axis=1)


def level_step(A, prev, D):
    """All sums ``A @ p + d``; row ``i * len(D) + j`` pairs ``prev[i]`` with ``D[j]``."""
    img = prev @ A.T
    out = img[:, None, :] + D[None, :, :]
    return out.reshape(-1, A.shape[0])


def component_labels(keys, offsets):
    """Label every key with the smallest index in its connected component.

    ``keys`` is sorted and unique; ``k`` and ``k + o`` are adjacent for each
    offset ``o``.  Hook-and-compress on root indices, hooking larger roots
    under smaller ones so labels are canonical.
    """
    n = keys.shape[0]
    parent = np.arange(n, dtype=np.int64)
    us, vs = [], []
    for o in offsets:
        t = keys + o
        j = np.searchsorted(keys, t)
        jc = np.minimum(j, n - 1)
        hit = (j < n) & (keys[jc] == t)
        us.append(np.nonzero(hit)[0])
        vs.append(jc[hit])
    if not us:
        return parent
    u = np.concatenate(us)
    v = np.concatenate(vs)
    while True:
        pu, pv = parent[u], parent[v]
        diff = pu != pv
        if not diff.any():
            return parent
        hi = np.maximum(pu[diff], pv[diff])
        lo = np.minimum(pu[diff], pv[diff])
        np.minimum.at(parent, hi, lo)
        while True:
            gp = parent[parent]
            if np.array_equal(gp, parent):
                break
            parent = gp


def prune_fixed_point(targets, alive):
    """Greatest fixed point of the successor constraint.

    ``targets[i, k]`` is ``-2`` for the origin (always acceptable), ``-1``
    for a point outside the candidate set, or the index of a candidate.
    A candidate survives while some target is the origin or a survivor.
    """
    alive = alive.copy()
    zero_hit = (targets == -2).any(axis=1)
    idx = np.where(targets >= 0, targets, 0)
    valid = targets >= 0
    while True:
        new = alive & (zero_hit | (valid & alive[idx]).any(axis=1))
        if np.array_equal(new, alive):
            return new
        alive = new


def bin_coords(X, scale, offset, denom, n):
    """``clamp(floor((X * scale - offset) / denom), 0, n - 1)`` with ``denom > 0``."""
    b = (X * scale - offset) // denom
    return np.minimum(np.maximum(b, 0), n - 1)
