"""Conversions between exact integer vectors and numpy arrays."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ._kernels import fits_int64


def int_array(vectors: Iterable[Sequence[int]], dim: int) -> np.ndarray:
    """2-D array of integer vectors: int64 when safe, object dtype otherwise."""
    rows = [tuple(int(x) for x in v) for v in vectors]
    if not rows:
        return np.zeros((0, dim), dtype=np.int64)
    peak = max(abs(x) for r in rows for x in r)
    if fits_int64(peak):
        return np.array(rows, dtype=np.int64).reshape(len(rows), dim)
    arr = np.empty((len(rows), dim), dtype=object)
    for i, r in enumerate(rows):
        arr[i, :] = r
    return arr


def matrix_array(M, exact: bool = False) -> np.ndarray:
    rows = [[int(x) for x in r] for r in M.rows]
    return np.array(rows, dtype=object if exact else np.int64)


def as_object(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    out[...] = [[int(x) for x in row] for row in arr] if arr.ndim == 2 else [int(x) for x in arr]
    return out


def peak(arr: np.ndarray) -> int:
    """Largest absolute entry as a Python int (0 for empty arrays)."""
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr.ravel())
    return int(np.abs(arr).max())


def sort_unique_rows(arr: np.ndarray) -> np.ndarray:
    """Deduplicate and sort rows lexicographically."""
    if arr.shape[0] == 0:
        return arr
    if arr.dtype == object:
        rows = sorted({tuple(int(x) for x in r) for r in arr})
        out = np.empty((len(rows), arr.shape[1]), dtype=object)
        for i, r in enumerate(rows):
            out[i, :] = r
        return out
    lo = arr.min(axis=0)
    ext = [int(h) - int(l) + 1 for h, l in zip(arr.max(axis=0), lo)]
    total = 1
    for e in ext:
        total *= e
    if not fits_int64(total):
        return np.unique(arr, axis=0)
    # mixed-radix keys with the first column most significant keep lexicographic order
    strides = np.ones(len(ext), dtype=np.int64)
    for i in range(len(ext) - 2, -1, -1):
        strides[i] = strides[i + 1] * ext[i + 1]
    keys = np.unique((arr - lo) @ strides)
    out = np.empty((keys.shape[0], len(ext)), dtype=np.int64)
    for i in range(len(ext)):
        out[:, i], keys = np.divmod(keys, strides[i])
    return out + lo


def rows_to_tuples(arr: np.ndarray) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in r) for r in arr]
