"""Compare the numba and numpy kernel backends on workloads from real calls.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--threads N]

Inputs are built through the public API (level sets, digit boxes, tile
clouds) so sizes match what ``tileforge analyze`` and ``render`` see.
Every kernel's outputs are compared across backends before timing.
"""

import argparse
import timeit
from itertools import product

import numpy as np

from tileforge._kernels import numba_impl, numpy_impl
from tileforge.attractor import approximate
from tileforge.connectivity import level_set
from tileforge.digitset import DigitSet, centered_digit_set
from tileforge.ratmath import Matrix, det, inverse


def workloads():
    A = Matrix([[3, 1], [-1, 4]])
    D = centered_digit_set(A)
    prev = level_set(A, D, 5).points  # 13^5 rows feeding D_6
    Aarr = np.array(A.rows, dtype=np.int64)
    Darr = D.as_array()
    yield "level_step", len(prev) * len(Darr), (Aarr, prev, Darr)

    big = Matrix([[40, 17], [-9, 52]])
    d = det(big)
    adj = np.array([[int(x * d) for x in r] for r in inverse(big).rows], dtype=np.int64)
    half = [(sum(abs(x) for x in r) + 1) // 2 for r in big.rows]
    grid = np.stack(
        [g.ravel() for g in np.meshgrid(*[np.arange(-h, h + 1) for h in half], indexing="ij")], axis=1
    ).astype(np.int64)
    grid = np.repeat(grid, 20, axis=0)
    yield "centered_mask", len(grid), (adj, abs(int(d)), grid)

    pts = prev
    lo = pts.min(axis=0) - 1
    ext = pts.max(axis=0) + 1 - lo + 1
    keys = np.sort((pts - lo) @ np.array([ext[1], 1], dtype=np.int64))
    offsets = np.array([ext[1], 1], dtype=np.int64)
    yield "component_labels", len(keys), (keys, offsets)

    cloud = approximate([[2, 1], [0, 2]], DigitSet.from_vectors(product((0, 1), repeat=2)), 10)
    X = cloud.numerators[:, 0].copy()
    yield "bin_coords", len(X), (X, 1024, -3 * cloud.denominator, 4 * cloud.denominator, 1024)

    rng = np.random.default_rng(0)
    n = 200_000
    targets = rng.integers(-2, n, size=(n, 9), dtype=np.int64)
    targets[rng.random((n, 9)) < 0.7] = -1
    targets[:, 0][rng.random(n) < 0.999] = -1
    yield "prune_fixed_point", n, (targets, np.ones(n, dtype=np.bool_))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()
    if args.threads:
        import numba

        numba.set_num_threads(args.threads)

    print(f"{'kernel':<20}{'size':>12}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, size, inputs in workloads():
        f_np = getattr(numpy_impl, name)
        f_nb = getattr(numba_impl, name)
        ref = np.asarray(f_np(*inputs))
        got = np.asarray(f_nb(*inputs))  # also triggers compilation
        assert np.array_equal(ref.astype(got.dtype), got), f"{name}: backends disagree"
        t_np = min(timeit.repeat(lambda: f_np(*inputs), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*inputs), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20}{size:>12}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
