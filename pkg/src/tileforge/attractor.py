"""Finite approximations of the attractor T(A, D), bounds and rendering.

A depth-``n`` cloud is ``{sum_{j=1..n} A^-j d_j}``, which equals
``A^-n D_n`` for the level set ``D_n``.  Points are stored as integer
numerators over one positive common denominator ``|det A^n|``, so every
comparison, sort and pixel assignment is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from . import _arrays
from ._kernels import fits_int64, kernels, numpy_impl
from .connectivity import level_set
from .digitset import DigitSet
from .errors import DimensionError, UnsupportedDimension
from .ratmath import Matrix, det, inverse

MAX_NORM_POWER = 10_000


@dataclass(frozen=True)
class TileCloud:
    depth: int
    numerators: np.ndarray = field(repr=False)  # sorted unique rows
    denominator: int
    gap_bound: Fraction

    @property
    def dim(self) -> int:
        return int(self.numerators.shape[1])

    def __len__(self):
        return int(self.numerators.shape[0])

    @property
    def points(self) -> list[tuple[Fraction, ...]]:
        """Exact points, lexicographically sorted."""
        den = self.denominator
        return [tuple(Fraction(int(x), den) for x in row) for row in self.numerators]

    @classmethod
    def from_points(cls, points, depth: int = 0, gap_bound: Fraction = Fraction(0)) -> "TileCloud":
        pts = [tuple(Fraction(x) for x in p) for p in points]
        if not pts:
            raise ValueError("empty point cloud")
        den = lcm(*(x.denominator for p in pts for x in p))
        nums = _arrays.int_array([[int(x * den) for x in p] for p in pts], len(pts[0]))
        return cls(depth, _arrays.sort_unique_rows(nums), int(den), Fraction(gap_bound))


def _as_matrix(A) -> Matrix:
    return A if isinstance(A, Matrix) else Matrix(A)


def _contraction_power(A: Matrix) -> tuple[int, list[Fraction]]:
    """Smallest ``k`` with ``||A^-k|| < 1`` and the norms ``||A^-j||``, ``j = 1..k``."""
    Ainv = inverse(A)
    norms = []
    P = Matrix.identity(A.nrows)
    for k in range(1, MAX_NORM_POWER + 1):
        P = P @ Ainv
        norms.append(Fraction(P.norm_inf()))
        if norms[-1] < 1:
            return k, norms
    raise ValueError("matrix is not expanding: no contracting inverse power found")


def radius_bound(A, D: DigitSet) -> Fraction:
    """Upper bound on ``||x||_inf`` over x in T(A, D)."""
    A = _as_matrix(A)
    k, norms = _contraction_power(A)
    dmax = max((max(abs(x) for x in d) for d in D.digits), default=0)
    return Fraction(dmax) * sum(norms) / (1 - norms[-1])


def diameter_bound(A, D: DigitSet) -> Fraction:
    """Upper bound on the sup-norm diameter of T(A, D).

    Blocks the series ``sum_j A^-j d_j`` in runs of ``k`` terms, where
    ``k`` is the first power with ``||A^-k||_inf < 1``.
    """
    return 2 * radius_bound(A, D)


def approximate(A, D: DigitSet, n: int, budget: int | None = None) -> TileCloud:
    """Depth-``n`` point cloud ``A^-1 D + ... + A^-n D`` (exact, deduplicated)."""
    A = _as_matrix(A)
    if n < 1:
        raise ValueError("depth must be at least 1")
    if D.dim != A.nrows:
        raise DimensionError("digit set dimension does not match matrix")
    Dn = level_set(A, D, n, budget).points
    An = A**n
    dn = det(An)
    sign = 1 if dn > 0 else -1
    adj = [[int(x * dn * sign) for x in row] for row in inverse(An).rows]
    bound = A.nrows * max(abs(x) for r in adj for x in r) * max(_arrays.peak(Dn), 1)
    if Dn.dtype != object and fits_int64(bound):
        nums = Dn @ np.array(adj, dtype=np.int64).T
    else:
        obj = Dn if Dn.dtype == object else _arrays.as_object(Dn)
        nums = obj @ np.array(adj, dtype=object).T
    gap = Fraction(inverse(An).norm_inf()) * radius_bound(A, D)
    return TileCloud(n, _arrays.sort_unique_rows(nums), abs(int(dn)), gap)


@dataclass(frozen=True)
class RasterImage:
    width: int
    height: int
    viewport: tuple[Fraction, Fraction, Fraction, Fraction]  # xmin, xmax, ymin, ymax
    pixels: np.ndarray = field(repr=False)  # uint8 0/1, row 0 at the top

    @property
    def occupied(self) -> int:
        return int(self.pixels.sum())

    def to_pgm(self) -> bytes:
        header = f"P5\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + (self.pixels.astype(np.uint8) * 255).tobytes()


def _bins(X: np.ndarray, scale: int, offset: int, denom: int, n: int) -> np.ndarray:
    bound = _arrays.peak(X) * abs(scale) + abs(offset)
    if X.dtype != object and fits_int64(bound) and fits_int64(denom):
        return np.asarray(kernels.bin_coords(X, scale, offset, denom, n), dtype=np.int64)
    obj = X if X.dtype == object else _arrays.as_object(X)
    return numpy_impl.bin_coords(obj, scale, offset, denom, n).astype(np.int64)


def default_viewport(cloud: TileCloud) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Bounding box of the cloud padded by its gap bound (degenerate axes widened to 1)."""
    den = cloud.denominator
    out = []
    for axis in range(2):
        col = cloud.numerators[:, axis]
        lo = Fraction(int(col.min()), den) - cloud.gap_bound
        hi = Fraction(int(col.max()), den) + cloud.gap_bound
        if lo == hi:
            lo, hi = lo - Fraction(1, 2), hi + Fraction(1, 2)
        out += [lo, hi]
    return tuple(out)


def rasterize(cloud: TileCloud, width: int, height: int, viewport=None) -> RasterImage:
    """Binary occupancy image of a 2-D cloud; pixel bins use exact floors.

    Both axes use half-open cells ``[lo + i h / n, lo + (i + 1) h / n)``,
    clamped to the image, so a point on the upper edge of the viewport
    lands in the last cell.  Rows are then flipped to put ``ymax`` at row 0.
    """
    if cloud.dim != 2:
        raise UnsupportedDimension(f"rasterize needs a 2-D cloud, got dimension {cloud.dim}; use export_points")
    if width < 1 or height < 1:
        raise ValueError("image size must be positive")
    vp = default_viewport(cloud) if viewport is None else tuple(Fraction(v) for v in viewport)
    xmin, xmax, ymin, ymax = vp
    if not (xmax > xmin and ymax > ymin):
        raise ValueError("viewport must have positive extent")
    cols = _axis_bins(cloud.numerators[:, 0], cloud.denominator, xmin, xmax - xmin, width)
    rows = height - 1 - _axis_bins(cloud.numerators[:, 1], cloud.denominator, ymin, ymax - ymin, height)
    pixels = np.zeros((height, width), dtype=np.uint8)
    pixels[rows, cols] = 1
    return RasterImage(width, height, vp, pixels)


def _axis_bins(X: np.ndarray, den: int, lo: Fraction, extent: Fraction, n: int) -> np.ndarray:
    # floor(n * (X / den - lo) / extent) with every factor cleared to integers
    return _bins(
        X,
        n * extent.denominator * lo.denominator,
        n * extent.denominator * lo.numerator * den,
        den * extent.numerator * lo.denominator,
        n,
    )


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def export_points(cloud: TileCloud) -> str:
    """CSV text, one point per line, coordinates as exact ``p/q`` strings."""
    den = cloud.denominator
    lines = []
    for row in cloud.numerators:
        lines.append(",".join(_fmt(Fraction(int(x), den)) for x in row))
    return "".join(line + "\n" for line in lines)
