"""Centered canonical, Jordan-block, product and mapped digit sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _arrays
from ._kernels import fits_int64, kernels, numpy_impl
from .config import check_budget
from .errors import DimensionError, InvariantViolation, NotADilation, SingularMatrixError
from .ratmath import Matrix, det, hnf, inverse

__all__ = [
    "DigitSet",
    "ResidueCheck",
    "centered_digit_set",
    "is_complete_residue_system",
    "block_digit_set",
    "product_digit_set",
    "map_digit_set",
    "parallelepiped_corners",
    "half_open_members",
]


@dataclass(frozen=True)
class DigitSet:
    """Lexicographically sorted, duplicate-free integer vectors.

    ``provenance`` is a nested tuple whose first item is one of
    ``"centered-canonical"``, ``"block"``, ``"product"``, ``"mapped"`` or
    ``"explicit"``.
    """

    dim: int
    digits: tuple[tuple[int, ...], ...]
    provenance: tuple = ("explicit",)

    def __post_init__(self):
        if any(len(d) != self.dim for d in self.digits):
            raise DimensionError(f"digit of wrong length for dimension {self.dim}")
        if len(set(self.digits)) != len(self.digits):
            raise ValueError("digits must be pairwise distinct")

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], dim: int | None = None, provenance=("explicit",)):
        vecs = sorted({tuple(int(x) for x in v) for v in vectors})
        if dim is None:
            dim = len(vecs[0]) if vecs else 0
        return cls(dim, tuple(vecs), provenance)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __contains__(self, v):
        return tuple(v) in set(self.digits)

    def as_array(self) -> np.ndarray:
        return _arrays.int_array(self.digits, self.dim)

    def to_csv(self) -> str:
        return "".join(",".join(str(x) for x in d) + "\n" for d in self.digits)

    @classmethod
    def from_csv(cls, text: str) -> "DigitSet":
        rows = [line.strip() for line in text.splitlines() if line.strip()]
        return cls.from_vectors([tuple(int(x) for x in r.split(",")) for r in rows])

    def describe(self) -> dict:
        """JSON-friendly summary of the provenance."""
        return _describe(self.provenance)


def _describe(prov) -> dict:
    kind = prov[0]
    if kind == "centered-canonical":
        return {"kind": kind, "matrix": [list(r) for r in prov[1]]}
    if kind == "block":
        return {"kind": kind, "eigenvalue": prov[1], "size": prov[2]}
    if kind == "product":
        return {"kind": kind, "parts": [_describe(p) for p in prov[1]]}
    if kind == "mapped":
        return {"kind": kind, "matrix": [list(r) for r in prov[1]], "source": _describe(prov[2])}
    return {"kind": kind}


def _as_matrix(A) -> Matrix:
    return A if isinstance(A, Matrix) else Matrix(A)


def half_open_members(A: Matrix, pts: np.ndarray) -> np.ndarray:
    """Mask of rows ``z`` with ``A^-1 z`` in ``(-1/2, 1/2]^m`` (exact).

    With ``adj = det(A) A^-1`` the test is ``-|det| < 2 sgn(det) (adj z)_i <= |det|``,
    pure integer arithmetic.
    """
    d = det(A)
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    sign = 1 if d > 0 else -1
    adj = [[int(x * d * sign) for x in row] for row in inverse(A).rows]
    q = abs(int(d))
    m = A.nrows
    bound = 2 * m * max(abs(x) for r in adj for x in r) * max(_arrays.peak(pts), 1) + q
    if pts.dtype != object and fits_int64(bound):
        return np.asarray(kernels.centered_mask(np.array(adj, dtype=np.int64), q, pts), dtype=bool)
    obj = pts if pts.dtype == object else _arrays.as_object(pts)
    return np.asarray(numpy_impl.centered_mask(np.array(adj, dtype=object), q, obj), dtype=bool)


def _box_points(half_widths: Sequence[int]) -> np.ndarray:
    axes = [np.arange(-h, h + 1, dtype=np.int64) for h in half_widths]
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def centered_digit_set(A, budget: int | None = None) -> DigitSet:
    """``A (-1/2, 1/2]^m`` intersected with ``Z^m``, sorted lexicographically."""
    A = _as_matrix(A)
    if not A.is_square:
        raise DimensionError("digit set of non-square matrix")
    q = abs(det(A))
    if q == 0:
        raise SingularMatrixError("matrix is singular")
    half = [(sum(abs(x) for x in row) + 1) // 2 for row in A.rows]
    count = 1
    for h in half:
        count *= 2 * h + 1
    check_budget(count, budget, "centered digit set bounding box")
    pts = _box_points(half)
    digits = pts[half_open_members(A, pts)]
    if len(digits) != q:
        raise InvariantViolation(f"centered digit set has {len(digits)} digits, expected |det A| = {q}")
    return DigitSet(A.nrows, tuple(_arrays.rows_to_tuples(digits)), ("centered-canonical", A.rows))


class ResidueCheck(NamedTuple):
    ok: bool
    witness: tuple | None


def _reduce_mod(H: Matrix, z: Sequence[int]) -> tuple[int, ...]:
    z = list(z)
    for i in range(H.nrows):
        c = z[i] // H[i, i]
        if c:
            col = H.column(i)
            z = [a - c * b for a, b in zip(z, col)]
    return tuple(z)


def is_complete_residue_system(A, D: DigitSet | Iterable[Sequence[int]]) -> ResidueCheck:
    """Whether ``D`` holds exactly one representative of each class of ``Z^m / A Z^m``.

    Digits are reduced to canonical coset representatives modulo the
    Hermite basis of ``A Z^m``; two digits collide iff ``A^-1 (d - d')`` is
    integral.  The witness is ``("pair", d, d')`` for the first collision or
    ``("cardinality", len(D), |det A|)``.
    """
    A = _as_matrix(A)
    digits = list(D.digits) if isinstance(D, DigitSet) else [tuple(v) for v in D]
    if any(len(d) != A.nrows for d in digits):
        raise DimensionError("digit dimension does not match matrix")
    q = abs(det(A))
    if q == 0:
        return ResidueCheck(False, ("cardinality", len(digits), 0))
    H = hnf(A.columns(), A.nrows)
    seen: dict[tuple, tuple] = {}
    for d in digits:
        r = _reduce_mod(H, d)
        if r in seen:
            return ResidueCheck(False, ("pair", seen[r], d))
        seen[r] = d
    if len(digits) != q:
        return ResidueCheck(False, ("cardinality", len(digits), q))
    return ResidueCheck(True, None)


def block_digit_set(lam: int, k: int) -> DigitSet:
    """Centered canonical digit set of the ``k x k`` Jordan block for ``lam``."""
    if abs(lam) < 2:
        raise NotADilation(f"not a dilation: Jordan block eigenvalue {lam}", eigenvalue=lam)
    if k < 1:
        raise ValueError("block size must be positive")
    D = centered_digit_set(Matrix.jordan_block(lam, k))
    return DigitSet(k, D.digits, ("block", lam, k))


def product_digit_set(parts: Sequence[DigitSet]) -> DigitSet:
    """Cartesian product with coordinates concatenated in part order."""
    if not parts:
        raise ValueError("product of no digit sets")
    if len(parts) == 1:
        return parts[0]
    digits = tuple(sum(combo, ()) for combo in product(*(p.digits for p in parts)))
    dim = sum(p.dim for p in parts)
    return DigitSet(dim, digits, ("product", tuple(p.provenance for p in parts)))


def map_digit_set(P, D: DigitSet) -> DigitSet:
    """``{P g : g in D}`` re-sorted; residue-system status is not checked."""
    P = _as_matrix(P)
    if P.ncols != D.dim:
        raise DimensionError("matrix and digit set dimensions differ")
    if not P.is_integral():
        raise ValueError("mapping matrix must be integral")
    mapped = [P @ g for g in D.digits]
    return DigitSet.from_vectors(mapped, P.nrows, ("mapped", P.rows, D.provenance))


def parallelepiped_corners(lam: int, k: int) -> list[tuple[Fraction, ...]]:
    """Corners ``J (eps / 2)`` of the block parallelepiped, ``eps`` in {+1, -1}^k.

    Sign vectors are enumerated with +1 before -1 in each position.
    """
    if k < 1:
        raise ValueError("block size must be positive")
    out = []
    for eps in product((1, -1), repeat=k):
        pt = [Fraction(lam * eps[i] + eps[i + 1], 2) for i in range(k - 1)]
        pt.append(Fraction(lam * eps[-1], 2))
        out.append(tuple(pt))
    return out
