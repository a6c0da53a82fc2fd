"""Full-rank sublattices of Z^m in canonical Hermite form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .digitset import DigitSet
from .errors import DimensionError, InvariantViolation, NonConvergence
from .ratmath import Matrix, hnf

DEFAULT_MAX_ITER = 64


@dataclass(frozen=True)
class Lattice:
    """Lattice spanned by the columns of a lower-triangular HNF basis."""

    basis: Matrix
    index: int = field(init=False)

    def __post_init__(self):
        b = self.basis
        if not b.is_square or not b.is_integral():
            raise DimensionError("lattice basis must be a square integer matrix")
        if hnf(b.columns(), b.nrows) != b:
            raise ValueError("basis is not in canonical Hermite normal form")
        idx = 1
        for i in range(b.nrows):
            idx *= b[i, i]
        object.__setattr__(self, "index", idx)

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence[int]], dim: int) -> "Lattice":
        return cls(hnf(generators, dim))

    @classmethod
    def standard(cls, dim: int) -> "Lattice":
        return cls(Matrix.identity(dim))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def basis_vectors(self) -> list[tuple[int, ...]]:
        return self.basis.columns()

    def is_standard(self) -> bool:
        return self.index == 1

    def coordinates(self, z: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of ``z`` in the basis, or None if ``z`` is not in the lattice."""
        if len(z) != self.dim:
            raise DimensionError("vector dimension does not match lattice")
        H = self.basis
        z = [int(x) for x in z]
        c = []
        for i in range(self.dim):
            r = z[i] - sum(H[i, j] * c[j] for j in range(i))
            if r % H[i, i]:
                return None
            c.append(r // H[i, i])
        return tuple(c)

    def __contains__(self, z) -> bool:
        return self.coordinates(z) is not None

    def contains_rows(self, pts: np.ndarray) -> bool:
        """Vectorised membership test for every row of ``pts``."""
        if self.is_standard() or len(pts) == 0:
            return True
        H = self.basis
        resid = pts.copy()
        for i in range(self.dim):
            d = H[i, i]
            if np.any(resid[:, i] % d != 0):
                return False
            c = resid[:, i] // d
            col = np.array(H.column(i), dtype=resid.dtype)
            resid = resid - c[:, None] * col[None, :]
        return True

    def to_json(self) -> dict:
        return {"basis_columns": [list(c) for c in self.basis_vectors()], "index": self.index}


def lattice_contains(gamma: Lattice, z: Sequence[int]) -> bool:
    return z in gamma


def is_invariant_lattice(A, gamma: Lattice) -> bool:
    """True iff ``A b`` lies in ``gamma`` for every basis vector ``b``."""
    A = A if isinstance(A, Matrix) else Matrix(A)
    if A.nrows != gamma.dim:
        raise DimensionError("matrix and lattice dimensions differ")
    return all((A @ b) in gamma for b in gamma.basis_vectors())


def translation_lattice(A, D: DigitSet, max_iter: int = DEFAULT_MAX_ITER) -> Lattice:
    """A-invariant lattice containing ``D``, by descending fixed-point iteration.

    Starts from ``Z^m`` and repeatedly takes the lattice generated by the
    images of the current basis together with the digits.  Digit
    differences are spanned by the digits themselves, so only the digits
    are passed to the Hermite reduction.
    """
    A = A if isinstance(A, Matrix) else Matrix(A)
    m = A.nrows
    if D.dim != m:
        raise DimensionError("digit set dimension does not match matrix")
    gamma = Lattice.standard(m)
    digits = [d for d in D.digits if any(d)]
    for _ in range(max_iter):
        gens = [A @ b for b in gamma.basis_vectors()] + digits
        nxt = Lattice.from_generators(gens, m)
        if nxt == gamma:
            break
        gamma = nxt
    else:
        raise NonConvergence(
            f"no A-invariant lattice of translations within {max_iter} iterations (possible stretched tile)"
        )
    if not all(d in gamma for d in D.digits):
        raise InvariantViolation("translation lattice does not contain every digit")
    if not is_invariant_lattice(A, gamma):
        raise InvariantViolation("translation lattice fixed point is not A-invariant")
    return gamma


def digits_contain_standard_basis(D: DigitSet) -> bool:
    digits = set(D.digits)
    return all(tuple(int(i == j) for j in range(D.dim)) in digits for i in range(D.dim))
