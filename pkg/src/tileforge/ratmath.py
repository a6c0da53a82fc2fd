"""Exact rational linear algebra and integer lattice normal forms.

Scalars are Python ``int`` or :class:`fractions.Fraction`; nothing in this
module ever touches floating point.  :class:`Matrix` is an immutable dense
matrix whose entries may mix the two, with ``int`` kept wherever an entry is
integral so integer matrices stay cheap.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _product
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionError, NoSolutionError, RankError, SingularMatrixError

Rational = Fraction

__all__ = [
    "Rational",
    "Matrix",
    "normalize",
    "det",
    "inverse",
    "char_poly",
    "poly_eval",
    "hnf",
    "solve_linear",
    "rank",
    "integerize",
]


def normalize(x):
    """Return ``x`` as an ``int`` when integral, otherwise as a reduced Fraction."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


class Matrix:
    """Immutable dense matrix over Q.

    ``Matrix([[3, 10], [0, 3]])`` builds an integer matrix; ``M @ N`` and
    ``M @ v`` (``v`` a sequence) multiply exactly.
    """

    __slots__ = ("_rows", "_shape", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(normalize(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionError("ragged rows")
        self._rows = data
        self._shape = (len(data), ncols)
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls([[0] * m for _ in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        return cls(zip(*cols))

    @classmethod
    def block_diag(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.nrows for b in blocks)
        out = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[off + i][off + j] = b[i, j]
            off += b.nrows
        return cls(out)

    @classmethod
    def jordan_block(cls, lam: int, k: int) -> "Matrix":
        return cls([[lam if i == j else (1 if j == i + 1 else 0) for j in range(k)] for i in range(k)])

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def nrows(self) -> int:
        return self._shape[0]

    @property
    def ncols(self) -> int:
        return self._shape[1]

    @property
    def is_square(self) -> bool:
        return self._shape[0] == self._shape[1]

    @property
    def rows(self) -> tuple[tuple, ...]:
        return self._rows

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self._rows)) if self._rows else Matrix([])

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self._rows) for j in range(self.ncols)]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        return f"Matrix({[list(r) for r in self._rows]!r})"

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self._rows for x in r)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._rows])

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return NotImplemented
        return Matrix([[a * c for a in r] for r in self._rows])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows])
        v = tuple(other)
        if len(v) != self.ncols:
            raise DimensionError(f"cannot multiply {self.shape} by vector of length {len(v)}")
        return tuple(normalize(sum(a * b for a, b in zip(r, v))) for r in self._rows)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square:
            raise DimensionError("power of non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result, base = Matrix.identity(self.nrows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self):
        return sum(self._rows[i][i] for i in range(min(self.shape)))

    def norm_inf(self):
        """Operator infinity norm: maximum absolute row sum (exact)."""
        return normalize(max((sum(abs(x) for x in r) for r in self._rows), default=0))

    def det(self):
        return det(self)

    def inverse(self) -> "Matrix":
        return inverse(self)


def _as_matrix(M) -> Matrix:
    return M if isinstance(M, Matrix) else Matrix(M)


def det(M) -> Fraction | int:
    """Exact determinant by Bareiss fraction-free elimination.

    Rational input is scaled to integers row by row first, so the
    elimination itself only ever divides exactly.
    """
    M = _as_matrix(M)
    if not M.is_square:
        raise DimensionError(f"determinant of non-square {M.shape} matrix")
    n = M.nrows
    if n == 0:
        return 1
    scale = Fraction(1)
    a = []
    for row in M.rows:
        den = lcm(*(Fraction(x).denominator for x in row))
        scale /= den
        a.append([int(x * den) for x in row])
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return normalize(sign * a[n - 1][n - 1] * scale)


def inverse(M) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination over Q."""
    M = _as_matrix(M)
    if not M.is_square:
        raise DimensionError(f"inverse of non-square {M.shape} matrix")
    n = M.nrows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M.rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv_p = 1 / a[c][c]
        a[c] = [x * inv_p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return Matrix([row[n:] for row in a])


def char_poly(M) -> list[int]:
    """Coefficients of det(xI - M), highest degree first (monic).

    Faddeev-LeVerrier with exact rationals; for an integer matrix every
    coefficient comes out integral.
    """
    M = _as_matrix(M)
    if not M.is_square:
        raise DimensionError(f"characteristic polynomial of non-square {M.shape} matrix")
    n = M.nrows
    coeffs = [Fraction(1)]
    Mk = Matrix.zeros(n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        Mk = M @ (Mk + coeffs[-1] * ident)
        coeffs.append(-Fraction(Mk.trace()) / k)
    return [normalize(c) for c in coeffs]


def poly_eval(coeffs: Sequence, x):
    """Horner evaluation; ``x`` may be a scalar or a square Matrix."""
    if isinstance(x, Matrix):
        n = x.nrows
        acc = Matrix.zeros(n)
        ident = Matrix.identity(n)
        for c in coeffs:
            acc = acc @ x + c * ident
        return acc
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q restricted to the first ``ncols`` columns."""
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv_p = 1 / a[r][c]
        a[r] = [x * inv_p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(vectors: Sequence[Sequence]) -> int:
    """Rank over Q of a list of vectors."""
    if not vectors:
        return 0
    rows = [[Fraction(x) for x in v] for v in vectors]
    return len(_rref(rows, len(rows[0]))[1])


def solve_linear(M, b: Sequence) -> tuple[tuple, list[tuple]]:
    """Solve ``M x = b`` exactly.

    Returns ``(particular, kernel_basis)``.  The particular solution sets
    every free variable to zero; kernel vector ``i`` sets the ``i``-th free
    variable to one and the others to zero.  Raises NoSolutionError when
    the system is inconsistent.
    """
    M = _as_matrix(M)
    if len(b) != M.nrows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {M.nrows}")
    n = M.ncols
    rows = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(M.rows, b)]
    red, pivots = _rref(rows, n)
    for row in red[len(pivots):]:
        if row[n] != 0:
            raise NoSolutionError("inconsistent linear system")
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        kernel.append(tuple(normalize(t) for t in v))
    return tuple(normalize(t) for t in x), kernel


def integerize(vectors: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Scale a family of rational vectors by one common factor.

    The result is integral with overall content (gcd of all entries) 1.
    Signs are left alone.
    """
    entries = [Fraction(x) for v in vectors for x in v]
    den = lcm(*(e.denominator for e in entries)) if entries else 1
    ints = [[int(Fraction(x) * den) for x in v] for v in vectors]
    g = gcd(*(x for v in ints for x in v)) or 1
    return [tuple(x // g for x in v) for v in ints]


def hnf(generators: Iterable[Sequence[int]], dim: int) -> Matrix:
    """Column Hermite normal form of the lattice spanned by ``generators``.

    The result is a lower-triangular ``dim x dim`` basis matrix (basis
    vectors are its columns) with positive diagonal, and every entry left
    of the diagonal in row ``i`` reduced into ``[0, H[i][i])``.  Raises
    RankError unless the generators span a rank-``dim`` lattice.
    """
    cols = [list(map(int, g)) for g in generators]
    if any(len(c) != dim for c in cols):
        raise DimensionError(f"generator length differs from dimension {dim}")
    cols = [c for c in cols if any(c)]
    for i in range(dim):
        if i >= len(cols):
            raise RankError(f"generators span rank < {dim}")
        while True:
            active = [j for j in range(i, len(cols)) if cols[j][i] != 0]
            if not active:
                raise RankError(f"generators span rank < {dim}")
            p = min(active, key=lambda j: (abs(cols[j][i]), j))
            cols[i], cols[p] = cols[p], cols[i]
            piv = cols[i][i]
            done = True
            for j in range(i + 1, len(cols)):
                if cols[j][i]:
                    q = cols[j][i] // piv
                    cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
                    if cols[j][i]:
                        done = False
            if done:
                break
        if cols[i][i] < 0:
            cols[i] = [-a for a in cols[i]]
        cols = cols[: i + 1] + [c for c in cols[i + 1:] if any(c)]
        d = cols[i][i]
        for j in range(i):
            q = cols[j][i] // d
            if q:
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
    return Matrix.from_columns(cols[:dim])


def lattice_points_in_box(lo: Sequence[int], hi: Sequence[int]):
    """All integer points of the box ``lo <= z <= hi`` in lexicographic order."""
    return _product(*(range(a, b + 1) for a, b in zip(lo, hi)))
