"""Jordan decomposition with an integer similarity matrix.

Chains are built top-down per eigenvalue and each chain is scaled
independently to primitive integer vectors, so ``P`` is integral without
any global rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, InvariantViolation
from .ratmath import Matrix, det, integerize, rank, solve_linear
from .spectrum import integer_eigenvalues


@dataclass(frozen=True)
class JordanDecomposition:
    J: Matrix
    P: Matrix
    blocks: tuple[tuple[int, int], ...]  # (eigenvalue, size) in block order
    chains: tuple[tuple[int, ...], ...]  # column indices of P per block

    def block_matrices(self) -> list[Matrix]:
        return [Matrix.jordan_block(lam, k) for lam, k in self.blocks]


def _kernel(M: Matrix) -> list[tuple]:
    return solve_linear(M, [0] * M.nrows)[1]


def _chains_for(A: Matrix, lam: int, mult: int) -> list[list[tuple[int, ...]]]:
    n = A.nrows
    N = A - lam * Matrix.identity(n)
    kernels = [[]]  # kernels[s] = basis of ker N^s
    dims = [0]
    Nk = Matrix.identity(n)
    while dims[-1] < mult:
        Nk = Nk @ N
        kernels.append(_kernel(Nk))
        dims.append(len(kernels[-1]))
        if dims[-1] == dims[-2]:
            raise InvariantViolation(f"generalized eigenspace of {lam} stalled at dimension {dims[-1]} < {mult}")
    top = len(dims) - 1
    at_least = [0] + [dims[s] - dims[s - 1] for s in range(1, top + 1)] + [0]

    chains: list[list[tuple]] = []
    for s in range(top, 0, -1):
        need = at_least[s] - at_least[s + 1]
        # level-s vectors of the longer chains already chosen
        span = list(kernels[s - 1]) + [c[s - 1] for c in chains]
        r = rank(span)
        for v in kernels[s]:
            if need == 0:
                break
            if rank(span + [v]) > r:
                span.append(v)
                r += 1
                need -= 1
                chain = [v]
                for _ in range(s - 1):
                    chain.append(N @ chain[-1])
                chains.append(chain[::-1])
        if need:
            raise InvariantViolation(f"could not complete Jordan chains of length {s} for eigenvalue {lam}")
    out = []
    for chain in chains:
        ints = integerize(chain)
        lead = next(x for x in ints[0] if x != 0)
        if lead < 0:
            ints = [tuple(-x for x in v) for v in ints]
        out.append(ints)
    return out


def jordan_decompose(A) -> JordanDecomposition:
    """Jordan form ``J`` and integer ``P`` with ``A P = P J``.

    Blocks are ordered by ascending eigenvalue, then descending size.
    Raises NotRationalSpectrum for matrices without an integer spectrum.
    """
    A = A if isinstance(A, Matrix) else Matrix(A)
    if not A.is_square:
        raise DimensionError("Jordan decomposition of non-square matrix")
    spec = integer_eigenvalues(A)
    columns: list[tuple[int, ...]] = []
    blocks: list[tuple[int, int]] = []
    chain_idx: list[tuple[int, ...]] = []
    for lam, mult in spec.eigenvalues:
        for chain in _chains_for(A, lam, mult):
            start = len(columns)
            columns.extend(chain)
            blocks.append((lam, len(chain)))
            chain_idx.append(tuple(range(start, start + len(chain))))
    P = Matrix.from_columns(columns)
    J = Matrix.block_diag([Matrix.jordan_block(lam, k) for lam, k in blocks])
    dec = JordanDecomposition(J, P, tuple(blocks), tuple(chain_idx))
    if not verify_similarity(A, dec):
        raise InvariantViolation("A P != P J for the computed decomposition")
    return dec


def verify_similarity(A, dec: JordanDecomposition | None = None, *, J=None, P=None) -> bool:
    """True iff ``A P == P J`` exactly and ``P`` is invertible."""
    A = A if isinstance(A, Matrix) else Matrix(A)
    if dec is not None:
        J, P = dec.J, dec.P
    J = J if isinstance(J, Matrix) else Matrix(J)
    P = P if isinstance(P, Matrix) else Matrix(P)
    if not (A.shape == J.shape == P.shape and A.is_square):
        return False
    return A @ P == P @ J and det(P) != 0
