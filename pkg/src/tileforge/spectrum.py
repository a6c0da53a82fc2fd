"""Integer spectra of integer matrices and the dilation test."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import NamedTuple

from .errors import NotADilation, NotRationalSpectrum
from .ratmath import Matrix, char_poly


@dataclass(frozen=True)
class EigenStructure:
    """Integer eigenvalues with algebraic multiplicities, ascending."""

    eigenvalues: tuple[tuple[int, int], ...]
    char_poly: tuple[int, ...]

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(self.eigenvalues)

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def as_list(self) -> list[int]:
        """Eigenvalues repeated by multiplicity."""
        return [lam for lam, m in self.eigenvalues for _ in range(m)]


class DilationCheck(NamedTuple):
    ok: bool
    witness: int | None


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _synthetic_div(coeffs: list[int], r: int) -> tuple[list[int], int]:
    """Divide by (x - r); returns quotient and remainder."""
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + r * out[-1])
    return out[:-1], out[-1]


def integer_eigenvalues(A) -> EigenStructure:
    """Factor the characteristic polynomial of ``A`` completely over Z.

    Raises NotRationalSpectrum if any irreducible factor of degree > 1
    remains; for a monic integer polynomial every rational root is an
    integer dividing the constant term.
    """
    A = A if isinstance(A, Matrix) else Matrix(A)
    cp = char_poly(A)
    poly = list(cp)
    roots: dict[int, int] = {}
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
        roots[0] = roots.get(0, 0) + 1
    if len(poly) > 1:
        for d in _divisors(poly[-1]):
            for r in (d, -d):
                while len(poly) > 1:
                    q, rem = _synthetic_div(poly, r)
                    if rem:
                        break
                    poly = q
                    roots[r] = roots.get(r, 0) + 1
    if len(poly) > 1:
        raise NotRationalSpectrum(
            f"characteristic polynomial has no integer-root factorisation; residual factor {poly}",
            residual=tuple(poly),
        )
    return EigenStructure(tuple(sorted(roots.items())), tuple(cp))


def is_dilation(A) -> DilationCheck:
    """True iff every (integer) eigenvalue has absolute value at least 2.

    On failure the witness is the offending eigenvalue of smallest
    absolute value.  NotRationalSpectrum propagates.
    """
    spec = integer_eigenvalues(A)
    bad = [lam for lam, _ in spec.eigenvalues if abs(lam) < 2]
    if bad:
        return DilationCheck(False, min(bad, key=lambda v: (abs(v), v)))
    return DilationCheck(True, None)


def require_dilation(A) -> EigenStructure:
    """Integer spectrum of ``A``, raising NotADilation when out of scope."""
    spec = integer_eigenvalues(A)
    check = is_dilation(A)
    if not check.ok:
        raise NotADilation(f"not a dilation matrix: eigenvalue {check.witness}", eigenvalue=check.witness)
    return spec
