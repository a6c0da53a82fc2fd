import random
from fractions import Fraction
from itertools import product

import pytest

from tileforge.errors import NotRationalSpectrum
from tileforge.ratmath import Matrix
from tileforge.spectrum import is_dilation

ACCEPTANCE_LINES = []


def sample_dilations(m, count, seed, lo=-6, hi=6):
    """Seeded rejection sample of integer dilation matrices with integer spectrum."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        A = Matrix([[rng.randint(lo, hi) for _ in range(m)] for _ in range(m)])
        try:
            if is_dilation(A).ok:
                out.append(A)
        except NotRationalSpectrum:
            pass
    return out


def brute_centered_digits(A):
    """Oracle: scan a generous box and test A^-1 z in (-1/2, 1/2]^m with Fractions.

    Solves A x = z by Cramer's rule, independent of the library's inverse
    and of the integer half-open kernel.
    """
    rows = [list(r) for r in A.rows]
    m = len(rows)

    def det(M):
        if len(M) == 1:
            return M[0][0]
        return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(len(M)))

    d = det(rows)
    R = max(sum(abs(x) for x in r) for r in rows) + 1
    half = Fraction(1, 2)
    out = []
    for z in product(range(-R, R + 1), repeat=m):
        ok = True
        for i in range(m):
            Mi = [r[:i] + [z[k]] + r[i + 1:] for k, r in enumerate(rows)]
            x = Fraction(det(Mi), d)
            if not (-half < x <= half):
                ok = False
                break
        if ok:
            out.append(z)
    return sorted(out)


def brute_level_set(A, digits, n):
    """Oracle: explicit sums sum_{i<n} A^i d_i over all digit tuples."""
    powers = [Matrix.identity(A.nrows)]
    for _ in range(n - 1):
        powers.append(powers[-1] @ A)
    imgs = [[P @ d for d in digits] for P in powers]
    out = set()
    for combo in product(*imgs):
        out.add(tuple(sum(c[i] for c in combo) for i in range(A.nrows)))
    return sorted(out)


def bfs_connected(points, steps):
    """Oracle: breadth-first search over a Python set."""
    pts = set(map(tuple, points))
    if not pts:
        return True
    start = min(pts)
    seen, stack = {start}, [start]
    while stack:
        p = stack.pop()
        for b in steps:
            for s in (1, -1):
                q = tuple(a + s * c for a, c in zip(p, b))
                if q in pts and q not in seen:
                    seen.add(q)
                    stack.append(q)
    return len(seen) == len(pts)


@pytest.fixture(scope="session")
def dilations_2x2():
    return sample_dilations(2, 200, seed=2024)


@pytest.fixture(scope="session")
def dilations_3x3():
    return sample_dilations(3, 50, seed=3033)


@pytest.fixture
def acceptance_report():
    def record(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" :: {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
