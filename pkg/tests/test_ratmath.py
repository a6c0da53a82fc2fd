import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tileforge.errors import DimensionError, NoSolutionError, RankError, SingularMatrixError
from tileforge.ratmath import (
    Matrix,
    char_poly,
    det,
    hnf,
    integerize,
    inverse,
    lattice_points_in_box,
    poly_eval,
    rank,
    solve_linear,
)


def square(n, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


any_square = st.integers(1, 4).flatmap(square)


# -- examples ---------------------------------------------------------------


@pytest.mark.parametrize(
    "rows, expected",
    [([[3, 10], [0, 3]], 9), ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1), ([[3, 4], [0, 3]], 9)],
)
def test_det_examples(rows, expected):
    assert det(rows) == expected


def test_det_rational_and_zero_pivot():
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[Fraction(1, 2), 0], [0, Fraction(2, 3)]]) == Fraction(1, 3)
    assert det([[1, 2], [2, 4]]) == 0


def test_det_non_square():
    with pytest.raises(DimensionError):
        det([[1, 2, 3], [4, 5, 6]])


def test_inverse_examples():
    assert inverse([[3, 1], [0, 3]]) == Matrix([[3, -1], [0, 3]]) * Fraction(1, 9)
    assert inverse(Matrix.identity(3)) == Matrix.identity(3)
    assert inverse([[2, 0], [0, 2]]) == Matrix([[Fraction(1, 2), 0], [0, Fraction(1, 2)]])


def test_inverse_singular():
    with pytest.raises(SingularMatrixError):
        inverse([[1, 2], [2, 4]])


@pytest.mark.parametrize(
    "rows, expected",
    [([[3, 1], [0, 3]], [1, -6, 9]), ([[4, 1], [1, 4]], [1, -8, 15]), ([[2]], [1, -2])],
)
def test_char_poly_examples(rows, expected):
    assert char_poly(rows) == expected


def test_hnf_examples():
    assert hnf([(1, 0), (0, 1)], 2) == Matrix.identity(2)
    H = hnf([(3, 0), (4, 3)], 2)
    assert H.columns() == [(1, 3), (0, 9)]
    assert hnf([(2, 0), (0, 2), (1, 1)], 2).columns() == [(1, 1), (0, 2)]


def test_hnf_rank_deficient():
    with pytest.raises(RankError):
        hnf([(1, 2), (2, 4)], 2)
    with pytest.raises(RankError):
        hnf([(0, 1)], 2)


def test_solve_linear_examples():
    A = Matrix([[3, 10], [0, 3]])
    x, ker = solve_linear(A - 3 * Matrix.identity(2), (1, 0))
    assert x == (0, Fraction(1, 10))
    assert ker == [(1, 0)]
    assert solve_linear(Matrix.identity(3), (4, -1, 2)) == ((4, -1, 2), [])
    x, ker = solve_linear(Matrix.zeros(2), (0, 0))
    assert x == (0, 0)
    assert rank(ker) == 2


def test_solve_linear_inconsistent():
    with pytest.raises(NoSolutionError):
        solve_linear([[1, 1], [1, 1]], (0, 1))


def test_integerize_keeps_signs_and_content():
    assert integerize([(0, Fraction(1, 10)), (Fraction(-1, 5), 0)]) == [(0, 1), (-2, 0)]


def test_matrix_ops():
    A = Matrix([[3, 10], [0, 3]])
    assert A @ (1, 1) == (13, 3)
    assert A**0 == Matrix.identity(2)
    assert A**-1 == inverse(A)
    assert (A**2) @ (A**-2) == Matrix.identity(2)
    assert A.T == Matrix([[3, 0], [10, 3]])
    assert A.norm_inf() == 13
    assert Matrix.block_diag([Matrix([[2]]), Matrix.jordan_block(3, 2)]) == Matrix(
        [[2, 0, 0], [0, 3, 1], [0, 0, 3]]
    )
    assert hash(Matrix([[1, 2]])) == hash(Matrix([[Fraction(2, 2), 2]]))


def test_lattice_points_in_box_order():
    assert list(lattice_points_in_box((0, -1), (1, 0))) == [(0, -1), (0, 0), (1, -1), (1, 0)]


# -- properties -------------------------------------------------------------


@given(any_square)
def test_det_matches_sympy(rows):
    assert det(rows) == sympy.Matrix(rows).det()


@given(any_square)
def test_inverse_is_two_sided(rows):
    M = Matrix(rows)
    if det(M) == 0:
        return
    Mi = inverse(M)
    assert M @ Mi == Matrix.identity(M.nrows)
    assert Mi @ M == Matrix.identity(M.nrows)


@given(any_square)
def test_cayley_hamilton(rows):
    M = Matrix(rows)
    assert poly_eval(char_poly(M), M) == Matrix.zeros(M.nrows)


@given(any_square)
def test_char_poly_matches_sympy(rows):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.Matrix(rows).charpoly(x).as_expr(), x).all_coeffs()
    assert char_poly(rows) == [int(c) for c in expected]


@settings(max_examples=200)
@given(
    st.integers(1, 3).flatmap(
        lambda m: st.tuples(
            st.just(m),
            st.lists(st.lists(st.integers(-7, 7), min_size=m, max_size=m), min_size=m, max_size=m + 3),
            st.randoms(use_true_random=False),
        )
    )
)
def test_hnf_canonical(data):
    m, gens, rnd = data
    try:
        H = hnf(gens, m)
    except RankError:
        assert rank(gens) < m
        return
    # lower triangular, positive diagonal, reduced left of the diagonal
    for i in range(m):
        assert H[i, i] > 0
        for j in range(m):
            if j > i:
                assert H[i, j] == 0
            elif j < i:
                assert 0 <= H[i, j] < H[i, i]
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    assert hnf(shuffled, m) == H
    assert hnf(H.columns(), m) == H
    # every generator is an integer combination of the basis
    for g in gens:
        x, _ = solve_linear(H, g)
        assert all(Fraction(c).denominator == 1 for c in x)


@given(st.integers(1, 3).flatmap(square))
def test_hnf_index_equals_det(rows):
    G = Matrix(rows)
    d = det(G)
    if d == 0:
        return
    H = hnf(G.columns(), G.nrows)
    assert det(H) == abs(d)


def test_hnf_index_counts_cosets():
    # index of the lattice = number of distinct residues of a big box
    rng = random.Random(7)
    for _ in range(20):
        gens = [tuple(rng.randint(-4, 4) for _ in range(2)) for _ in range(3)]
        try:
            H = hnf(gens, 2)
        except RankError:
            continue
        idx = H[0, 0] * H[1, 1]
        P = sympy.Matrix(H.rows)
        reps = set()
        for z in lattice_points_in_box((0, 0), (idx - 1, idx - 1)):
            c = P.LUsolve(sympy.Matrix(z))
            reps.add(tuple(t % 1 for t in c))
        assert len(reps) == idx
