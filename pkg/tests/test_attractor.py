import hashlib
import json
from fractions import Fraction
from itertools import product
from pathlib import Path

import pytest

from conftest import sample_dilations
from tileforge.attractor import (
    TileCloud,
    _contraction_power,
    approximate,
    default_viewport,
    diameter_bound,
    export_points,
    radius_bound,
    rasterize,
)
from tileforge.digitset import DigitSet, centered_digit_set
from tileforge.errors import BudgetExceeded, UnsupportedDimension
from tileforge.ratmath import Matrix

F = Fraction
DATA = Path(__file__).parent / "data"
BIN = DigitSet.from_vectors([(0,), (1,)])
TERN = DigitSet.from_vectors([(-1,), (0,), (1,)])
SQUARE = DigitSet.from_vectors(product((0, 1), repeat=2))


def brute_cloud(A, digits, n):
    """Oracle: explicit sums sum_{j=1..n} A^-j d_j over all digit tuples."""
    Ai = A.inverse()
    powers = [Ai]
    for _ in range(n - 1):
        powers.append(powers[-1] @ Ai)
    out = set()
    for combo in product(digits, repeat=n):
        acc = [F(0)] * A.nrows
        for P, d in zip(powers, combo):
            acc = [a + b for a, b in zip(acc, P @ d)]
        out.add(tuple(acc))
    return sorted(out)


def test_approximate_examples():
    assert approximate([[2]], BIN, 3).points == [(F(k, 8),) for k in range(8)]
    assert approximate([[3]], TERN, 1).points == [(F(-1, 3),), (F(0),), (F(1, 3),)]
    A = Matrix([[2, 1], [0, 2]])
    cloud = approximate(A, SQUARE, 2)
    assert len(cloud) == 16
    assert all((4 * x).denominator == 1 for p in cloud.points for x in p)
    assert cloud.points == brute_cloud(A, SQUARE.digits, 2)


def test_approximate_matches_brute_force_on_sample():
    for A in sample_dilations(2, 10, seed=61, lo=-3, hi=3) + sample_dilations(3, 3, seed=62, lo=-2, hi=2):
        D = centered_digit_set(A)
        for n in (1, 2):
            if len(D) ** n > 5000:
                continue
            assert approximate(A, D, n).points == brute_cloud(A, D.digits, n)


def test_self_affine_recursion():
    for A in sample_dilations(2, 8, seed=63, lo=-3, hi=3):
        D = centered_digit_set(A)
        Ai = A.inverse()
        for n in range(1, 5):
            if len(D) ** (n + 1) > 8_000:
                break
            prev = approximate(A, D, n).points
            nxt = {tuple(Ai @ tuple(x + y for x, y in zip(p, d))) for p in prev for d in D.digits}
            assert approximate(A, D, n + 1).points == sorted(nxt)


def test_contraction_toward_previous_level():
    for A in sample_dilations(2, 6, seed=64, lo=-3, hi=3):
        D = centered_digit_set(A)
        dmax = max(abs(x) for d in D.digits for x in d)
        for n in (1, 2):
            if len(D) ** (n + 1) > 3000:
                break
            coarse = approximate(A, D, n).points
            fine = approximate(A, D, n + 1).points
            worst = max(
                min(max(abs(a - b) for a, b in zip(p, q)) for q in coarse) for p in fine
            )
            assert worst <= F((A ** -(n + 1)).norm_inf()) * dmax


def test_points_inside_radius_bound():
    for A in sample_dilations(2, 10, seed=65, lo=-4, hi=4):
        D = centered_digit_set(A)
        r = radius_bound(A, D)
        assert diameter_bound(A, D) == 2 * r
        n = 3 if len(D) ** 3 <= 100_000 else 2
        cloud = approximate(A, D, n)
        assert all(abs(x) <= r for p in cloud.points for x in p)


def test_diameter_examples():
    assert diameter_bound([[2]], BIN) == 2
    assert diameter_bound([[3]], TERN) == 1
    k, norms = _contraction_power(Matrix([[3, 10], [0, 3]]))
    assert k == 2 and norms == [F(13, 9), F(23, 27)]
    D = centered_digit_set([[3, 10], [0, 3]])
    # 2 * 4 * (13/9 + 23/27) / (1 - 23/27)
    assert diameter_bound([[3, 10], [0, 3]], D) == 124


def test_budget():
    with pytest.raises(BudgetExceeded):
        approximate([[3, 0], [0, 3]], centered_digit_set([[3, 0], [0, 3]]), 5, budget=10_000)


def test_rasterize_single_point():
    cloud = TileCloud.from_points([(0, 0)])
    img = rasterize(cloud, 1, 1)
    assert img.occupied == 1
    assert img.to_pgm() == b"P5\n1 1\n255\n\xff"


def test_rasterize_unit_square_is_full():
    cloud = approximate([[2, 0], [0, 2]], SQUARE, 6)
    img = rasterize(cloud, 64, 64, viewport=(0, 1, 0, 1))
    assert img.occupied == 64 * 64


def test_rasterize_rows_start_at_top():
    cloud = TileCloud.from_points([(0, 0), (F(3, 4), F(3, 4))])
    img = rasterize(cloud, 2, 2, viewport=(0, 1, 0, 1))
    assert img.pixels.tolist() == [[0, 1], [1, 0]]


def test_rasterize_needs_two_dims():
    with pytest.raises(UnsupportedDimension):
        rasterize(approximate([[2]], BIN, 2), 4, 4)


def test_golden_render():
    meta = json.loads((DATA / "render_2_1_0_2_d8_128x128.json").read_text())
    cloud = approximate([[2, 1], [0, 2]], SQUARE, 8)
    img = rasterize(cloud, 128, 128)
    assert len(cloud) == meta["cloud_points"]
    assert [f"{v.numerator}/{v.denominator}" for v in default_viewport(cloud)] == meta["viewport"]
    assert img.occupied == meta["occupied"]
    data = img.to_pgm()
    assert hashlib.sha256(data).hexdigest() == meta["sha256"]
    assert data == (DATA / "render_2_1_0_2_d8_128x128.pgm").read_bytes()


def test_export_points():
    assert export_points(TileCloud.from_points([(0,), (F(1, 2),)])) == "0\n1/2\n"
    assert export_points(TileCloud.from_points([(0, 0), (F(-1, 3), 0)])) == "-1/3,0\n0,0\n"
    lines = export_points(approximate([[3]], TERN, 2)).splitlines()
    assert len(lines) == 9
    assert all((9 * F(s)).denominator == 1 for s in lines)
    assert sorted(F(s) for s in lines) == [F(k, 9) for k in range(-4, 5)]


def test_from_points_common_denominator():
    cloud = TileCloud.from_points([(F(1, 2), F(1, 3)), (0, 1)])
    assert cloud.denominator == 6
    assert cloud.points == [(F(0), F(1)), (F(1, 2), F(1, 3))]
