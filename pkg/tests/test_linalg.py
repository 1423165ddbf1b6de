"""Rational matrices and exact rank."""

import random
from fractions import Fraction

from nevsmt.linalg import RationalMatrix, clear_denominators, rational_rank


def test_rank_examples():
    assert rational_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (3, {0, 1, 2})
    assert rational_rank([[0, 0], [0, 0]]) == (0, set())
    assert rational_rank([[1, 2], [2, 4]]) == (1, {0})


def test_rank_fractions():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 3), Fraction(1, 2)]]
    assert rational_rank(rows) == (2, {0, 1})
    # [3/2, 1] is 3 * [1/2, 1/3]: proportional rows collapse
    rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1)]]
    assert rational_rank(rows) == (1, {0})


def test_rational_matrix_validation():
    m = RationalMatrix(((1, 2), (3, 4)))
    assert m.rows == 2 and m.cols == 2
    assert rational_rank(m) == (2, {0, 1})


def test_clear_denominators():
    cols, vals = clear_denominators([Fraction(1, 2), 0, Fraction(2, 3)])
    assert cols == (0, 2)
    assert vals == (3, 4)


def test_rank_invariance_random():
    rng = random.Random(9)
    for _ in range(20):
        rows = [
            [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(6)]
            for _ in range(8)
        ]
        rank, pivots = rational_rank(rows)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        scaled = []
        for row in shuffled:
            factor = Fraction(rng.choice([1, -2, 3, 5]), rng.randint(1, 3))
            scaled.append([v * factor for v in row])
        assert rational_rank(scaled) == (rank, pivots)
