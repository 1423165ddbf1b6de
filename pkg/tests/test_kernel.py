"""Kernel tests: both backends against a dense Fraction-elimination oracle."""

import random
from fractions import Fraction

import pytest

from nevsmt._kernel import CRowReducer, PyRowReducer

BACKENDS = [("py", PyRowReducer)] + (
    [("c", CRowReducer)] if CRowReducer is not None else []
)


def dense_rank_and_pivots(rows, ncols):
    m = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    pivots = []
    for col in range(ncols):
        hit = None
        for i in range(rank, len(m)):
            if m[i][col]:
                hit = i
                break
        if hit is None:
            continue
        m[rank], m[hit] = m[hit], m[rank]
        lead = m[rank][col]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / lead
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    return rank, tuple(pivots)


def random_sparse_matrix(rng, nrows, ncols, density, magnitude):
    rows = []
    for _ in range(nrows):
        row = [0] * ncols
        for j in range(ncols):
            if rng.random() < density:
                v = 0
                while v == 0:
                    v = rng.randint(-magnitude, magnitude)
                row[j] = v
        rows.append(row)
    return rows


@pytest.mark.parametrize("backend,cls", BACKENDS)
def test_simple_ranks(backend, cls):
    r = cls(3)
    assert r.add_row((0,), (1,))
    assert not r.add_row((0,), (7,))
    assert r.add_row((1, 2), (2, 3))
    assert r.rank == 2
    assert r.pivot_columns() == (0, 1)


@pytest.mark.parametrize("backend,cls", BACKENDS)
def test_duplicate_columns_merge(backend, cls):
    r = cls(4)
    # 3x0 - 3x0 + x2 == x2
    assert r.add_row((0, 0, 2), (3, -3, 1))
    assert r.pivot_columns() == (2,)


@pytest.mark.parametrize("backend,cls", BACKENDS)
def test_against_dense_oracle(backend, cls):
    rng = random.Random(11)
    for trial in range(60):
        ncols = rng.randint(1, 14)
        nrows = rng.randint(1, 18)
        magnitude = rng.choice([3, 10, 2 ** 40, 2 ** 70])
        rows = random_sparse_matrix(rng, nrows, ncols, 0.4, magnitude)
        reducer = cls(ncols)
        for row in rows:
            cols = tuple(j for j, v in enumerate(row) if v)
            vals = tuple(v for v in row if v)
            reducer.add_row(cols, vals)
        rank, pivots = dense_rank_and_pivots(rows, ncols)
        assert reducer.rank == rank, f"trial {trial}"
        assert reducer.pivot_columns() == pivots, f"trial {trial}"


@pytest.mark.skipif(CRowReducer is None, reason="compiled kernel not built")
def test_backends_agree():
    rng = random.Random(23)
    for trial in range(40):
        ncols = rng.randint(1, 20)
        nrows = rng.randint(1, 25)
        magnitude = rng.choice([5, 2 ** 35, 2 ** 80])
        rows = random_sparse_matrix(rng, nrows, ncols, 0.35, magnitude)
        a = PyRowReducer(ncols)
        b = CRowReducer(ncols)
        for row in rows:
            cols = tuple(j for j, v in enumerate(row) if v)
            vals = tuple(v for v in row if v)
            assert a.add_row(cols, vals) == b.add_row(cols, vals)
        assert a.rank == b.rank
        assert a.pivot_columns() == b.pivot_columns()


@pytest.mark.parametrize("backend,cls", BACKENDS)
def test_rank_invariance_under_scaling_and_permutation(backend, cls):
    rng = random.Random(7)
    rows = random_sparse_matrix(rng, 10, 8, 0.5, 9)
    base_rank, base_pivots = dense_rank_and_pivots(rows, 8)
    shuffled = rows[:]
    rng.shuffle(shuffled)
    scaled = [[v * rng.choice([1, 2, -3, 5]) for v in row] for row in shuffled]
    reducer = cls(8)
    for row in scaled:
        cols = tuple(j for j, v in enumerate(row) if v)
        vals = tuple(v for v in row if v)
        reducer.add_row(cols, vals)
    assert reducer.rank == base_rank
    assert reducer.pivot_columns() == base_pivots


@pytest.mark.skipif(CRowReducer is None, reason="compiled kernel not built")
def test_overflow_promotion():
    # values sized so one combine step must overflow int64
    big = 2 ** 61
    a = PyRowReducer(3)
    b = CRowReducer(3)
    rows = [((0, 1), (big - 1, big - 3)), ((0, 2), (big - 5, big - 7)),
            ((1, 2), (3, 5))]
    for cols, vals in rows:
        assert a.add_row(cols, vals) == b.add_row(cols, vals)
    assert a.rank == b.rank == 3
    assert a.pivot_columns() == b.pivot_columns()
