"""Filtration tables, stability rule, and the weighted-sum lower bound."""

from fractions import Fraction
from math import comb

import pytest

from nevsmt.filtration import (
    FiltrationParams,
    compute_b,
    count_indices,
    filtration_dims,
    stable_quotient_violations,
)
from nevsmt.poly import parse_polynomial


def P(text, n_vars):
    return parse_polynomial(text, n_vars)


def test_line_power_filtration():
    params = FiltrationParams(1, 1, 4, (P("x0", 2),))
    table = filtration_dims(params)
    assert table.indices == ((0,), (1,), (2,), (3,), (4,))
    assert [table.dims[i] for i in table.indices] == [5, 4, 3, 2, 1]
    assert [table.quotients[i] for i in table.indices] == [1, 1, 1, 1, 1]


def test_two_variable_index_order_and_telescoping():
    params = FiltrationParams(2, 1, 2, (P("x0", 3), P("x1", 3)))
    table = filtration_dims(params)
    assert table.indices == (
        (0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)
    )
    assert sum(table.quotients.values()) == comb(4, 2) == 6
    assert table.dims[(0, 0)] == comb(4, 2)


def test_dims_strictly_decreasing_in_general_position():
    params = FiltrationParams(
        2, 1, 4, (P("x0 + x1 + x2", 3), P("x0 - 2*x1 + 3*x2", 3))
    )
    table = filtration_dims(params)
    dims = [table.dims[i] for i in table.indices]
    assert all(a > b for a, b in zip(dims, dims[1:]))
    assert dims[0] == comb(6, 2)
    assert dims[-1] == 1


def test_stability_rule_examples():
    params = FiltrationParams(1, 1, 4, (P("x0", 2),))
    assert stable_quotient_violations(params) == []
    params2 = FiltrationParams(1, 2, 8, (P("x0^2", 2),))
    table2 = filtration_dims(params2)
    # d sigma(i) < u - n d <=> 2i < 6: those quotients must equal d^n = 2
    for idx in table2.indices:
        if 2 * idx[0] < 6:
            assert table2.quotients[idx] == 2
    assert stable_quotient_violations(params2, table2) == []


def test_compute_b_example():
    params = FiltrationParams(1, 1, 4, (P("x0", 2),))
    table = filtration_dims(params)
    b, margins = compute_b(table)
    assert b == (Fraction(10),)
    assert margins == (Fraction(4),)  # bound (3/2) * C(4,1) = 6


def test_compute_b_minimal_u():
    params = FiltrationParams(1, 1, 1, (P("x0", 2),))
    table = filtration_dims(params)
    assert table.indices == ((0,), (1,))
    b, _ = compute_b(table)
    assert b == (Fraction(table.quotients[(1,)]),)


def test_b_symmetry_under_coordinate_swap():
    params = FiltrationParams(2, 1, 3, (P("x0", 3), P("x1", 3)))
    b, _ = compute_b(filtration_dims(params))
    assert b[0] == b[1]


def test_count_indices():
    assert count_indices(4, 1, 1) == 5
    assert count_indices(6, 2, 2) == 10
    assert count_indices(3, 3, 4) == 5  # u=d: C(1+n, n) = n+1
    with pytest.raises(ValueError, match="divisible"):
        count_indices(5, 2, 1)


def test_params_validation():
    with pytest.raises(ValueError, match="divisible"):
        FiltrationParams(1, 2, 5, (P("x0^2", 2),))
    with pytest.raises(ValueError, match="exactly"):
        FiltrationParams(2, 1, 4, (P("x0", 3),))
    with pytest.raises(ValueError, match="degree"):
        FiltrationParams(1, 2, 4, (P("x0", 2),))


def test_general_position_rejection():
    # x0 and x0 + x1 share no point in P^2... they do: (0:0:1); dim 0 is fine
    # but a repeated hypersurface keeps dimension 1 and must be rejected
    params = FiltrationParams(2, 1, 2, (P("x0", 3), P("x0", 3)))
    with pytest.raises(ValueError, match="general position"):
        params.check_general_position()
