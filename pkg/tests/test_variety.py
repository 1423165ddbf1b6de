"""Variety engine: graded dimensions, certificates, position, replacement."""

import pytest

from nevsmt.poly import parse_polynomial
from nevsmt.variety import (
    EMPTY,
    CERTIFIED_EMPTY,
    INCONCLUSIVE,
    NONEMPTY_LIKELY,
    ReplacementPreconditionError,
    VarietyDescriptor,
    certify_empty,
    check_position,
    construct_replacement_system,
    estimate_dimension,
    hilbert_function,
    ideal_graded_dim,
    variety_degree,
)


def P(text, n_vars):
    return parse_polynomial(text, n_vars)


@pytest.fixture
def conic():
    return VarietyDescriptor(2, (P("x0*x2 - x1^2", 3),))


def test_ideal_graded_dim_examples(conic):
    gen = P("x0*x2 - x1^2", 3)
    assert ideal_graded_dim([gen], 2) == 1
    assert ideal_graded_dim([gen], 3) == 3
    assert ideal_graded_dim([], 5) == 0


def test_hilbert_examples(conic):
    assert hilbert_function(VarietyDescriptor(2), 3) == 10
    assert hilbert_function(conic, 3) == 7
    irrelevant = VarietyDescriptor(2, tuple(P(f"x{i}", 3) for i in range(3)))
    assert hilbert_function(irrelevant, 2) == 0


def test_hilbert_bound_and_equality_condition(conic):
    # H(m) <= C(m+n, n), equality iff no generator reaches degree m
    from math import comb

    for m in range(0, 6):
        h = hilbert_function(conic, m)
        assert h <= comb(m + 2, 2)
        if m < 2:
            assert h == comb(m + 2, 2)
        else:
            assert h < comb(m + 2, 2)


def test_certify_empty_examples():
    coords = [P("x0", 3), P("x1", 3), P("x2", 3)]
    verdict = certify_empty([coords])
    assert verdict.status == CERTIFIED_EMPTY and verdict.m_star == 1
    partial = certify_empty([[P("x0", 3), P("x1", 3)]])
    assert partial.status == NONEMPTY_LIKELY
    squares = certify_empty([[P("x0^2", 3), P("x1^2", 3), P("x2^2", 3)]])
    assert squares.status == CERTIFIED_EMPTY and squares.m_star == 4


def test_certify_empty_low_cap_inconclusive():
    gens = [[P("x0^2", 3), P("x1^2", 3), P("x2^2", 3)]]
    verdict = certify_empty(gens, m_cap=2)
    assert verdict.status == INCONCLUSIVE
    assert verdict.cap == 2


def test_dimension_examples(conic):
    assert estimate_dimension(VarietyDescriptor(2)) == 2
    assert estimate_dimension(VarietyDescriptor(2, (P("x0", 3),))) == 1
    assert estimate_dimension(conic) == 1


def test_degree_examples(conic):
    assert variety_degree(VarietyDescriptor(3)) == 1
    assert variety_degree(conic) == 2
    two_lines = VarietyDescriptor(2, (P("x0*x1", 3),))
    assert variety_degree(two_lines) == 2


def test_monotone_vanishing_cache():
    V = VarietyDescriptor(2, tuple(P(f"x{i}", 3) for i in range(3)))
    values = [hilbert_function(V, m) for m in range(1, 7)]
    assert values[0] == 0
    assert all(v == 0 for v in values)


def test_check_position_examples():
    P2 = VarietyDescriptor(2)
    four = [P(t, 3) for t in ("x0", "x1", "x2", "x0+x1+x2")]
    assert check_position(P2, four, 2).verdict is True
    report = check_position(P2, [P("x0", 3), P("x1", 3), P("x0+x1", 3)], 2)
    assert report.verdict is False
    assert report.witness == (0, 1, 2)
    assert check_position(P2, four, 3).verdict is True


def test_check_position_monotone_in_N():
    P2 = VarietyDescriptor(2)
    five = [P(t, 3) for t in ("x0", "x1", "x2", "x0+x1+x2", "x0+2*x1+3*x2")]
    verdicts = [check_position(P2, five, N).verdict for N in (2, 3, 4)]
    assert verdicts[0] is True
    assert all(v is True for v in verdicts)


def test_check_position_preconditions():
    P2 = VarietyDescriptor(2)
    with pytest.raises(ValueError, match="N"):
        check_position(P2, [P("x0", 3), P("x1", 3)], 1)


def test_replacement_example_chain():
    P2 = VarietyDescriptor(2)
    four = tuple(P(t, 3) for t in ("x0", "x1", "x2", "x0+x1+x2"))
    system = construct_replacement_system(P2, four, seed=0)
    assert system.polynomials[0] == four[0]
    assert system.chain_dims == (1, 0, EMPTY)
    # P_t only uses inputs 2..N-k+t
    assert len(system.coefficients[0]) == 2  # t=2: Q_2..Q_3
    assert len(system.coefficients[1]) == 3  # t=3: Q_2..Q_4


def test_replacement_determinism():
    P2 = VarietyDescriptor(2)
    four = tuple(P(t, 3) for t in ("x0", "x1", "x2", "x0+x1+x2"))
    a = construct_replacement_system(P2, four, seed=0)
    b = construct_replacement_system(P2, four, seed=0)
    assert a.coefficients == b.coefficients
    assert a.chain_dims == b.chain_dims
    c = construct_replacement_system(P2, four, seed=1)
    assert c.chain_dims == a.chain_dims  # certification independent of seed


def test_replacement_precondition_error():
    P2 = VarietyDescriptor(2)
    bad = tuple(P(t, 3) for t in ("x0", "x1", "x0+x1"))
    with pytest.raises(ReplacementPreconditionError):
        construct_replacement_system(P2, bad, seed=0)


def test_replacement_mixed_degrees_rejected():
    P2 = VarietyDescriptor(2)
    with pytest.raises(ReplacementPreconditionError, match="degree"):
        construct_replacement_system(
            P2, (P("x0", 3), P("x1^2", 3), P("x2", 3)), seed=0
        )


def test_replacement_general_position_input():
    conic = VarietyDescriptor(2, (P("x0*x2 - x1^2", 3),))
    lines = (P("x0+x1+x2", 3), P("x0-x1", 3))
    system = construct_replacement_system(conic, lines, seed=0)
    assert system.chain_dims[-1] is EMPTY
    assert len(system.coefficients[0]) == 1  # N=k: combination of Q_2 alone
