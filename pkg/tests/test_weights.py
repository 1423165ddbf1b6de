"""Chow and Hilbert weights: examples, oracles and scaling laws."""

import random
from fractions import Fraction

import pytest

from nevsmt.poly import HomogeneousPolynomial, parse_polynomial
from nevsmt.variety import VarietyDescriptor
from nevsmt.weights import (
    BracketPolynomial,
    chow_weight,
    chow_weight_floor_margin,
    coordinate_subspace_chow_form,
    expand_to_u_monomials,
    hilbert_weight,
    parse_bracket_polynomial,
    weight_comparison_margin,
)


def test_coordinate_chow_form_expansion():
    F = coordinate_subspace_chow_form((0, 1), 2)
    expansion = expand_to_u_monomials(F)
    assert expansion == {
        ((0, 0), (1, 1)): Fraction(1),
        ((0, 1), (1, 0)): Fraction(-1),
    }
    point = coordinate_subspace_chow_form((0,), 2)
    assert expand_to_u_monomials(point) == {((0, 0),): Fraction(1)}


def test_bracket_leibniz_term_count():
    F = coordinate_subspace_chow_form((0, 1, 2), 3)
    assert len(expand_to_u_monomials(F)) == 6  # (k+1)! for k=2


def test_chow_weight_examples():
    F = coordinate_subspace_chow_form((0, 1), 2)
    assert chow_weight(F, (3, 2, 1)) == 5
    assert chow_weight(F, (0, 0, 0)) == 0
    Fab = BracketPolynomial(3, 1, ((1, ((0, 1), (2, 3))),))
    assert chow_weight(Fab, (4, 3, 2, 1)) == 10


def test_chow_weight_cancellation_is_exact():
    # [0,1] - [0,1] cancels; the zero form must be rejected, not maxed over
    F = BracketPolynomial(2, 1, ((1, ((0, 1),)), (-1, ((0, 1),))))
    assert F.is_zero
    with pytest.raises(ValueError):
        chow_weight(F, (1, 1, 1))


def test_chow_weight_multi_term():
    F = parse_bracket_polynomial("[0,1][0,1] + 2 * [0,2][1,2]", 2)
    # weights: first monomial 2(c0+c1), second (c0+c2)+(c1+c2)
    assert chow_weight(F, (5, 1, 0)) == 12
    assert chow_weight(F, (0, 0, 7)) == 14


def test_bracket_parse_round_trip():
    text = "3/2 * [0,1][1,2] + [0,2][0,2] - 2 * [1,2][1,2]"
    F = parse_bracket_polynomial(text, 2)
    assert parse_bracket_polynomial(str(F), 2) == F


def test_bracket_validation():
    with pytest.raises(ValueError, match="bracket-degree"):
        BracketPolynomial(2, 1, ((1, ((0, 1),)), (1, ((0, 1), (1, 2)))))
    with pytest.raises(ValueError, match="size"):
        BracketPolynomial(2, 1, ((1, ((0, 1, 2),)),))


def test_hilbert_weight_examples():
    P1 = VarietyDescriptor(1)
    res = hilbert_weight(P1, 2, (1, 0))
    assert res.value == 3
    assert res.basis == ((2, 0), (1, 1), (0, 2))
    conic = VarietyDescriptor(2, (parse_polynomial("x0*x2 - x1^2", 3),))
    res = hilbert_weight(conic, 2, (1, 0, 0))
    assert res.value == 4
    assert (0, 2, 0) not in res.basis  # the x1^2 residue is dropped


def test_hilbert_weight_uniform_c():
    conic = VarietyDescriptor(2, (parse_polynomial("x0*x2 - x1^2", 3),))
    from nevsmt.variety import hilbert_function

    for m in (1, 2, 3):
        H = hilbert_function(conic, m)
        assert hilbert_weight(conic, m, (1, 1, 1)).value == m * H


def test_hilbert_weight_bounds_random():
    rng = random.Random(12)
    conic = VarietyDescriptor(2, (parse_polynomial("x0*x2 - x1^2", 3),))
    from nevsmt.variety import hilbert_function

    for _ in range(10):
        m = rng.randint(1, 4)
        c = tuple(rng.randint(0, 8) for _ in range(3))
        H = hilbert_function(conic, m)
        S = hilbert_weight(conic, m, c).value
        assert m * min(c) * H <= S <= m * max(c) * H


def test_weight_scaling_laws():
    conic = VarietyDescriptor(2, (parse_polynomial("x0*x2 - x1^2", 3),))
    F = coordinate_subspace_chow_form((0, 2), 2)
    c = (3, 1, 2)
    lam = 4
    sc = tuple(lam * v for v in c)
    base = hilbert_weight(conic, 3, c)
    scaled = hilbert_weight(conic, 3, sc)
    assert scaled.value == lam * base.value
    assert scaled.basis == base.basis  # tie-break invariant under scaling
    assert chow_weight(F, sc) == lam * chow_weight(F, c)


def test_comparison_margin_examples():
    line = VarietyDescriptor(2, (parse_polynomial("x2", 3),))
    F = coordinate_subspace_chow_form((0, 1), 2)
    margin = weight_comparison_margin(line, F, 3, (2, 1, 0))
    assert margin >= 0
    # c = 0 gives margin 0 exactly
    assert weight_comparison_margin(line, F, 3, (0, 0, 0)) == 0
    with pytest.raises(ValueError, match="m >"):
        weight_comparison_margin(line, F, 1, (2, 1, 0))


def test_comparison_margin_full_space_random():
    rng = random.Random(77)
    P2 = VarietyDescriptor(2)
    F = coordinate_subspace_chow_form((0, 1, 2), 2)
    for _ in range(10):
        c = tuple(rng.randint(0, 5) for _ in range(3))
        assert weight_comparison_margin(P2, F, 2, c) >= 0


def test_floor_margin_example():
    Y = VarietyDescriptor(3, (parse_polynomial("x2", 4),
                              parse_polynomial("x3", 4)))
    F = coordinate_subspace_chow_form((0, 1), 3)
    margin = chow_weight_floor_margin(Y, F, (4, 3, 2, 1), (0, 1))
    assert margin == 0
    with pytest.raises(ValueError, match="positive"):
        chow_weight_floor_margin(Y, F, (4, 3, 0, 1), (0, 1))


def test_floor_margin_precondition():
    # {x0=x1=x3=0} is the point (0:0:1:0), which lies on Y = {x3=0}
    Y = VarietyDescriptor(3, (parse_polynomial("x3", 4),))
    F = coordinate_subspace_chow_form((0, 1, 3), 3)
    with pytest.raises(ValueError, match="not certified empty"):
        chow_weight_floor_margin(Y, F, (1, 1, 1, 1), (0, 1, 3))


def test_greedy_equals_bruteforce_random_small():
    from nevsmt.acceptance import brute_force_hilbert_weight

    rng = random.Random(5)
    gens = [
        (),
        (parse_polynomial("x0*x2 - x1^2", 3),),
        (parse_polynomial("x0^2", 3), parse_polynomial("x1^2", 3),
         parse_polynomial("x2^2", 3)),
    ]
    for _ in range(8):
        V = VarietyDescriptor(2, rng.choice(gens))
        m = rng.randint(1, 2)
        from nevsmt.variety import hilbert_function

        if hilbert_function(V, m) > 6:
            continue
        c = tuple(rng.randint(0, 6) for _ in range(3))
        assert hilbert_weight(V, m, c).value == brute_force_hilbert_weight(V, m, c)
